#include "jive/moments.hpp"

#include <array>
#include <cmath>

#include "jive/linalg.hpp"
#include "jive/rng.hpp"

namespace jive {

namespace {

struct Pattern {
    int degree;
    // transpose flags for the E factors, in order (true = E^T)
    std::array<bool, 4> t;
};

Pattern pattern_of(MomentIdentity id) {
    switch (id) {
        case MomentIdentity::EAE: return {2, {false, false, false, false}};
        case MomentIdentity::EAET: return {2, {false, true, false, false}};
        case MomentIdentity::TrEAE: return {2, {false, false, false, false}};
        case MomentIdentity::D4_1: return {4, {false, true, false, true}};
        case MomentIdentity::D4_2: return {4, {false, false, true, true}};
        case MomentIdentity::D4_3: return {4, {true, false, false, true}};
        case MomentIdentity::D4_4: return {4, {true, false, false, false}};
        case MomentIdentity::D4_5: return {4, {false, true, false, false}};
        case MomentIdentity::D4_6: return {4, {false, false, true, false}};
        case MomentIdentity::D4_7: return {4, {false, false, false, true}};
        case MomentIdentity::D4_8: return {4, {false, false, false, false}};
        case MomentIdentity::Odd3: return {3, {false, false, false, false}};
    }
    throw UnknownIdentity("bad moment identity");
}

std::size_t rows_of(bool transposed, std::size_t n1, std::size_t n2) {
    return transposed ? n2 : n1;
}
std::size_t cols_of(bool transposed, std::size_t n1, std::size_t n2) {
    return transposed ? n1 : n2;
}

double trace(const Matrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("trace of a non-square matrix");
    double t = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
    return t;
}

/// Tr(X Y) = sum_ij X_ij Y_ji
double trace_prod(const Matrix& x, const Matrix& y) {
    if (x.cols() != y.rows() || x.rows() != y.cols()) {
        throw DimensionMismatch("trace_prod shape mismatch");
    }
    double t = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) t += x(i, j) * y(j, i);
    return t;
}

/// Tr(X Y^T) = <X, Y> (same shapes)
double trace_prod_nt(const Matrix& x, const Matrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
        throw DimensionMismatch("trace_prod_nt shape mismatch");
    }
    double t = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) t += x.data()[i] * y.data()[i];
    return t;
}

void check_shape(const Matrix& m, std::size_t r, std::size_t c, const char* name) {
    if (m.rows() != r || m.cols() != c) {
        throw DimensionMismatch(std::string("moment operand ") + name + " must be " +
                                std::to_string(r) + "x" + std::to_string(c));
    }
}

Matrix scaled(Matrix m, double s) {
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] *= s;
    return m;
}

Matrix scaled_identity(std::size_t n, double s) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = s;
    return m;
}

Matrix add3(Matrix x, const Matrix& y, const Matrix& z) {
    add_scaled(x, y, 1.0);
    add_scaled(x, z, 1.0);
    return x;
}

}  // namespace

std::string to_string(MomentIdentity id) {
    switch (id) {
        case MomentIdentity::EAE: return "EAE";
        case MomentIdentity::EAET: return "EAET";
        case MomentIdentity::TrEAE: return "TrEAE";
        case MomentIdentity::D4_1: return "D4_1";
        case MomentIdentity::D4_2: return "D4_2";
        case MomentIdentity::D4_3: return "D4_3";
        case MomentIdentity::D4_4: return "D4_4";
        case MomentIdentity::D4_5: return "D4_5";
        case MomentIdentity::D4_6: return "D4_6";
        case MomentIdentity::D4_7: return "D4_7";
        case MomentIdentity::D4_8: return "D4_8";
        case MomentIdentity::Odd3: return "Odd3";
    }
    return "?";
}

MomentIdentity parse_moment_identity(const std::string& s) {
    for (MomentIdentity id : all_moment_identities()) {
        if (to_string(id) == s) return id;
    }
    throw UnknownIdentity("unknown moment identity: " + s);
}

const std::vector<MomentIdentity>& all_moment_identities() {
    static const std::vector<MomentIdentity> ids = {
        MomentIdentity::EAE,  MomentIdentity::EAET, MomentIdentity::TrEAE,
        MomentIdentity::D4_1, MomentIdentity::D4_2, MomentIdentity::D4_3,
        MomentIdentity::D4_4, MomentIdentity::D4_5, MomentIdentity::D4_6,
        MomentIdentity::D4_7, MomentIdentity::D4_8, MomentIdentity::Odd3,
    };
    return ids;
}

MomentShapes moment_shapes(MomentIdentity id, std::size_t n1, std::size_t n2) {
    if (n1 < 1 || n2 < 1) throw DimensionMismatch("moment shapes need n1, n2 >= 1");
    MomentShapes s;
    const Pattern p = pattern_of(id);
    s.degree = p.degree;
    switch (id) {
        case MomentIdentity::EAE:
        case MomentIdentity::TrEAE:
            s.a_rows = n2; s.a_cols = n1;
            s.out_rows = n1; s.out_cols = n2;
            return s;
        case MomentIdentity::EAET:
            s.a_rows = n2; s.a_cols = n2;
            s.out_rows = n1; s.out_cols = n1;
            return s;
        case MomentIdentity::Odd3:
            s.a_rows = n2; s.a_cols = n1;
            s.out_rows = n1; s.out_cols = n2;
            return s;
        default: {
            // degree 4: operand shapes follow the factor chain
            s.a_rows = cols_of(p.t[0], n1, n2); s.a_cols = rows_of(p.t[1], n1, n2);
            s.b_rows = cols_of(p.t[1], n1, n2); s.b_cols = rows_of(p.t[2], n1, n2);
            s.c_rows = cols_of(p.t[2], n1, n2); s.c_cols = rows_of(p.t[3], n1, n2);
            s.out_rows = rows_of(p.t[0], n1, n2); s.out_cols = cols_of(p.t[3], n1, n2);
            return s;
        }
    }
}

Matrix closed_form_deg2(MomentIdentity id, const Matrix& a, double sigma, std::size_t n1,
                        std::size_t n2) {
    const MomentShapes s = moment_shapes(id, n1, n2);
    if (s.degree != 2) throw UnknownIdentity("closed_form_deg2: not a degree-2 identity");
    check_shape(a, s.a_rows, s.a_cols, "A");
    const double s2 = sigma * sigma;
    switch (id) {
        case MomentIdentity::EAE:
        case MomentIdentity::TrEAE:
            return scaled(a.transposed(), s2);
        default:  // EAET
            return scaled_identity(n1, s2 * trace(a));
    }
}

Matrix closed_form_deg4(MomentIdentity id, const Matrix& a, const Matrix& b, const Matrix& c,
                        double sigma) {
    const Pattern p = pattern_of(id);
    if (p.degree != 4) throw UnknownIdentity("closed_form_deg4: not a degree-4 identity");
    const double s4 = sigma * sigma * sigma * sigma;
    switch (id) {
        case MomentIdentity::D4_1:
            return scaled(add3(scaled(b, trace(c) * trace(a)),
                               scaled(b.transposed(), trace_prod_nt(a, c)),
                               scaled_identity(b.rows(), trace(b) * trace_prod(a, c))),
                          s4);
        case MomentIdentity::D4_2:
            return scaled(add3(matmul_nt(matmul_tn(a, b), c), matmul(matmul(c, b), a),
                               scaled_identity(a.cols(), trace(b) * trace_prod(a, c))),
                          s4);
        case MomentIdentity::D4_3:
            return scaled(add3(scaled(b, trace(c) * trace(a)), matmul(matmul(c, b), a),
                               matmul_nt(matmul_tn(c, b), a)),
                          s4);
        case MomentIdentity::D4_4:
            return scaled(add3(scaled(matmul_nt(b, c), trace(a)),
                               matmul(c, matmul(b, a).transposed()),
                               scaled_identity(b.rows(), trace_prod(matmul_nt(a, b), c))),
                          s4);
        case MomentIdentity::D4_5:
            return scaled(add3(scaled(matmul_nt(b, c), trace(a)),
                               matmul(matmul_tn(b, c.transposed()), a),
                               scaled(matmul_tn(c, a.transposed()), trace(b))),
                          s4);
        case MomentIdentity::D4_6:
            return scaled(add3(scaled(matmul_tn(a, b), trace(c)),
                               matmul(c, matmul_tn(a, b.transposed())),
                               scaled(matmul_tn(c, a.transposed()), trace(b))),
                          s4);
        case MomentIdentity::D4_7:
            return scaled(add3(scaled(matmul_tn(a, b), trace(c)),
                               matmul(matmul_tn(b, c.transposed()), a),
                               scaled_identity(a.cols(), trace_prod(matmul_nt(a, b), c))),
                          s4);
        case MomentIdentity::D4_8:
            return scaled(add3(matmul_nt(matmul_tn(a, b), c),
                               scaled(b.transposed(), trace_prod_nt(a, c)),
                               matmul_tn(c, matmul_nt(b, a))),
                          s4);
        default:
            throw UnknownIdentity("closed_form_deg4: bad identity");
    }
}

Matrix closed_form(MomentIdentity id, const Matrix& a, const Matrix* b, const Matrix* c,
                   double sigma, std::size_t n1, std::size_t n2) {
    const MomentShapes s = moment_shapes(id, n1, n2);
    switch (s.degree) {
        case 2:
            return closed_form_deg2(id, a, sigma, n1, n2);
        case 3:
            check_shape(a, s.a_rows, s.a_cols, "A");
            return Matrix(s.out_rows, s.out_cols);  // odd degree: zero mean
        default: {
            if (!b || !c) throw DimensionMismatch("degree-4 identity needs B and C");
            check_shape(a, s.a_rows, s.a_cols, "A");
            check_shape(*b, s.b_rows, s.b_cols, "B");
            check_shape(*c, s.c_rows, s.c_cols, "C");
            return closed_form_deg4(id, a, *b, *c, sigma);
        }
    }
}

namespace {

// Tiny fixed-capacity matrix used inside the sampling loop; avoids per-sample
// allocation. Shapes are capped at 8x8 by mc_verify.
struct Buf {
    std::size_t r = 0, c = 0;
    double v[64];

    void from(const Matrix& m) {
        r = m.rows();
        c = m.cols();
        for (std::size_t i = 0; i < r * c; ++i) v[i] = m.data()[i];
    }
};

void mul(const Buf& x, const Buf& y, Buf& out) {
    out.r = x.r;
    out.c = y.c;
    for (std::size_t i = 0; i < x.r; ++i) {
        for (std::size_t j = 0; j < y.c; ++j) {
            double s = 0.0;
            for (std::size_t l = 0; l < x.c; ++l) s += x.v[i * x.c + l] * y.v[l * y.c + j];
            out.v[i * out.c + j] = s;
        }
    }
}

}  // namespace

MomentReport mc_verify(MomentIdentity id, const Matrix& a, const Matrix* b, const Matrix* c,
                       double sigma, std::size_t n1, std::size_t n2, std::size_t samples,
                       std::uint64_t seed) {
    if (samples < 10000) throw InvalidConfig("mc_verify: need at least 1e4 samples");
    if (n1 > 8 || n2 > 8) throw InvalidConfig("mc_verify: shapes capped at 8x8");
    const MomentShapes shp = moment_shapes(id, n1, n2);
    Matrix closed = closed_form(id, a, b, c, sigma, n1, n2);
    const Pattern p = pattern_of(id);

    Buf ba, bb, bc;
    ba.from(a);
    if (shp.degree == 4) {
        bb.from(*b);
        bc.from(*c);
    }

    const std::size_t out_n = shp.out_rows * shp.out_cols;
    std::vector<double> sum(out_n, 0.0), sumsq(out_n, 0.0);

    Rng rng(seed);
    Buf e, et, t0, t1;
    e.r = n1;
    e.c = n2;
    et.r = n2;
    et.c = n1;
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t i = 0; i < n1; ++i)
            for (std::size_t j = 0; j < n2; ++j) {
                const double x = sigma * rng.next_gaussian();
                e.v[i * n2 + j] = x;
                et.v[j * n1 + i] = x;
            }
        const Buf* result = nullptr;
        switch (shp.degree) {
            case 2: {
                if (id == MomentIdentity::TrEAE) {
                    // Trace(E A) * E
                    double tr = 0.0;
                    for (std::size_t i = 0; i < n1; ++i)
                        for (std::size_t l = 0; l < n2; ++l)
                            tr += e.v[i * n2 + l] * ba.v[l * ba.c + i];
                    t0.r = n1;
                    t0.c = n2;
                    for (std::size_t i = 0; i < n1 * n2; ++i) t0.v[i] = tr * e.v[i];
                    result = &t0;
                } else {
                    mul(e, ba, t0);
                    mul(t0, id == MomentIdentity::EAET ? et : e, t1);
                    result = &t1;
                }
                break;
            }
            case 3: {
                mul(e, ba, t0);
                mul(t0, e, t1);
                mul(t1, ba, t0);
                mul(t0, e, t1);
                result = &t1;
                break;
            }
            default: {
                mul(p.t[0] ? et : e, ba, t0);
                mul(t0, p.t[1] ? et : e, t1);
                mul(t1, bb, t0);
                mul(t0, p.t[2] ? et : e, t1);
                mul(t1, bc, t0);
                mul(t0, p.t[3] ? et : e, t1);
                result = &t1;
                break;
            }
        }
        for (std::size_t i = 0; i < out_n; ++i) {
            const double x = result->v[i];
            sum[i] += x;
            sumsq[i] += x * x;
        }
    }

    Matrix estimate(shp.out_rows, shp.out_cols);
    double max_dev = 0.0, max_se = 0.0;
    const double ns = static_cast<double>(samples);
    for (std::size_t i = 0; i < out_n; ++i) {
        const double mean = sum[i] / ns;
        estimate.data()[i] = mean;
        const double var = std::max(0.0, (sumsq[i] - ns * mean * mean) / (ns - 1.0));
        max_se = std::max(max_se, std::sqrt(var / ns));
        max_dev = std::max(max_dev, std::abs(mean - closed.data()[i]));
    }
    return MomentReport{id, std::move(closed), std::move(estimate), max_dev, max_se, samples};
}

}  // namespace jive
