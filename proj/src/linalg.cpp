#include "jive/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "jive/kernels.hpp"

namespace jive {

namespace {

using kernels::Backend;

void check_mul(std::size_t ak, std::size_t bk, const char* what) {
    if (ak != bk) {
        throw DimensionMismatch(std::string("product dimension mismatch in ") + what);
    }
}

// Column-major scratch view: col(j) is contiguous with leading dimension n.
struct ColMat {
    std::size_t n = 0;  // rows
    std::size_t k = 0;  // cols
    std::vector<double> v;

    ColMat() = default;
    ColMat(std::size_t n_, std::size_t k_) : n(n_), k(k_), v(n_ * k_, 0.0) {}

    double* col(std::size_t j) { return v.data() + j * n; }
    const double* col(std::size_t j) const { return v.data() + j * n; }

    static ColMat from(const Matrix& m) {
        ColMat c(m.rows(), m.cols());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) c.v[j * c.n + i] = m(i, j);
        return c;
    }

    static ColMat from_transposed(const Matrix& m) {
        ColMat c(m.cols(), m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i) {
            const double* row = m.row(i);
            double* col = c.col(i);
            for (std::size_t j = 0; j < c.n; ++j) col[j] = row[j];
        }
        return c;
    }

    static ColMat identity(std::size_t n_) {
        ColMat c(n_, n_);
        for (std::size_t j = 0; j < n_; ++j) c.v[j * n_ + j] = 1.0;
        return c;
    }

    Matrix to_matrix() const {
        Matrix m(n, k);
        for (std::size_t j = 0; j < k; ++j) {
            const double* cj = col(j);
            for (std::size_t i = 0; i < n; ++i) m(i, j) = cj[i];
        }
        return m;
    }

    /// Row-major matrix whose row i is column i of this (i.e. the transpose).
    Matrix to_matrix_transposed() const {
        Matrix m(k, n);
        for (std::size_t j = 0; j < k; ++j) {
            const double* cj = col(j);
            double* rj = m.row(j);
            for (std::size_t i = 0; i < n; ++i) rj[i] = cj[i];
        }
        return m;
    }
};

double col_norm(const Backend& kern, const double* x, std::size_t n) {
    return std::sqrt(kern.dot(x, x, n));
}

/// Positive sign on the largest-magnitude entry (first such index on ties).
/// Returns +1/-1 multiplier applied.
double sign_normalize(double* x, std::size_t n, const Backend& kern) {
    std::size_t best = 0;
    double besta = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::abs(x[i]);
        if (a > besta) {
            besta = a;
            best = i;
        }
    }
    if (x[best] < 0.0) {
        kern.scal(-1.0, x, n);
        return -1.0;
    }
    return 1.0;
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
    check_mul(a.cols(), b.rows(), "matmul");
    const auto& kern = kernels::active();
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    Matrix c(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = a.row(i);
        double* crow = c.row(i);
        for (std::size_t l = 0; l < k; ++l) {
            if (arow[l] != 0.0) kern.axpy(arow[l], b.row(l), crow, n);
        }
    }
    return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    check_mul(a.cols(), b.cols(), "matmul_nt");
    const auto& kern = kernels::active();
    const std::size_t m = a.rows(), k = a.cols(), n = b.rows();
    Matrix c(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = a.row(i);
        double* crow = c.row(i);
        for (std::size_t j = 0; j < n; ++j) crow[j] = kern.dot(arow, b.row(j), k);
    }
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    check_mul(a.rows(), b.rows(), "matmul_tn");
    const auto& kern = kernels::active();
    const std::size_t k = a.rows(), m = a.cols(), n = b.cols();
    Matrix c(m, n);
    for (std::size_t l = 0; l < k; ++l) {
        const double* arow = a.row(l);
        const double* brow = b.row(l);
        for (std::size_t i = 0; i < m; ++i) {
            if (arow[i] != 0.0) kern.axpy(arow[i], brow, c.row(i), n);
        }
    }
    return c;
}

Matrix gram_left(const Matrix& a) {
    const auto& kern = kernels::active();
    const std::size_t n = a.rows(), d = a.cols();
    Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double x = kern.dot(a.row(i), a.row(j), d);
            g(i, j) = x;
            g(j, i) = x;
        }
    }
    return g;
}

Matrix gram_right(const Matrix& a) {
    const auto& kern = kernels::active();
    const std::size_t n = a.rows(), d = a.cols();
    Matrix g(d, d);
    for (std::size_t l = 0; l < n; ++l) {
        const double* row = a.row(l);
        for (std::size_t i = 0; i < d; ++i) {
            if (row[i] != 0.0) kern.axpy(row[i], row, g.row(i), d);
        }
    }
    // enforce exact symmetry against accumulation-order asymmetry
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            const double x = 0.5 * (g(i, j) + g(j, i));
            g(i, j) = x;
            g(j, i) = x;
        }
    return g;
}

void add_scaled(Matrix& a, const Matrix& b, double s) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch("add_scaled shape mismatch");
    }
    kernels::active().axpy(s, b.data(), a.data(), a.size());
}

Matrix projector(const OrthonormalBasis& b) {
    return matmul_nt(b.mat(), b.mat());
}

OrthonormalBasis qr_orthonormalize(const Matrix& m) {
    const auto& kern = kernels::active();
    const std::size_t n = m.rows(), k = m.cols();
    if (k == 0 || k > n) throw DimensionMismatch("qr: need 1 <= cols <= rows");
    ColMat w = ColMat::from(m);
    std::vector<double> rdiag(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        double* wj = w.col(j);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i < j; ++i) {
                const double g = kern.dot(w.col(i), wj, n);
                kern.axpy(-g, w.col(i), wj, n);
            }
        }
        const double r = col_norm(kern, wj, n);
        rdiag[j] = r;
        if (!(r > 0.0)) throw RankDeficient("qr: zero column after orthogonalization");
        kern.scal(1.0 / r, wj, n);
    }
    const double rmax = *std::max_element(rdiag.begin(), rdiag.end());
    const double rmin = *std::min_element(rdiag.begin(), rdiag.end());
    if (rmin < 1e-12 * rmax) {
        throw RankDeficient("qr: R diagonal ratio " + std::to_string(rmin / rmax));
    }
    return OrthonormalBasis(w.to_matrix());
}

namespace {

struct JacobiSvd {
    ColMat w;          // rotated copy of the input, columns -> u_j * sigma_j
    ColMat v;          // accumulated right rotations (k x k)
    std::vector<double> sigma;
    std::vector<std::size_t> order;  // column order after the descending sort
};

// One-sided Jacobi on an n x k matrix with n >= k. Orthogonalizes columns;
// at convergence w = U diag(sigma) and v holds the right singular vectors.
// Columns whose norm falls below 1e-14 x the largest are numerically zero:
// they are frozen during sweeps (their rounding debris has no meaningful
// direction) and their singular values flushed to exact 0.
JacobiSvd one_sided_jacobi(const Matrix& m, bool accumulate_v) {
    const auto& kern = kernels::active();
    const std::size_t n = m.rows(), k = m.cols();
    JacobiSvd res;
    res.w = ColMat::from(m);
    if (accumulate_v) res.v = ColMat::identity(k);

    const double tol = 1e-14;
    const double zero_rel_sq = 1e-28;  // (1e-14)^2, on squared norms
    const int max_sweeps = 60;
    double max_sq = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        max_sq = std::max(max_sq, kern.dot(res.w.col(j), res.w.col(j), n));
    }
    bool converged = (k <= 1) || max_sq == 0.0;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        converged = true;
        for (std::size_t p = 0; p + 1 < k; ++p) {
            for (std::size_t q = p + 1; q < k; ++q) {
                double* wp = res.w.col(p);
                double* wq = res.w.col(q);
                const double alpha = kern.dot(wp, wp, n);
                const double beta = kern.dot(wq, wq, n);
                max_sq = std::max(max_sq, std::max(alpha, beta));
                if (alpha <= zero_rel_sq * max_sq || beta <= zero_rel_sq * max_sq) continue;
                const double gamma = kern.dot(wp, wq, n);
                if (gamma == 0.0) continue;
                if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
                converged = false;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                kern.rot(wp, wq, c, s, n);
                if (accumulate_v) kern.rot(res.v.col(p), res.v.col(q), c, s, k);
            }
        }
    }
    if (!converged) throw NumericalFailure("one-sided Jacobi did not converge");

    res.sigma.resize(k);
    double sig_max = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        res.sigma[j] = col_norm(kern, res.w.col(j), n);
        sig_max = std::max(sig_max, res.sigma[j]);
    }
    for (double& s : res.sigma) {
        if (s <= 1e-14 * sig_max) s = 0.0;
    }
    res.order.resize(k);
    std::iota(res.order.begin(), res.order.end(), std::size_t{0});
    std::stable_sort(res.order.begin(), res.order.end(),
                     [&](std::size_t a, std::size_t b) { return res.sigma[a] > res.sigma[b]; });
    return res;
}

// Unit column orthogonal to the first `have` columns of u (ld n), built from
// the lowest-index coordinate vector with a large residual. Deterministic.
void complete_column(ColMat& u, std::size_t have, std::size_t target, std::size_t n) {
    const auto& kern = kernels::active();
    for (std::size_t cand = 0; cand < n; ++cand) {
        double* t = u.col(target);
        std::fill(t, t + n, 0.0);
        t[cand] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < have; ++j) {
                const double g = kern.dot(u.col(j), t, n);
                kern.axpy(-g, u.col(j), t, n);
            }
        }
        const double nrm = col_norm(kern, t, n);
        if (nrm >= 0.5) {
            kern.scal(1.0 / nrm, t, n);
            return;
        }
    }
    throw NumericalFailure("could not complete orthonormal column");
}

}  // namespace

TruncatedSvd truncated_svd(const Matrix& m, std::size_t k) {
    const std::size_t lo = std::min(m.rows(), m.cols());
    if (k < 1 || k > lo) {
        throw InvalidRank("truncated_svd: k=" + std::to_string(k) + " out of [1, " +
                          std::to_string(lo) + "]");
    }
    const auto& kern = kernels::active();
    const bool transposed = m.cols() > m.rows();
    const Matrix work = transposed ? m.transposed() : Matrix(m);
    const std::size_t n = work.rows(), w = work.cols();

    JacobiSvd j = one_sided_jacobi(work, /*accumulate_v=*/true);

    ColMat u(n, k), v(w, k);
    std::vector<double> sig(k);
    std::size_t completed_from = k;
    for (std::size_t t = 0; t < k; ++t) {
        const std::size_t src = j.order[t];
        sig[t] = j.sigma[src];
        std::copy(j.v.col(src), j.v.col(src) + w, v.col(t));
        if (sig[t] > 0.0) {
            std::copy(j.w.col(src), j.w.col(src) + n, u.col(t));
            kern.scal(1.0 / sig[t], u.col(t), n);
        } else {
            completed_from = std::min(completed_from, t);
        }
    }
    // exactly-zero singular values: fill left columns deterministically
    for (std::size_t t = completed_from; t < k; ++t) complete_column(u, t, t, n);

    for (std::size_t t = 0; t < k; ++t) {
        if (sign_normalize(u.col(t), n, kern) < 0.0) kern.scal(-1.0, v.col(t), w);
    }

    OrthonormalBasis left(u.to_matrix());
    OrthonormalBasis right(v.to_matrix());
    if (transposed) std::swap(left, right);
    return TruncatedSvd(std::move(left), std::move(sig), std::move(right));
}

std::vector<double> singular_values(const Matrix& m) {
    const Matrix work = m.cols() > m.rows() ? m.transposed() : Matrix(m);
    JacobiSvd j = one_sided_jacobi(work, /*accumulate_v=*/false);
    std::vector<double> out(j.sigma.size());
    for (std::size_t t = 0; t < out.size(); ++t) out[t] = j.sigma[j.order[t]];
    return out;
}

namespace {

// Householder reduction of a symmetric matrix to tridiagonal form, with the
// accumulated transform left in v (row-major). Classic tred2 recurrence.
void tred2(std::vector<double>& v, std::vector<double>& d, std::vector<double>& e, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) d[j] = v[(n - 1) * n + j];

    for (std::size_t i = n - 1; i > 0; --i) {
        double scale = 0.0, h = 0.0;
        for (std::size_t kk = 0; kk < i; ++kk) scale += std::abs(d[kk]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (std::size_t j = 0; j < i; ++j) {
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = 0.0;
                v[j * n + i] = 0.0;
            }
        } else {
            for (std::size_t kk = 0; kk < i; ++kk) {
                d[kk] /= scale;
                h += d[kk] * d[kk];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0.0) g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                v[j * n + i] = f;
                g = e[j] + v[j * n + j] * f;
                for (std::size_t kk = j + 1; kk < i; ++kk) {
                    g += v[kk * n + j] * d[kk];
                    e[kk] += v[kk * n + j] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (std::size_t kk = j; kk < i; ++kk) {
                    v[kk * n + j] -= (f * e[kk] + g * d[kk]);
                }
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = 0.0;
            }
        }
        d[i] = h;
    }

    // accumulate transformations
    for (std::size_t i = 0; i + 1 < n; ++i) {
        v[(n - 1) * n + i] = v[i * n + i];
        v[i * n + i] = 1.0;
        const double h = d[i + 1];
        if (h != 0.0) {
            for (std::size_t kk = 0; kk <= i; ++kk) d[kk] = v[kk * n + (i + 1)] / h;
            for (std::size_t j = 0; j <= i; ++j) {
                double g = 0.0;
                for (std::size_t kk = 0; kk <= i; ++kk) g += v[kk * n + (i + 1)] * v[kk * n + j];
                for (std::size_t kk = 0; kk <= i; ++kk) v[kk * n + j] -= g * d[kk];
            }
        }
        for (std::size_t kk = 0; kk <= i; ++kk) v[kk * n + (i + 1)] = 0.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
        d[j] = v[(n - 1) * n + j];
        v[(n - 1) * n + j] = 0.0;
    }
    v[(n - 1) * n + (n - 1)] = 1.0;
    e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e), rotations accumulated into the
// column-major eigenvector matrix vc (each rotation touches two contiguous
// columns, riding the rot kernel). vc may be null for a values-only run.
void tql2(ColMat* vc, std::vector<double>& d, std::vector<double>& e, std::size_t n) {
    const auto& kern = kernels::active();
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    double f = 0.0, tst1 = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n && std::abs(e[m]) > eps * tst1) ++m;
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > 50) throw NumericalFailure("tql2 did not converge");
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0.0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = c, c3 = c;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t i = m - 1;; --i) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    // columns i and i+1: x' = c x - s y ; y' = s x + c y
                    if (vc) kern.rot(vc->col(i), vc->col(i + 1), c, s, n);
                    if (i == l) break;
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

}  // namespace

namespace {

// checked symmetrized copy, row-major
std::vector<double> symmetrized_work(const Matrix& s, const char* what) {
    const std::size_t n = s.rows();
    if (n != s.cols()) throw NotSquare(std::string(what) + ": matrix is not square");
    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) asym = std::max(asym, std::abs(s(i, j) - s(j, i)));
    if (asym > 1e-8) {
        throw NotSymmetric(std::string(what) + ": asymmetry " + std::to_string(asym));
    }
    std::vector<double> work(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) work[i * n + j] = 0.5 * (s(i, j) + s(j, i));
    return work;
}

}  // namespace

EigResult sym_top_eigvecs(const Matrix& s, std::size_t k) {
    const std::size_t n = s.rows();
    std::vector<double> work = symmetrized_work(s, "sym_top_eigvecs");
    if (k < 1 || k > n) throw InvalidRank("sym_top_eigvecs: k out of range");

    std::vector<double> d(n, 0.0), e(n, 0.0);
    if (n == 1) {
        d[0] = work[0];
        work[0] = 1.0;
    } else {
        tred2(work, d, e, n);
    }

    // eigenvector columns, contiguous for the QL rotations
    ColMat vc(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) vc.v[j * n + i] = work[i * n + j];
    if (n > 1) tql2(&vc, d, e, n);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });

    const auto& kern = kernels::active();
    ColMat top(n, k);
    for (std::size_t t = 0; t < k; ++t) {
        std::copy(vc.col(order[t]), vc.col(order[t]) + n, top.col(t));
        sign_normalize(top.col(t), n, kern);
    }
    std::vector<double> vals(n);
    for (std::size_t t = 0; t < n; ++t) vals[t] = d[order[t]];
    return EigResult{OrthonormalBasis(top.to_matrix()), std::move(vals)};
}

std::vector<double> sym_eigenvalues(const Matrix& s) {
    const std::size_t n = s.rows();
    std::vector<double> work = symmetrized_work(s, "sym_eigenvalues");
    std::vector<double> d(n, 0.0), e(n, 0.0);
    if (n == 1) {
        d[0] = work[0];
    } else {
        tred2(work, d, e, n);
        tql2(nullptr, d, e, n);
    }
    std::sort(d.begin(), d.end(), std::greater<double>());
    return d;
}

double spectral_norm(const Matrix& m) {
    const std::size_t d = m.cols();
    if (m.size() == 0) return 0.0;
    const auto& kern = kernels::active();
    const Matrix b = gram_right(m);

    std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d)));
    std::vector<double> w(d, 0.0);
    double lam_prev = -1.0;
    double lam = 0.0;
    for (int it = 0; it < 50000; ++it) {
        for (std::size_t i = 0; i < d; ++i) w[i] = kern.dot(b.row(i), v.data(), d);
        lam = kern.dot(v.data(), w.data(), d);
        const double wn = std::sqrt(kern.dot(w.data(), w.data(), d));
        if (wn == 0.0) return 0.0;
        const double inv = 1.0 / wn;
        for (std::size_t i = 0; i < d; ++i) v[i] = w[i] * inv;
        if (it > 0 && std::abs(lam - lam_prev) < 1e-13 * std::max(std::abs(lam), 1e-300)) break;
        lam_prev = lam;
    }
    return std::sqrt(std::max(lam, 0.0));
}

Matrix project_out(const Matrix& m, const OrthonormalBasis& b) {
    if (b.rows() != m.rows()) throw DimensionMismatch("project_out: row mismatch");
    const Matrix coef = matmul_tn(b.mat(), m);  // b^T m
    Matrix out = m;
    const Matrix bc = matmul(b.mat(), coef);
    add_scaled(out, bc, -1.0);
    return out;
}

OrthonormalBasis top_left_singular_basis(const Matrix& a, std::size_t k) {
    const std::size_t lo = std::min(a.rows(), a.cols());
    if (k < 1 || k > lo) throw InvalidRank("top_left_singular_basis: k out of range");
    if (a.rows() <= a.cols()) {
        return sym_top_eigvecs(gram_left(a), k).vectors;
    }
    // tall: eigenvectors of A^T A, then U = A V / sigma
    const EigResult eig = sym_top_eigvecs(gram_right(a), k);
    const double lam0 = std::max(eig.eigenvalues[0], 0.0);
    const double lamk = eig.eigenvalues[k - 1];
    if (!(lamk > lam0 * 1e-24) || lam0 == 0.0) {
        // effectively rank-deficient at k: take the accurate route
        return truncated_svd(a, k).left;
    }
    Matrix u = matmul(a, eig.vectors.mat());
    const auto& kern = kernels::active();
    const std::size_t n = u.rows();
    ColMat uc(n, k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) uc.v[j * n + i] = u(i, j);
    for (std::size_t j = 0; j < k; ++j) {
        double* cj = uc.col(j);
        // Gram-Schmidt pass against earlier columns tightens orthogonality
        for (std::size_t i = 0; i < j; ++i) {
            const double g = kern.dot(uc.col(i), cj, n);
            kern.axpy(-g, uc.col(i), cj, n);
        }
        const double nrm = col_norm(kern, cj, n);
        if (!(nrm > 0.0)) return truncated_svd(a, k).left;
        kern.scal(1.0 / nrm, cj, n);
        sign_normalize(cj, n, kern);
    }
    return OrthonormalBasis(uc.to_matrix());
}

}  // namespace jive
