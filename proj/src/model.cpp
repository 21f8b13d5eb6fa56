#include "jive/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jive/kernels.hpp"
#include "jive/linalg.hpp"
#include "jive/metrics.hpp"
#include "jive/rng.hpp"

namespace jive {

namespace {

// sub-stream tags for the generation pipeline
constexpr std::uint64_t kTagShared = 1;
constexpr std::uint64_t kTagUnique = 2;
constexpr std::uint64_t kTagLoadings = 3;
constexpr std::uint64_t kTagNoise = 4;
constexpr std::uint64_t kTagRedraw = 0xD3;

Matrix gaussian_matrix(Rng& rng, std::size_t n, std::size_t k) {
    Matrix g(n, k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) g(i, j) = rng.next_gaussian();
    return g;
}

}  // namespace

std::string to_string(MisalignScheme s) {
    return s == MisalignScheme::Randomized ? "randomized" : "twogroup";
}

std::string to_string(LoadingScheme s) {
    switch (s) {
        case LoadingScheme::Random: return "random";
        case LoadingScheme::Shared: return "shared";
        default: return "oraclehard";
    }
}

MisalignScheme parse_misalign_scheme(const std::string& s) {
    if (s == "randomized") return MisalignScheme::Randomized;
    if (s == "twogroup") return MisalignScheme::TwoGroup;
    throw InvalidConfig("unknown misalignment scheme: " + s);
}

LoadingScheme parse_loading_scheme(const std::string& s) {
    if (s == "random") return LoadingScheme::Random;
    if (s == "shared") return LoadingScheme::Shared;
    if (s == "oraclehard") return LoadingScheme::OracleHard;
    throw InvalidConfig("unknown loading scheme: " + s);
}

void JiveConfig::validate() const {
    if (n < 1 || d < 1 || K < 1 || r < 1 || r_k < 1) {
        throw InvalidConfig("n, d, K, r, r_k must all be >= 1");
    }
    if (r + r_k > std::min(n, d)) {
        throw InvalidConfig("r + r_k exceeds min(n, d)");
    }
    if (theta <= 0.0) {
        throw InvalidConfig("theta = 0 rejected: shared subspace unidentifiable");
    }
    if (theta > 1.0 - 1.0 / static_cast<double>(K)) {
        throw InvalidConfig("theta must lie in (0, 1 - 1/K]");
    }
    if (sigma < 0.0) throw InvalidConfig("sigma must be >= 0");
    if (gamma <= 0.0) throw InvalidConfig("gamma must be > 0");
    if (r + 2 * r_k > n) {
        throw DimensionOverflow("misalignment construction needs r + 2*r_k <= n");
    }
    if (misalign == MisalignScheme::TwoGroup) {
        if (K % 2 != 0) throw OddK("two-group scheme requires even K");
        if (theta > 0.5) throw SchemeConstraint("two-group scheme requires theta <= 1/2");
    }
    if (loading == LoadingScheme::OracleHard) {
        if (r != r_k) throw SchemeConstraint("oracle-hard loading requires r == r_k");
        if (2 * r > d) throw SchemeConstraint("oracle-hard loading requires 2r <= d");
    }
}

OrthonormalBasis gen_orthonormal(std::uint64_t seed, std::size_t n, std::size_t k,
                                 const std::vector<const OrthonormalBasis*>& orthogonal_to) {
    std::size_t forbidden = 0;
    for (const auto* b : orthogonal_to) {
        if (b->rows() != n) throw DimensionMismatch("gen_orthonormal: basis row mismatch");
        forbidden += b->cols();
    }
    if (k + forbidden > n) {
        throw DimensionOverflow("gen_orthonormal: k + orthogonal dims exceed n");
    }
    for (std::uint64_t attempt = 0;; ++attempt) {
        if (attempt == 64) throw NumericalFailure("gen_orthonormal: repeated rank deficiency");
        Rng rng(attempt == 0 ? seed : Rng::derive(seed, {kTagRedraw, attempt}));
        Matrix g = gaussian_matrix(rng, n, k);
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto* b : orthogonal_to) g = project_out(g, *b);
        }
        try {
            return qr_orthonormalize(g);
        } catch (const RankDeficient&) {
            continue;
        }
    }
}

std::vector<OrthonormalBasis> gen_unique_randomized(std::uint64_t seed,
                                                    const OrthonormalBasis& u_star, double theta,
                                                    std::size_t K, std::size_t r_k) {
    const std::size_t n = u_star.rows();
    if (u_star.cols() + 2 * r_k > n) {
        throw DimensionOverflow("gen_unique_randomized: r + 2*r_k exceeds n");
    }
    if (K < 1) throw InvalidConfig("K must be >= 1");
    if (theta <= 0.0 || theta > 1.0 - 1.0 / static_cast<double>(K) + 1e-15) {
        throw InvalidConfig("theta must lie in (0, 1 - 1/K]");
    }
    const OrthonormalBasis z =
        gen_orthonormal(Rng::derive(seed, {0}), n, r_k, {&u_star});
    const double cs = std::sqrt(1.0 - theta);
    const double cz = std::sqrt(theta);
    std::vector<OrthonormalBasis> out;
    out.reserve(K);
    for (std::size_t k = 0; k < K; ++k) {
        const OrthonormalBasis zk =
            gen_orthonormal(Rng::derive(seed, {k + 1}), n, r_k, {&u_star, &z});
        Matrix u(n, r_k);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < r_k; ++j)
                u(i, j) = cs * z.mat()(i, j) + cz * zk.mat()(i, j);
        out.emplace_back(std::move(u));
    }
    return out;
}

std::vector<OrthonormalBasis> gen_unique_two_group(std::uint64_t seed,
                                                   const OrthonormalBasis& u_star, double theta,
                                                   std::size_t K, std::size_t r_k) {
    const std::size_t n = u_star.rows();
    if (K % 2 != 0 || K == 0) throw OddK("two-group scheme requires even K");
    if (u_star.cols() + 2 * r_k > n) {
        throw DimensionOverflow("gen_unique_two_group: r + 2*r_k exceeds n");
    }
    if (theta <= 0.0 || theta > 0.5) {
        throw InvalidConfig("two-group scheme requires theta in (0, 1/2]");
    }
    const OrthonormalBasis z2 =
        gen_orthonormal(Rng::derive(seed, {0}), n, r_k, {&u_star});
    const OrthonormalBasis z3 =
        gen_orthonormal(Rng::derive(seed, {1}), n, r_k, {&u_star, &z2});
    const double cs = std::sqrt(1.0 - theta);
    const double cz = std::sqrt(theta);
    std::vector<OrthonormalBasis> out;
    out.reserve(K);
    for (std::size_t k = 0; k < K; ++k) {
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;  // "+" group first
        Matrix u(n, r_k);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < r_k; ++j)
                u(i, j) = cs * z2.mat()(i, j) + sgn * cz * z3.mat()(i, j);
        out.emplace_back(std::move(u));
    }
    return out;
}

Loadings gen_loadings(std::uint64_t seed, LoadingScheme scheme, std::size_t K, std::size_t d,
                      std::size_t r, std::size_t r_k, double gamma) {
    if (r > d || r_k > d) throw DimensionOverflow("gen_loadings: ranks exceed d");
    if (K < 1) throw InvalidConfig("K must be >= 1");
    Loadings out;
    out.v_k.reserve(K);
    out.w_k.reserve(K);
    switch (scheme) {
        case LoadingScheme::Random: {
            for (std::size_t k = 0; k < K; ++k) {
                out.v_k.push_back(gen_orthonormal(Rng::derive(seed, {2 * k}), d, r).mat());
                Matrix w = gen_orthonormal(Rng::derive(seed, {2 * k + 1}), d, r_k).mat();
                kernels::active().scal(gamma, w.data(), w.size());
                out.w_k.push_back(std::move(w));
            }
            break;
        }
        case LoadingScheme::Shared: {
            const Matrix v = gen_orthonormal(Rng::derive(seed, {0}), d, r).mat();
            Matrix w = gen_orthonormal(Rng::derive(seed, {1}), d, r_k).mat();
            kernels::active().scal(gamma, w.data(), w.size());
            for (std::size_t k = 0; k < K; ++k) {
                out.v_k.push_back(v);
                out.w_k.push_back(w);
            }
            break;
        }
        case LoadingScheme::OracleHard: {
            if (r != r_k) throw SchemeConstraint("oracle-hard loading requires r == r_k");
            if (2 * r > d) throw SchemeConstraint("oracle-hard loading requires 2r <= d");
            const OrthonormalBasis v = gen_orthonormal(Rng::derive(seed, {0}), d, r);
            const OrthonormalBasis z1 =
                gen_orthonormal(Rng::derive(seed, {1}), d, r, {&v});
            Matrix w(d, r);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < r; ++j)
                    w(i, j) = 0.6 * v.mat()(i, j) + 0.8 * z1.mat()(i, j);
            for (std::size_t k = 0; k < K; ++k) {
                out.v_k.push_back(v.mat());
                out.w_k.push_back(w);
            }
            break;
        }
    }
    return out;
}

GroundTruth assemble(OrthonormalBasis u_star, std::vector<OrthonormalBasis> u_k,
                     std::vector<Matrix> v_k, std::vector<Matrix> w_k) {
    const std::size_t K = u_k.size();
    if (K == 0 || v_k.size() != K || w_k.size() != K) {
        throw DimensionMismatch("assemble: component list lengths differ");
    }
    const std::size_t n = u_star.rows();
    const std::size_t r = u_star.cols();
    const std::size_t d = v_k[0].rows();
    for (std::size_t k = 0; k < K; ++k) {
        if (u_k[k].rows() != n) throw DimensionMismatch("assemble: u_k row mismatch");
        if (v_k[k].rows() != d || v_k[k].cols() != r) {
            throw DimensionMismatch("assemble: v_k must be d x r");
        }
        if (w_k[k].rows() != d || w_k[k].cols() != u_k[k].cols()) {
            throw DimensionMismatch("assemble: w_k must be d x r_k");
        }
        const Matrix cross = matmul_tn(u_k[k].mat(), u_star.mat());
        if (cross.max_abs() > 1e-10) {
            throw Error("assemble: unique basis not orthogonal to shared basis");
        }
    }

    GroundTruth truth{std::move(u_star), std::move(u_k), std::move(v_k), std::move(w_k), {}, 0, 0,
                      0, 1.0, true};
    truth.a_star.reserve(K);
    double sigma_min = std::numeric_limits<double>::infinity();
    double sigma_max = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        Matrix a = matmul_nt(truth.u_star.mat(), truth.v_k[k]);
        add_scaled(a, matmul_nt(truth.u_k[k].mat(), truth.w_k[k]), 1.0);
        // retained singular values from the small-side Gram spectrum
        const Matrix g = (a.rows() <= a.cols()) ? gram_left(a) : gram_right(a);
        const std::vector<double> lam = sym_eigenvalues(g);
        const std::size_t rank = truth.u_star.cols() + truth.u_k[k].cols();
        const double s1 = std::sqrt(std::max(lam[0], 0.0));
        const double sr = rank <= lam.size() ? std::sqrt(std::max(lam[rank - 1], 0.0)) : 0.0;
        sigma_min = std::min(sigma_min, sr);
        sigma_max = std::max(sigma_max, s1);
        truth.a_star.push_back(std::move(a));
    }
    truth.sigma_min = sigma_min;
    truth.sigma_max = sigma_max;
    truth.kappa = sigma_min > 0.0 ? sigma_max / sigma_min
                                  : std::numeric_limits<double>::infinity();
    truth.measured_theta = misalignment(truth.u_k);
    truth.identifiable = sigma_min >= 1e-8 && truth.measured_theta > 1e-10;
    return truth;
}

Dataset add_noise(std::uint64_t seed, const GroundTruth& truth, double sigma) {
    if (sigma < 0.0) throw InvalidConfig("sigma must be >= 0");
    const std::size_t K = truth.a_star.size();
    Dataset ds;
    ds.a.reserve(K);
    for (std::size_t k = 0; k < K; ++k) {
        Matrix a = truth.a_star[k];
        if (sigma > 0.0) {
            Rng g(Rng::derive(seed, {kTagNoise, k}));
            double* p = a.data();
            for (std::size_t i = 0; i < a.size(); ++i) p[i] += sigma * g.next_gaussian();
        }
        ds.a.push_back(std::move(a));
    }
    ds.config.n = truth.u_star.rows();
    ds.config.d = K ? truth.v_k[0].rows() : 0;
    ds.config.K = K;
    ds.config.r = truth.u_star.cols();
    ds.config.r_k = K ? truth.u_k[0].cols() : 0;
    ds.config.theta = truth.measured_theta;
    ds.config.sigma = sigma;
    ds.config.seed = seed;
    ds.truth = truth;
    return ds;
}

Dataset generate(const JiveConfig& config) {
    config.validate();
    const OrthonormalBasis u_star =
        gen_orthonormal(Rng::derive(config.seed, {kTagShared}), config.n, config.r);
    std::vector<OrthonormalBasis> u_k;
    const std::uint64_t unique_seed = Rng::derive(config.seed, {kTagUnique});
    if (config.misalign == MisalignScheme::Randomized) {
        u_k = gen_unique_randomized(unique_seed, u_star, config.theta, config.K, config.r_k);
    } else {
        u_k = gen_unique_two_group(unique_seed, u_star, config.theta, config.K, config.r_k);
    }
    Loadings loads = gen_loadings(Rng::derive(config.seed, {kTagLoadings}), config.loading,
                                  config.K, config.d, config.r, config.r_k, config.gamma);
    GroundTruth truth =
        assemble(u_star, std::move(u_k), std::move(loads.v_k), std::move(loads.w_k));
    Dataset ds = add_noise(config.seed, truth, config.sigma);
    ds.config = config;
    return ds;
}

Dataset counterexample_stacked(double epsilon) {
    if (!(epsilon > 0.0)) throw InvalidConfig("epsilon must be > 0");
    const double e = epsilon;
    const double s = 1.0 / std::sqrt(2.0);

    Matrix a1(3, 3, {1, 0, 0, e, e, e, -e, -e, -e});
    Matrix a2(3, 3, {1, 0, 0, e, e, e, e, e, e});

    OrthonormalBasis u_star(Matrix(3, 1, {1, 0, 0}));
    std::vector<OrthonormalBasis> u_k;
    u_k.emplace_back(Matrix(3, 1, {0, s, -s}));
    u_k.emplace_back(Matrix(3, 1, {0, s, s}));
    const double w = std::sqrt(2.0) * e;
    std::vector<Matrix> v_k{Matrix(3, 1, {1, 0, 0}), Matrix(3, 1, {1, 0, 0})};
    std::vector<Matrix> w_k{Matrix(3, 1, {w, w, w}), Matrix(3, 1, {w, w, w})};

    GroundTruth truth{std::move(u_star), std::move(u_k), std::move(v_k), std::move(w_k),
                      {a1, a2},          0.0,            0.0,            0.0,
                      1.0,               true};
    double sigma_min = std::numeric_limits<double>::infinity();
    double sigma_max = 0.0;
    for (const Matrix& a : truth.a_star) {
        const std::vector<double> sv = singular_values(a);
        sigma_min = std::min(sigma_min, sv[1]);
        sigma_max = std::max(sigma_max, sv[0]);
    }
    truth.sigma_min = sigma_min;
    truth.sigma_max = sigma_max;
    truth.kappa = sigma_max / sigma_min;
    truth.measured_theta = misalignment(truth.u_k);
    truth.identifiable = sigma_min >= 1e-8 && truth.measured_theta > 1e-10;

    Dataset ds;
    ds.a = {a1, a2};
    ds.config.n = 3;
    ds.config.d = 3;
    ds.config.K = 2;
    ds.config.r = 1;
    ds.config.r_k = 1;
    ds.config.theta = truth.measured_theta;
    ds.config.sigma = 0.0;
    ds.truth = std::move(truth);
    return ds;
}

}  // namespace jive
