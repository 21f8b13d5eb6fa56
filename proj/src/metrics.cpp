#include "jive/metrics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "jive/kernels.hpp"
#include "jive/linalg.hpp"

namespace jive {

void RateInputs::validate() const {
    if (n <= 0 || d <= 0 || K <= 0 || r <= 0 || r_avg <= 0) {
        throw InvalidConfig("rate inputs must be positive");
    }
    if (theta <= 0.0 || theta > 1.0) throw InvalidConfig("theta must lie in (0, 1]");
    if (sigma < 0.0) throw InvalidConfig("sigma must be >= 0");
    if (sigma_min <= 0.0) throw InvalidConfig("sigma_min must be > 0");
    if (kappa < 1.0) throw InvalidConfig("kappa must be >= 1");
}

double subspace_error(const OrthonormalBasis& a, const OrthonormalBasis& b) {
    if (a.rows() != b.rows()) throw DimensionMismatch("subspace_error: row mismatch");
    Matrix diff = projector(a);
    add_scaled(diff, projector(b), -1.0);
    return spectral_norm(diff);
}

double misalignment(const std::vector<OrthonormalBasis>& u_list) {
    if (u_list.empty()) throw EmptyList("misalignment: empty basis list");
    const std::size_t n = u_list.front().rows();
    Matrix sum(n, n);
    for (const auto& u : u_list) {
        if (u.rows() != n) throw DimensionMismatch("misalignment: row mismatch");
        add_scaled(sum, projector(u), 1.0);
    }
    const double scale = 1.0 / static_cast<double>(u_list.size());
    kernels::active().scal(scale, sum.data(), sum.size());
    return 1.0 - spectral_norm(sum);
}

IdentifiabilityReport identifiability_check(const GroundTruth& truth) {
    IdentifiabilityReport rep;
    rep.min_retained_sv = std::numeric_limits<double>::infinity();
    rep.max_nesting_residual = 0.0;
    for (std::size_t k = 0; k < truth.a_star.size(); ++k) {
        const std::size_t rank = truth.u_star.cols() + truth.u_k[k].cols();
        const std::vector<double> sv = singular_values(truth.a_star[k]);
        const double retained = rank <= sv.size() ? sv[rank - 1] : 0.0;
        rep.min_retained_sv = std::min(rep.min_retained_sv, retained);
        if (retained >= 1e-8) {
            const OrthonormalBasis col_a = top_left_singular_basis(truth.a_star[k], rank);
            const Matrix res = project_out(truth.u_star.mat(), col_a);
            rep.max_nesting_residual = std::max(rep.max_nesting_residual, spectral_norm(res));
        } else {
            rep.max_nesting_residual = std::numeric_limits<double>::infinity();
        }
    }
    rep.faithful = rep.min_retained_sv >= 1e-8;
    rep.nested = rep.max_nesting_residual <= 1e-8;
    rep.measured_theta = misalignment(truth.u_k);
    rep.exhaustive = rep.measured_theta > 1e-10;
    return rep;
}

std::string IdentifiabilityReport::to_string() const {
    std::ostringstream out;
    out << "faithful=" << (faithful ? "pass" : "fail")
        << " min_retained_sv=" << format_double(min_retained_sv)
        << "\nnested=" << (nested ? "pass" : "fail")
        << " max_nesting_residual=" << format_double(max_nesting_residual)
        << "\nexhaustive=" << (exhaustive ? "pass" : "fail")
        << " measured_theta=" << format_double(measured_theta)
        << "\nidentifiable=" << (all_pass() ? "pass" : "fail") << "\n";
    return out.str();
}

double bound_first_order(const RateInputs& ri) {
    ri.validate();
    return ri.sigma / ri.sigma_min * std::sqrt(ri.n / ri.K + ri.r / (ri.K * ri.theta));
}

double bound_second_order(const RateInputs& ri) {
    ri.validate();
    const double damp = ri.theta * std::min(1.0, ri.K * ri.theta);
    return ri.sigma * ri.sigma * ri.n / (ri.sigma_min * ri.sigma_min) / damp;
}

double bound_upper_full(const RateInputs& ri) {
    ri.validate();
    const double logN = std::log(ri.N());
    const double kt = ri.K * ri.theta;
    const double first =
        ri.sigma / ri.sigma_min *
        std::sqrt(ri.n / ri.K + (ri.r + ri.r_avg) / kt +
                  std::min(ri.r * ri.r_avg / kt, ri.r / (kt * kt)));
    const double second = ri.sigma * ri.sigma / (ri.sigma_min * ri.sigma_min) * ri.kappa *
                          ri.kappa / (ri.theta * std::min(1.0, kt)) *
                          (std::sqrt(ri.n * ri.d) + ri.n);
    return std::pow(logN, 2.5) * (first + second);
}

double minimax_lower(const RateInputs& ri) {
    ri.validate();
    const double root = std::sqrt(ri.n / ri.K + ri.r / (ri.K * ri.theta));
    const double first = ri.sigma / (20.0 * ri.sigma_min) * root;
    const double second = ri.sigma * ri.sigma / (50.0 * ri.sigma_min * ri.sigma_min) *
                          std::sqrt(ri.n * ri.d / ri.K + ri.r * ri.d / (ri.K * ri.theta));
    return first + second;
}

double oracle_lower(const RateInputs& ri) {
    ri.validate();
    const double s2 = ri.sigma * ri.sigma / (ri.sigma_min * ri.sigma_min);
    const double first = s2 * s2 * ri.n * ri.d;
    const double second =
        std::log(ri.n) / std::sqrt(ri.K) * (ri.sigma * std::sqrt(ri.n) / ri.sigma_min);
    return std::max(0.0, first - second);
}

}  // namespace jive
