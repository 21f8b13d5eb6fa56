#pragma once

#include <string>
#include <vector>

#include "jive/matrix.hpp"
#include "jive/model.hpp"

namespace jive {

/// Inputs of the rate formulas. N = max(n, d). Unspecified constants are set
/// to 1 throughout: the evaluators are rate shapes for scaling-law
/// comparisons, never absolute thresholds.
struct RateInputs {
    double n = 0;
    double d = 0;
    double K = 0;
    double r = 0;
    double r_avg = 0;
    double theta = 0;
    double sigma = 0;
    double sigma_min = 1;
    double kappa = 1;

    double N() const { return n > d ? n : d; }
    void validate() const;
};

/// ||a a^T - b b^T||: spectral norm of the projector difference, i.e. the
/// sine of the largest principal angle. Symmetric, rotation-invariant.
double subspace_error(const OrthonormalBasis& a, const OrthonormalBasis& b);

/// 1 - ||(1/K) sum_k U_k U_k^T||, in [0, 1 - 1/K].
double misalignment(const std::vector<OrthonormalBasis>& u_list);

struct IdentifiabilityReport {
    bool faithful = false;       // sigma_{r+r_k}(A_k*) >= 1e-8 for every k
    double min_retained_sv = 0;  // min_k sigma_{r+r_k}(A_k*)
    bool nested = false;         // col(U*) inside col(A_k*) for every k
    double max_nesting_residual = 0;
    bool exhaustive = false;     // misalignment > 1e-10
    double measured_theta = 0;

    bool all_pass() const { return faithful && nested && exhaustive; }
    std::string to_string() const;
};

/// Reports, never throws.
IdentifiabilityReport identifiability_check(const GroundTruth& truth);

/// First-order rate: (sigma/sigma_min) sqrt(n/K + r/(K theta)).
double bound_first_order(const RateInputs& ri);

/// Second-order rate: sigma^2 n / sigma_min^2 / (theta (1 ^ K theta)).
double bound_second_order(const RateInputs& ri);

/// Full upper-bound shape with constant 1: log^{5/2}(N) times the bracket of
/// first-order (with the r_avg and min terms) plus the kappa^2-weighted
/// second-order term.
double bound_upper_full(const RateInputs& ri);

/// Minimax lower-bound shape, two-term form:
/// (sigma/(20 sigma_min)) sqrt(n/K + r/(K theta))
///   + (sigma^2/(50 sigma_min^2)) sqrt(nd/K + rd/(K theta)).
double minimax_lower(const RateInputs& ri);

/// Oracle-estimator lower-bound shape, floored at zero:
/// sigma^4 n d / sigma_min^4 - (log n / sqrt(K)) (sigma sqrt(n) / sigma_min),
/// with d defaulting to n (set d = n to reproduce the square-case display).
double oracle_lower(const RateInputs& ri);

}  // namespace jive
