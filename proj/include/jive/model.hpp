#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jive/matrix.hpp"

namespace jive {

enum class MisalignScheme { Randomized, TwoGroup };
enum class LoadingScheme { Random, Shared, OracleHard };

std::string to_string(MisalignScheme s);
std::string to_string(LoadingScheme s);
MisalignScheme parse_misalign_scheme(const std::string& s);
LoadingScheme parse_loading_scheme(const std::string& s);

/// Instance parameters. theta is the target misalignment; downstream analysis
/// uses the measured value recorded on the generated truth.
struct JiveConfig {
    std::size_t n = 20;        // rows
    std::size_t d = 20;        // columns (common across the K matrices)
    std::size_t K = 2;         // number of matrices
    std::size_t r = 2;         // shared rank
    std::size_t r_k = 2;       // unique rank (common)
    double theta = 0.5;        // target misalignment, in (0, 1 - 1/K]
    double sigma = 0.0;        // noise std
    double gamma = 0.5;        // unique-loading scale
    MisalignScheme misalign = MisalignScheme::Randomized;
    LoadingScheme loading = LoadingScheme::Random;
    std::uint64_t seed = 0;

    /// Throws InvalidConfig / OddK / SchemeConstraint on violations.
    /// theta = 0 is rejected: the shared subspace is unidentifiable there.
    void validate() const;
};

struct GroundTruth {
    OrthonormalBasis u_star;                 // n x r
    std::vector<OrthonormalBasis> u_k;       // K of n x r_k
    std::vector<Matrix> v_k;                 // K of d x r
    std::vector<Matrix> w_k;                 // K of d x r_k
    std::vector<Matrix> a_star;              // K of n x d, clean
    double measured_theta = 0.0;
    double sigma_min = 0.0;                  // min_k sigma_{r+r_k}(a_star[k])
    double sigma_max = 0.0;                  // max_k sigma_1(a_star[k])
    double kappa = 1.0;                      // sigma_max / sigma_min
    bool identifiable = true;                // false when signal or misalignment degenerates
};

struct Dataset {
    std::vector<Matrix> a;      // K observed matrices
    JiveConfig config;
    std::optional<GroundTruth> truth;
};

/// Random n x k orthonormal matrix: i.i.d. Gaussian fill (row-major draw
/// order) projected off every basis in `orthogonal_to`, then thin QR.
/// Deterministic given the seed; re-draws with a mixed-in attempt counter on
/// numerical rank deficiency.
OrthonormalBasis gen_orthonormal(std::uint64_t seed, std::size_t n, std::size_t k,
                                 const std::vector<const OrthonormalBasis*>& orthogonal_to = {});

/// U_k = sqrt(1-theta) Z + sqrt(theta) Z_k with one shared Z orthogonal to
/// u_star and per-k Z_k orthogonal to {u_star, Z}. Misalignment is
/// approximately theta; the exact value is recorded at assembly.
std::vector<OrthonormalBasis> gen_unique_randomized(std::uint64_t seed,
                                                    const OrthonormalBasis& u_star, double theta,
                                                    std::size_t K, std::size_t r_k);

/// Two-group construction: U_k = sqrt(1-theta) Z2 + sqrt(theta) Z3 for odd k,
/// minus for even. Requires K even and theta <= 1/2. Achieves
/// ||(1/K) sum U_k U_k^T|| = 1 - theta exactly.
std::vector<OrthonormalBasis> gen_unique_two_group(std::uint64_t seed,
                                                   const OrthonormalBasis& u_star, double theta,
                                                   std::size_t K, std::size_t r_k);

struct Loadings {
    std::vector<Matrix> v_k;  // d x r
    std::vector<Matrix> w_k;  // d x r_k
};

/// Random: fresh per-k orthonormal V_k and gamma-scaled orthonormal W_k.
/// Shared: one draw used for every k. OracleHard: W* = 0.6 V* + 0.8 Z1 with
/// V*^T W* = 0.6 I and the sigma_min = sqrt(0.4) normalization, so
/// V_k = V* and W_k = W* verbatim (gamma unused; requires r == r_k, 2r <= d).
Loadings gen_loadings(std::uint64_t seed, LoadingScheme scheme, std::size_t K, std::size_t d,
                      std::size_t r, std::size_t r_k, double gamma);

/// a_star[k] = u_star v_k^T + u_k w_k^T, with measured misalignment and the
/// retained-singular-value summary (sigma_min/sigma_max/kappa) recomputed.
GroundTruth assemble(OrthonormalBasis u_star, std::vector<OrthonormalBasis> u_k,
                     std::vector<Matrix> v_k, std::vector<Matrix> w_k);

/// a[k] = a_star[k] + sigma * G_k with per-k derived noise streams.
/// sigma = 0 returns bit-exact clean copies.
Dataset add_noise(std::uint64_t seed, const GroundTruth& truth, double sigma);

/// Full pipeline driven by the config (validate, subspaces, loadings,
/// assemble, noise). Deterministic given (config, seed).
Dataset generate(const JiveConfig& config);

/// The K=2, n=d=3, r=r_1=r_2=1, sigma=0 instance on which stacked SVD fails:
///   A_1 = e_1 (1 0 0) + eps (0 1 -1)^T (1 1 1)
///   A_2 = e_1 (1 0 0) + eps (0 1  1)^T (1 1 1)
Dataset counterexample_stacked(double epsilon);

}  // namespace jive
