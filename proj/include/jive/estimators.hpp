#pragma once

#include <optional>
#include <vector>

#include "jive/matrix.hpp"
#include "jive/model.hpp"

namespace jive {

struct PerMatrixEstimate {
    Matrix v_hat;             // d x r
    OrthonormalBasis u_k_hat; // n x r_k
    Matrix w_hat;             // d x r_k
    Matrix a_hat;             // n x d
};

struct Estimate {
    OrthonormalBasis u_hat;                  // n x r
    std::vector<double> aggregate_eigenvalues;  // leading min(r+1, n) eigenvalues
    bool degenerate_gap = false;             // eig r == eig r+1 within 1e-12
    std::optional<std::vector<PerMatrixEstimate>> per_k;
};

/// Two-stage spectral estimator: per-matrix top-(r + r_k) left singular
/// basis, then the top-r eigenvectors of the summed projectors. The K
/// per-matrix factorizations never consult the ground truth. With
/// `reconstruct`, per-k estimates are produced as
///   V_hat = A_k^T U_hat,
///   U_k_hat = top-r_k left singular basis of (I - U_hat U_hat^T) A_k,
///   W_hat = A_k^T U_k_hat,
///   A_hat = U_hat V_hat^T + U_k_hat W_hat^T.
Estimate ajive(const Dataset& data, std::size_t r, const std::vector<std::size_t>& r_k_list,
               bool reconstruct = false);

/// Oracle-aided estimator: removes the rank-r_k truncated reconstruction of
/// (I - U* U*^T) A_k from each matrix, then takes the top-r eigenvectors of
/// M = (1/K) sum_k (A_k - U_k_hat W_hat^T)(...)^T. Output depends on u_star
/// only through its column span.
Estimate oracle_estimate(const Dataset& data, std::size_t r,
                         const std::vector<std::size_t>& r_k_list,
                         const OrthonormalBasis& u_star);

/// Top-r left singular basis of [A_1 ... A_K], computed via the top-r
/// eigenvectors of sum_k A_k A_k^T (the equivalent Gram route).
Estimate stacked_svd(const Dataset& data, std::size_t r);

/// Reference route for the stacked estimator: explicit horizontal
/// concatenation followed by a truncated SVD. Cross-checked against
/// stacked_svd in tests.
OrthonormalBasis stacked_svd_concat(const Dataset& data, std::size_t r);

}  // namespace jive
