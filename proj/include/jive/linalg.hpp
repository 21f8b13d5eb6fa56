#pragma once

#include <cstddef>
#include <vector>

#include "jive/matrix.hpp"

namespace jive {

// --- products ----------------------------------------------------------------

/// A (m x k) * B (k x n)
Matrix matmul(const Matrix& a, const Matrix& b);
/// A (m x k) * B^T (B is n x k)
Matrix matmul_nt(const Matrix& a, const Matrix& b);
/// A^T * B (A is k x m, B is k x n)
Matrix matmul_tn(const Matrix& a, const Matrix& b);
/// A * A^T
Matrix gram_left(const Matrix& a);
/// A^T * A
Matrix gram_right(const Matrix& a);
/// a += s * b
void add_scaled(Matrix& a, const Matrix& b, double s);
/// B * B^T for a basis
Matrix projector(const OrthonormalBasis& b);

// --- factorizations -----------------------------------------------------------

/// Thin QR orthonormalization (modified Gram-Schmidt with reorthogonalization).
/// The R diagonal is nonnegative by construction, so output is deterministic
/// given the input. Throws RankDeficient when the smallest R diagonal falls
/// below 1e-12 x the largest.
OrthonormalBasis qr_orthonormalize(const Matrix& m);

/// Top-k SVD via one-sided Jacobi on the (possibly transposed) input.
/// Singular values sorted non-increasing; exactly tied values keep their
/// post-convergence column order. Left-vector signs follow the
/// largest-magnitude-entry-positive convention (right vectors flipped along).
TruncatedSvd truncated_svd(const Matrix& m, std::size_t k);

/// All singular values, non-increasing (one-sided Jacobi, values only; keeps
/// high relative accuracy for tiny values).
std::vector<double> singular_values(const Matrix& m);

struct EigResult {
    OrthonormalBasis vectors;             // top-k eigenvectors
    std::vector<double> eigenvalues;      // all n eigenvalues, non-increasing
};

/// Top-k eigenpairs of a symmetric matrix (symmetrized internally as
/// (s+s^T)/2, rejected if ||s - s^T||_max > 1e-8). Householder
/// tridiagonalization followed by implicit-shift QL; eigenvector signs are
/// normalized so the largest-magnitude entry is positive.
EigResult sym_top_eigvecs(const Matrix& s, std::size_t k);

/// All eigenvalues of a symmetric matrix, non-increasing. Values-only path
/// (no eigenvector accumulation); same symmetry checks as sym_top_eigvecs.
std::vector<double> sym_eigenvalues(const Matrix& s);

/// sigma_1(m) by power iteration on m^T m: all-ones start vector, successive
/// Rayleigh quotients converged at 1e-13 relative, 50000 iteration cap.
double spectral_norm(const Matrix& m);

/// (I - b b^T) m
Matrix project_out(const Matrix& m, const OrthonormalBasis& b);

/// Basis of the top-k left singular subspace of `a`, computed from the
/// small-side Gram eigendecomposition. Same subspace as truncated_svd(a,k).left
/// (cross-checked in tests); used on hot paths where only the subspace is
/// needed.
OrthonormalBasis top_left_singular_basis(const Matrix& a, std::size_t k);

}  // namespace jive
