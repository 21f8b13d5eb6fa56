#include "jive/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "jive/kernels.hpp"
#include "jive/linalg.hpp"

namespace jive {

namespace {

void check_ranks(const Dataset& data, std::size_t r, const std::vector<std::size_t>& r_k_list) {
    if (data.a.empty()) throw EmptyList("estimator: dataset has no matrices");
    if (r_k_list.size() != data.a.size()) {
        throw DimensionMismatch("estimator: r_k list length != K");
    }
    if (r < 1) throw InvalidRank("estimator: r must be >= 1");
    for (std::size_t k = 0; k < data.a.size(); ++k) {
        const std::size_t lo = std::min(data.a[k].rows(), data.a[k].cols());
        if (r_k_list[k] < 1 || r + r_k_list[k] > lo) {
            throw InvalidRank("estimator: r + r_k out of range for matrix " + std::to_string(k));
        }
    }
}

/// Shared second stage: top-r eigenvectors of the aggregate plus the
/// spectrum diagnostics.
Estimate second_stage(const Matrix& aggregate, std::size_t r) {
    const EigResult eig = sym_top_eigvecs(aggregate, r);
    const std::size_t lead = std::min(r + 1, eig.eigenvalues.size());
    std::vector<double> head(eig.eigenvalues.begin(), eig.eigenvalues.begin() + lead);
    bool degenerate = false;
    if (r < eig.eigenvalues.size()) {
        degenerate = std::abs(eig.eigenvalues[r - 1] - eig.eigenvalues[r]) <= 1e-12;
    }
    return Estimate{eig.vectors, std::move(head), degenerate, std::nullopt};
}

}  // namespace

Estimate ajive(const Dataset& data, std::size_t r, const std::vector<std::size_t>& r_k_list,
               bool reconstruct) {
    check_ranks(data, r, r_k_list);
    const std::size_t n = data.a.front().rows();
    Matrix aggregate(n, n);
    for (std::size_t k = 0; k < data.a.size(); ++k) {
        if (data.a[k].rows() != n) throw DimensionMismatch("ajive: row mismatch across matrices");
        const OrthonormalBasis uk = top_left_singular_basis(data.a[k], r + r_k_list[k]);
        add_scaled(aggregate, projector(uk), 1.0);
    }
    Estimate est = second_stage(aggregate, r);

    if (reconstruct) {
        std::vector<PerMatrixEstimate> per;
        per.reserve(data.a.size());
        for (std::size_t k = 0; k < data.a.size(); ++k) {
            const Matrix& a = data.a[k];
            Matrix v_hat = matmul_tn(a, est.u_hat.mat());          // A^T U, d x r
            const Matrix resid = project_out(a, est.u_hat);        // (I - U U^T) A
            OrthonormalBasis u_k_hat = top_left_singular_basis(resid, r_k_list[k]);
            Matrix w_hat = matmul_tn(a, u_k_hat.mat());            // A^T U_k, d x r_k
            Matrix a_hat = matmul_nt(est.u_hat.mat(), v_hat);
            add_scaled(a_hat, matmul_nt(u_k_hat.mat(), w_hat), 1.0);
            per.push_back(PerMatrixEstimate{std::move(v_hat), std::move(u_k_hat),
                                            std::move(w_hat), std::move(a_hat)});
        }
        est.per_k = std::move(per);
    }
    return est;
}

Estimate oracle_estimate(const Dataset& data, std::size_t r,
                         const std::vector<std::size_t>& r_k_list,
                         const OrthonormalBasis& u_star) {
    check_ranks(data, r, r_k_list);
    const std::size_t n = data.a.front().rows();
    if (u_star.rows() != n) throw DimensionMismatch("oracle: u_star row mismatch");

    Matrix m(n, n);
    for (std::size_t k = 0; k < data.a.size(); ++k) {
        if (data.a[k].rows() != n) throw DimensionMismatch("oracle: row mismatch across matrices");
        const Matrix resid = project_out(data.a[k], u_star);  // P*^perp A_k
        const OrthonormalBasis uk = top_left_singular_basis(resid, r_k_list[k]);
        // rank-r_k truncation of the residual: U_k (U_k^T resid)
        Matrix deflated = data.a[k];
        add_scaled(deflated, matmul(uk.mat(), matmul_tn(uk.mat(), resid)), -1.0);
        add_scaled(m, gram_left(deflated), 1.0);
    }
    kernels::active().scal(1.0 / static_cast<double>(data.a.size()), m.data(), m.size());
    return second_stage(m, r);
}

Estimate stacked_svd(const Dataset& data, std::size_t r) {
    if (data.a.empty()) throw EmptyList("stacked_svd: dataset has no matrices");
    const std::size_t n = data.a.front().rows();
    std::size_t total_cols = 0;
    for (const Matrix& a : data.a) {
        if (a.rows() != n) throw DimensionMismatch("stacked_svd: row mismatch across matrices");
        total_cols += a.cols();
    }
    if (r < 1 || r > std::min(n, total_cols)) throw InvalidRank("stacked_svd: r out of range");
    Matrix g(n, n);
    for (const Matrix& a : data.a) add_scaled(g, gram_left(a), 1.0);
    return second_stage(g, r);
}

OrthonormalBasis stacked_svd_concat(const Dataset& data, std::size_t r) {
    if (data.a.empty()) throw EmptyList("stacked_svd_concat: dataset has no matrices");
    const std::size_t n = data.a.front().rows();
    std::size_t total_cols = 0;
    for (const Matrix& a : data.a) total_cols += a.cols();
    if (r < 1 || r > std::min(n, total_cols)) throw InvalidRank("stacked_svd_concat: r out of range");
    Matrix stacked(n, total_cols);
    std::size_t off = 0;
    for (const Matrix& a : data.a) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) stacked(i, off + j) = a(i, j);
        off += a.cols();
    }
    return truncated_svd(stacked, r).left;
}

}  // namespace jive
