#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "jive/errors.hpp"

namespace jive {

/// Dense real matrix, row-major. The universal carrier for data matrices,
/// bases and Gram matrices. Entries are validated finite on construction
/// from external data.
class Matrix {
  public:
    Matrix() = default;

    /// Zero matrix.
    Matrix(std::size_t rows, std::size_t cols);

    /// Takes ownership of `entries` (row-major, length rows*cols). Throws
    /// DimensionMismatch on a length mismatch and NonFiniteEntry if any entry
    /// is NaN or infinite.
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return v_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return v_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return v_[i * cols_ + j]; }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    double* row(std::size_t i) { return v_.data() + i * cols_; }
    const double* row(std::size_t i) const { return v_.data() + i * cols_; }

    Matrix transposed() const;

    /// max_ij |a_ij|
    double max_abs() const;

    bool all_finite() const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> v_;
};

/// n x k matrix (k <= n) with orthonormal columns; construction enforces
/// ||B^T B - I||_max <= 1e-10.
class OrthonormalBasis {
  public:
    static constexpr double kOrthoTol = 1e-10;

    explicit OrthonormalBasis(Matrix m);

    const Matrix& mat() const { return m_; }
    std::size_t rows() const { return m_.rows(); }
    std::size_t cols() const { return m_.cols(); }

    /// ||B^T B - I||_max of the stored matrix.
    double orthonormality_residual() const;

  private:
    Matrix m_;
};

/// Top-k singular triplet bundle: left/right have k orthonormal columns,
/// singular values sorted non-increasing.
struct TruncatedSvd {
    OrthonormalBasis left;
    std::vector<double> singular_values;
    OrthonormalBasis right;

    TruncatedSvd(OrthonormalBasis l, std::vector<double> s, OrthonormalBasis r);
};

// --- matrix text format -----------------------------------------------------
// Line 1: "rows cols"; then `rows` lines of `cols` space-separated decimal
// floats at 17 significant digits. Round-trips doubles bit-exactly.

std::string format_matrix(const Matrix& m);
Matrix parse_matrix(const std::string& text);
void write_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix(const std::filesystem::path& path);

/// 17-significant-digit rendering used by every text output of the library.
std::string format_double(double x);

}  // namespace jive
