#include "jive/matrix.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "jive/kernels.hpp"

namespace jive {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), v_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), v_(std::move(entries)) {
    if (v_.size() != rows_ * cols_) {
        throw DimensionMismatch("matrix entries length " + std::to_string(v_.size()) +
                                " != " + std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    if (!all_finite()) throw NonFiniteEntry("matrix has NaN/Inf entries");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
}

bool Matrix::all_finite() const {
    for (double x : v_)
        if (!std::isfinite(x)) return false;
    return true;
}

OrthonormalBasis::OrthonormalBasis(Matrix m) : m_(std::move(m)) {
    if (m_.cols() > m_.rows()) {
        throw DimensionMismatch("basis has more columns than rows");
    }
    const double res = orthonormality_residual();
    if (res > kOrthoTol) {
        throw Error("columns not orthonormal: residual " + std::to_string(res));
    }
}

double OrthonormalBasis::orthonormality_residual() const {
    const auto& kern = kernels::active();
    const std::size_t n = m_.rows(), k = m_.cols();
    // column-major copy so column dots are contiguous
    std::vector<double> cols(n * k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) cols[j * n + i] = m_(i, j);
    double res = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a; b < k; ++b) {
            const double g = kern.dot(cols.data() + a * n, cols.data() + b * n, n);
            res = std::max(res, std::abs(g - (a == b ? 1.0 : 0.0)));
        }
    }
    return res;
}

TruncatedSvd::TruncatedSvd(OrthonormalBasis l, std::vector<double> s, OrthonormalBasis r)
    : left(std::move(l)), singular_values(std::move(s)), right(std::move(r)) {
    if (left.cols() != singular_values.size() || right.cols() != singular_values.size()) {
        throw DimensionMismatch("singular value count does not match basis widths");
    }
    for (std::size_t i = 0; i + 1 < singular_values.size(); ++i) {
        if (singular_values[i] < singular_values[i + 1]) {
            throw Error("singular values not sorted non-increasing");
        }
    }
    for (double s_i : singular_values) {
        if (s_i < 0.0) throw Error("negative singular value");
    }
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string format_matrix(const Matrix& m) {
    std::string out;
    out.reserve(m.size() * 26 + 32);
    out += std::to_string(m.rows());
    out += ' ';
    out += std::to_string(m.cols());
    out += '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out += ' ';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    return out;
}

Matrix parse_matrix(const std::string& text) {
    std::istringstream in(text);
    long long rows = -1, cols = -1;
    if (!(in >> rows >> cols) || rows <= 0 || cols <= 0) {
        throw IoError("matrix text: bad header line");
    }
    std::vector<double> entries;
    entries.reserve(static_cast<std::size_t>(rows * cols));
    double x;
    while (in >> x) entries.push_back(x);
    if (entries.size() != static_cast<std::size_t>(rows * cols)) {
        throw IoError("matrix text: expected " + std::to_string(rows * cols) + " entries, got " +
                      std::to_string(entries.size()));
    }
    return Matrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), std::move(entries));
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << format_matrix(m);
    if (!out) throw IoError("write failed: " + path.string());
}

Matrix read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_matrix(ss.str());
}

}  // namespace jive
