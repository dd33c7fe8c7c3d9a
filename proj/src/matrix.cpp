#include "apcc/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace apcc {

MatrixBlock::MatrixBlock(int rows, int cols)
    : rows(rows), cols(cols), data(static_cast<std::size_t>(rows) * cols, 0.0) {
    if (rows <= 0 || cols <= 0) {
        throw InvalidArgument("MatrixBlock dimensions must be positive");
    }
}

MatrixBlock::MatrixBlock(int rows, int cols, std::vector<double> entries)
    : rows(rows), cols(cols), data(std::move(entries)) {
    validate();
}

void MatrixBlock::validate() const {
    if (rows <= 0 || cols <= 0) {
        throw InvalidArgument("MatrixBlock dimensions must be positive");
    }
    if (data.size() != static_cast<std::size_t>(rows) * cols) {
        throw InvalidArgument("MatrixBlock entry count " + std::to_string(data.size()) +
                              " does not match " + std::to_string(rows) + "x" +
                              std::to_string(cols));
    }
    for (double v : data) {
        if (!std::isfinite(v)) {
            throw InvalidArgument("MatrixBlock entries must be finite");
        }
    }
}

MatrixBlock& MatrixBlock::operator+=(const MatrixBlock& other) {
    if (!same_shape(other)) throw InvalidArgument("MatrixBlock shape mismatch in +=");
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += other.data[i];
    return *this;
}

MatrixBlock& MatrixBlock::operator*=(double s) {
    for (double& v : data) v *= s;
    return *this;
}

void MatrixBlock::axpy(double s, const MatrixBlock& other) {
    if (!same_shape(other)) throw InvalidArgument("MatrixBlock shape mismatch in axpy");
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += s * other.data[i];
}

MatrixBlock zeros_like(const MatrixBlock& block) {
    return MatrixBlock(block.rows, block.cols);
}

MatrixBlock operator+(MatrixBlock lhs, const MatrixBlock& rhs) {
    lhs += rhs;
    return lhs;
}

MatrixBlock operator-(const MatrixBlock& lhs, const MatrixBlock& rhs) {
    MatrixBlock out = lhs;
    out.axpy(-1.0, rhs);
    return out;
}

MatrixBlock operator*(double s, MatrixBlock block) {
    block *= s;
    return block;
}

MatrixBlock matmul(const MatrixBlock& a, const MatrixBlock& b) {
    if (a.cols != b.rows) throw InvalidArgument("matmul inner dimensions disagree");
    MatrixBlock out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int k = 0; k < a.cols; ++k) {
            const double aik = a.at(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols; ++j) {
                out.at(i, j) += aik * b.at(k, j);
            }
        }
    }
    return out;
}

MatrixBlock transpose(const MatrixBlock& block) {
    MatrixBlock out(block.cols, block.rows);
    for (int i = 0; i < block.rows; ++i)
        for (int j = 0; j < block.cols; ++j) out.at(j, i) = block.at(i, j);
    return out;
}

double relative_error(const MatrixBlock& a, const MatrixBlock& b) {
    if (!a.same_shape(b)) throw InvalidArgument("relative_error shape mismatch");
    double num = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        num = std::max(num, std::abs(a.data[i] - b.data[i]));
    }
    return num / std::max(1.0, max_abs(b));
}

double max_abs(const MatrixBlock& block) {
    double m = 0.0;
    for (double v : block.data) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace apcc
