#pragma once

#include <cstddef>
#include <vector>

#include "apcc/errors.hpp"

namespace apcc {

/// Dense real matrix in row-major order. The unit of input data, padding
/// and results throughout the codec.
struct MatrixBlock {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;  // rows*cols entries, row-major

    MatrixBlock() = default;
    MatrixBlock(int rows, int cols);
    MatrixBlock(int rows, int cols, std::vector<double> entries);

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    std::size_t size() const { return data.size(); }
    bool same_shape(const MatrixBlock& other) const {
        return rows == other.rows && cols == other.cols;
    }

    /// Throws InvalidArgument if dimensions and entry count disagree or an
    /// entry is not finite.
    void validate() const;

    MatrixBlock& operator+=(const MatrixBlock& other);
    MatrixBlock& operator*=(double s);
    /// this += s * other
    void axpy(double s, const MatrixBlock& other);
};

MatrixBlock zeros_like(const MatrixBlock& block);

MatrixBlock operator+(MatrixBlock lhs, const MatrixBlock& rhs);
MatrixBlock operator-(const MatrixBlock& lhs, const MatrixBlock& rhs);
MatrixBlock operator*(double s, MatrixBlock block);

/// Plain matrix product, used by polynomial workloads such as D*D^T.
MatrixBlock matmul(const MatrixBlock& a, const MatrixBlock& b);

MatrixBlock transpose(const MatrixBlock& block);

/// max_ij |a_ij - b_ij| / max(1, max_ij |b_ij|)
double relative_error(const MatrixBlock& a, const MatrixBlock& b);

double max_abs(const MatrixBlock& block);

}  // namespace apcc
