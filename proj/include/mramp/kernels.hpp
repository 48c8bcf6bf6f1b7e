#pragma once

// Data-parallel inner loops. Every kernel has a plain serial reference in
// kernels::serial and an OpenMP version in kernels::parallel. The parallel
// versions split work into fixed-size chunks, so their results do not depend
// on the thread count.

#include <cstdint>

#include "mramp/types.hpp"

namespace mramp::kernels {

inline constexpr Index kChunk = 64;

// Set the thread count used by the parallel kernels (<= 0 means OpenMP default).
void set_threads(int threads);
int max_threads();

namespace serial {

void gemv(const RowMatrix& a, const Vector& x, Vector& y);
void gemv_t(const RowMatrix& a, const Vector& r, Vector& out);
void fill_gaussian(RowMatrix& a, std::uint64_t seed, double stddev);
Vector column_norms(const RowMatrix& a);
void scale_columns(RowMatrix& a, const Vector& factors);
void soft_threshold(const Vector& z, double threshold, Vector& out);
// Forward differences with zero flux at the last row/column.
void gradient(const Matrix& x, Matrix& gx, Matrix& gy);
// Negative adjoint of gradient().
void divergence(const Matrix& px, const Matrix& py, Matrix& out);

}  // namespace serial

namespace parallel {

void gemv(const RowMatrix& a, const Vector& x, Vector& y);
void gemv_t(const RowMatrix& a, const Vector& r, Vector& out);
void fill_gaussian(RowMatrix& a, std::uint64_t seed, double stddev);
Vector column_norms(const RowMatrix& a);
void scale_columns(RowMatrix& a, const Vector& factors);
void soft_threshold(const Vector& z, double threshold, Vector& out);
void gradient(const Matrix& x, Matrix& gx, Matrix& gy);
void divergence(const Matrix& px, const Matrix& py, Matrix& out);

}  // namespace parallel

// Row i of a seeded Gaussian ensemble; shared by the dense fill and the
// matrix-free regeneration path.
void gaussian_row(std::uint64_t seed, Index row, double stddev, double* out, Index n);

}  // namespace mramp::kernels
