#include "mramp/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mramp/rng.hpp"

namespace mramp::kernels {

namespace {
int g_threads = 0;

Index num_chunks(Index n) { return (n + kChunk - 1) / kChunk; }
}  // namespace

void set_threads(int threads) {
  g_threads = threads;
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif
}

int max_threads() {
#ifdef _OPENMP
  return g_threads > 0 ? g_threads : omp_get_max_threads();
#else
  return 1;
#endif
}

void gaussian_row(std::uint64_t seed, Index row, double stddev, double* out, Index n) {
  CounterRng rng(seed, Purpose::matrix, {static_cast<std::uint64_t>(row)});
  for (Index j = 0; j < n; ++j) out[j] = stddev * rng.normal();
}

namespace serial {

void gemv(const RowMatrix& a, const Vector& x, Vector& y) {
  y.resize(a.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (Index j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
}

void gemv_t(const RowMatrix& a, const Vector& r, Vector& out) {
  out.setZero(a.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    const double ri = r[i];
    for (Index j = 0; j < a.cols(); ++j) out[j] += a(i, j) * ri;
  }
}

void fill_gaussian(RowMatrix& a, std::uint64_t seed, double stddev) {
  for (Index i = 0; i < a.rows(); ++i) gaussian_row(seed, i, stddev, a.row(i).data(), a.cols());
}

Vector column_norms(const RowMatrix& a) {
  Vector sq = Vector::Zero(a.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) sq[j] += a(i, j) * a(i, j);
  return sq.cwiseSqrt();
}

void scale_columns(RowMatrix& a, const Vector& factors) {
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) a(i, j) *= factors[j];
}

void soft_threshold(const Vector& z, double threshold, Vector& out) {
  out.resize(z.size());
  for (Index i = 0; i < z.size(); ++i) {
    const double mag = std::abs(z[i]) - threshold;
    out[i] = mag > 0.0 ? std::copysign(mag, z[i]) : 0.0;
  }
}

void gradient(const Matrix& x, Matrix& gx, Matrix& gy) {
  const Index r = x.rows(), c = x.cols();
  gx.resize(r, c);
  gy.resize(r, c);
  for (Index j = 0; j < c; ++j) {
    for (Index i = 0; i < r; ++i) {
      gx(i, j) = i + 1 < r ? x(i + 1, j) - x(i, j) : 0.0;
      gy(i, j) = j + 1 < c ? x(i, j + 1) - x(i, j) : 0.0;
    }
  }
}

void divergence(const Matrix& px, const Matrix& py, Matrix& out) {
  const Index r = px.rows(), c = px.cols();
  out.resize(r, c);
  for (Index j = 0; j < c; ++j) {
    for (Index i = 0; i < r; ++i) {
      double dx;
      if (i == 0) dx = px(i, j);
      else if (i + 1 == r) dx = -px(i - 1, j);
      else dx = px(i, j) - px(i - 1, j);
      double dy;
      if (j == 0) dy = py(i, j);
      else if (j + 1 == c) dy = -py(i, j - 1);
      else dy = py(i, j) - py(i, j - 1);
      out(i, j) = dx + dy;
    }
  }
}

}  // namespace serial

namespace parallel {

void gemv(const RowMatrix& a, const Vector& x, Vector& y) {
  y.resize(a.rows());
  const Index chunks = num_chunks(a.rows());
#pragma omp parallel for schedule(static) if (chunks > 1)
  for (Index c = 0; c < chunks; ++c) {
    const Index r0 = c * kChunk;
    const Index len = std::min(kChunk, a.rows() - r0);
    y.segment(r0, len).noalias() = a.middleRows(r0, len) * x;
  }
}

void gemv_t(const RowMatrix& a, const Vector& r, Vector& out) {
  out.resize(a.cols());
  const Index chunks = num_chunks(a.cols());
#pragma omp parallel for schedule(static) if (chunks > 1)
  for (Index c = 0; c < chunks; ++c) {
    const Index c0 = c * kChunk;
    const Index len = std::min(kChunk, a.cols() - c0);
    out.segment(c0, len).noalias() = a.middleCols(c0, len).transpose() * r;
  }
}

void fill_gaussian(RowMatrix& a, std::uint64_t seed, double stddev) {
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < a.rows(); ++i) gaussian_row(seed, i, stddev, a.row(i).data(), a.cols());
}

Vector column_norms(const RowMatrix& a) {
  Vector sq(a.cols());
  const Index chunks = num_chunks(a.cols());
#pragma omp parallel for schedule(static)
  for (Index c = 0; c < chunks; ++c) {
    const Index c0 = c * kChunk;
    const Index len = std::min(kChunk, a.cols() - c0);
    sq.segment(c0, len) = a.middleCols(c0, len).colwise().squaredNorm().transpose();
  }
  return sq.cwiseSqrt();
}

void scale_columns(RowMatrix& a, const Vector& factors) {
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < a.rows(); ++i) a.row(i).array() *= factors.transpose().array();
}

void soft_threshold(const Vector& z, double threshold, Vector& out) {
  out.resize(z.size());
  const Index n = z.size();
#pragma omp parallel for schedule(static) if (n > 4 * kChunk)
  for (Index i = 0; i < n; ++i) {
    const double mag = std::abs(z[i]) - threshold;
    out[i] = mag > 0.0 ? std::copysign(mag, z[i]) : 0.0;
  }
}

void gradient(const Matrix& x, Matrix& gx, Matrix& gy) {
  const Index r = x.rows(), c = x.cols();
  gx.resize(r, c);
  gy.resize(r, c);
#pragma omp parallel for schedule(static) if (r * c > 4096)
  for (Index j = 0; j < c; ++j) {
    for (Index i = 0; i + 1 < r; ++i) gx(i, j) = x(i + 1, j) - x(i, j);
    gx(r - 1, j) = 0.0;
    if (j + 1 < c) {
      gy.col(j) = x.col(j + 1) - x.col(j);
    } else {
      gy.col(j).setZero();
    }
  }
}

void divergence(const Matrix& px, const Matrix& py, Matrix& out) {
  const Index r = px.rows(), c = px.cols();
  out.resize(r, c);
#pragma omp parallel for schedule(static) if (r * c > 4096)
  for (Index j = 0; j < c; ++j) {
    out(0, j) = px(0, j);
    for (Index i = 1; i + 1 < r; ++i) out(i, j) = px(i, j) - px(i - 1, j);
    if (r > 1) out(r - 1, j) = -px(r - 2, j);
    if (j == 0) {
      out.col(j) += py.col(j);
    } else if (j + 1 == c) {
      out.col(j) -= py.col(j - 1);
    } else {
      out.col(j) += py.col(j) - py.col(j - 1);
    }
  }
}

}  // namespace parallel

}  // namespace mramp::kernels
