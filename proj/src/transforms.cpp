#include "mramp/transforms.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <span>

#include "mramp/error.hpp"

namespace mramp {

namespace {

constexpr std::array<double, 2> kHaar = {0.70710678118654752440, 0.70710678118654752440};
constexpr std::array<double, 8> kD8 = {
    0.2303778133088964,  0.7148465705529154, 0.6308807679298587,  -0.0279837694168599,
    -0.1870348117190931, 0.0308413818355607, 0.0328830116668852, -0.0105974017850690};

std::span<const double> filter_taps(WaveletFilter f) {
  if (f == WaveletFilter::haar) return kHaar;
  return kD8;
}

std::shared_ptr<const Matrix> dct_basis(Index n) {
  static std::mutex mu;
  static std::map<Index, std::shared_ptr<const Matrix>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto c = std::make_shared<Matrix>(n, n);
  const double s0 = std::sqrt(1.0 / static_cast<double>(n));
  const double s = std::sqrt(2.0 / static_cast<double>(n));
  for (Index k = 0; k < n; ++k) {
    for (Index j = 0; j < n; ++j) {
      (*c)(k, j) = (k == 0 ? s0 : s) *
                   std::cos(std::numbers::pi * static_cast<double>((2 * j + 1) * k) / (2.0 * static_cast<double>(n)));
    }
  }
  cache.emplace(n, c);
  return c;
}

}  // namespace

std::string to_string(TransformKind k) {
  switch (k) {
    case TransformKind::identity: return "identity";
    case TransformKind::dct: return "dct";
    case TransformKind::wavelet: return "wavelet";
    case TransformKind::difference: return "difference";
  }
  return "identity";
}

std::string to_string(WaveletFilter f) { return f == WaveletFilter::haar ? "haar" : "d8"; }

int max_wavelet_levels(Index n) {
  int j = 0;
  while (n > 1 && n % 2 == 0) {
    n /= 2;
    ++j;
  }
  return j;
}

Transform::Transform(TransformKind kind, Index n, int levels, WaveletFilter filter)
    : kind_(kind), n_(n), levels_(levels), filter_(filter) {
  if (n < 1) throw ParameterError("transform size must be positive");
}

Transform Transform::identity(Index n) { return Transform(TransformKind::identity, n, 0, WaveletFilter::haar); }

Transform Transform::dct(Index n) {
  Transform t(TransformKind::dct, n, 0, WaveletFilter::haar);
  t.basis_ = dct_basis(n);
  return t;
}

Transform Transform::wavelet(Index n, int levels, WaveletFilter filter) {
  if (levels < 0) throw ParameterError("wavelet levels must be non-negative");
  if (levels > max_wavelet_levels(n)) {
    throw ParameterError("wavelet depth " + std::to_string(levels) + " exceeds the dyadic depth of n=" +
                         std::to_string(n));
  }
  return Transform(TransformKind::wavelet, n, levels, filter);
}

Transform Transform::difference(Index n) {
  if (n < 2) throw ParameterError("difference transform needs n >= 2");
  return Transform(TransformKind::difference, n, 0, WaveletFilter::haar);
}

void Transform::dwt_forward(double* data, Index stride, Vector& work) const {
  const auto h = filter_taps(filter_);
  const Index taps = static_cast<Index>(h.size());
  work.resize(n_);
  Index len = n_;
  for (int level = 0; level < levels_; ++level) {
    const Index half = len / 2;
    for (Index k = 0; k < half; ++k) {
      double a = 0.0, d = 0.0;
      for (Index i = 0; i < taps; ++i) {
        const double v = data[((2 * k + i) % len) * stride];
        a += h[i] * v;
        // g[i] = (-1)^i h[taps-1-i]
        d += ((i & 1) ? -h[taps - 1 - i] : h[taps - 1 - i]) * v;
      }
      work[k] = a;
      work[half + k] = d;
    }
    for (Index k = 0; k < len; ++k) data[k * stride] = work[k];
    len = half;
  }
}

void Transform::dwt_inverse(double* data, Index stride, Vector& work) const {
  const auto h = filter_taps(filter_);
  const Index taps = static_cast<Index>(h.size());
  work.resize(n_);
  Index len = n_ >> levels_;
  for (int level = 0; level < levels_; ++level) {
    const Index half = len;
    len *= 2;
    work.head(len).setZero();
    for (Index k = 0; k < half; ++k) {
      const double a = data[k * stride];
      const double d = data[(half + k) * stride];
      for (Index i = 0; i < taps; ++i) {
        const Index j = (2 * k + i) % len;
        work[j] += h[i] * a + ((i & 1) ? -h[taps - 1 - i] : h[taps - 1 - i]) * d;
      }
    }
    for (Index k = 0; k < len; ++k) data[k * stride] = work[k];
  }
}

Vector Transform::forward(const Vector& x) const {
  if (x.size() != n_) throw DimensionError("transform forward: size mismatch");
  switch (kind_) {
    case TransformKind::identity: return x;
    case TransformKind::dct: return (*basis_) * x;
    case TransformKind::difference: return x.tail(n_ - 1) - x.head(n_ - 1);
    case TransformKind::wavelet: {
      Vector out = x;
      Vector work;
      dwt_forward(out.data(), 1, work);
      return out;
    }
  }
  return x;
}

Vector Transform::inverse(const Vector& s) const {
  if (kind_ == TransformKind::difference) throw UnsupportedError("difference transform has no inverse");
  if (s.size() != n_) throw DimensionError("transform inverse: size mismatch");
  switch (kind_) {
    case TransformKind::dct: return basis_->transpose() * s;
    case TransformKind::wavelet: {
      Vector out = s;
      Vector work;
      dwt_inverse(out.data(), 1, work);
      return out;
    }
    default: return s;
  }
}

Matrix Transform::forward2d(const Matrix& x) const {
  if (x.rows() != n_ || x.cols() != n_) throw DimensionError("transform forward2d: size mismatch");
  switch (kind_) {
    case TransformKind::identity: return x;
    case TransformKind::dct: return (*basis_) * x * basis_->transpose();
    case TransformKind::difference: throw UnsupportedError("2D difference transform is not square");
    case TransformKind::wavelet: {
      Matrix out = x;
      Vector work;
      for (Index c = 0; c < n_; ++c) dwt_forward(out.col(c).data(), 1, work);
      for (Index r = 0; r < n_; ++r) dwt_forward(out.data() + r, n_, work);
      return out;
    }
  }
  return x;
}

Matrix Transform::inverse2d(const Matrix& s) const {
  if (s.rows() != n_ || s.cols() != n_) throw DimensionError("transform inverse2d: size mismatch");
  switch (kind_) {
    case TransformKind::identity: return s;
    case TransformKind::dct: return basis_->transpose() * s * (*basis_);
    case TransformKind::difference: throw UnsupportedError("difference transform has no inverse");
    case TransformKind::wavelet: {
      Matrix out = s;
      Vector work;
      for (Index r = 0; r < n_; ++r) dwt_inverse(out.data() + r, n_, work);
      for (Index c = 0; c < n_; ++c) dwt_inverse(out.col(c).data(), 1, work);
      return out;
    }
  }
  return s;
}

Matrix Transform::matrix() const {
  if (kind_ == TransformKind::dct) return *basis_;
  Matrix m(output_size(), n_);
  Vector e = Vector::Zero(n_);
  for (Index j = 0; j < n_; ++j) {
    e[j] = 1.0;
    m.col(j) = forward(e);
    e[j] = 0.0;
  }
  return m;
}

}  // namespace mramp
