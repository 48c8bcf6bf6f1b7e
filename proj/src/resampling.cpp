#include "mramp/resampling.hpp"

#include <algorithm>
#include <cmath>

#include "mramp/error.hpp"
#include "mramp/kernels.hpp"

namespace mramp {

namespace {

bool is_power_of_two(Index d) { return d > 0 && (d & (d - 1)) == 0; }

int log2_exact(Index d) {
  int j = 0;
  while ((Index{1} << j) < d) ++j;
  return j;
}

// Apply a length-preserving-or-not 1D map to every column, then every row.
template <typename F>
Matrix separable(const Matrix& x, Index out_n, F&& f) {
  Matrix tmp(out_n, x.cols());
  for (Index c = 0; c < x.cols(); ++c) tmp.col(c) = f(Vector(x.col(c)));
  Matrix out(out_n, out_n);
  for (Index r = 0; r < out_n; ++r) out.row(r) = f(Vector(tmp.row(r).transpose())).transpose();
  return out;
}

}  // namespace

std::string to_string(PairKind k) {
  switch (k) {
    case PairKind::transform_trunc: return "transform-trunc";
    case PairKind::decimate_repeat: return "decimate-repeat";
    case PairKind::bicubic: return "bicubic";
  }
  return "transform-trunc";
}

double keys_kernel(double x) {
  constexpr double a = -0.5;
  const double t = std::abs(x);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

ResamplingPair::ResamplingPair(PairKind kind, Index n1, Index d) : kind_(kind), n1_(n1), d_(d) {
  if (d < 1) throw ParameterError("downsampling factor must be >= 1");
  if (n1 < 1 || n1 % d != 0) throw ParameterError("d must divide n1");
}

ResamplingPair ResamplingPair::transform_trunc(Index n1, Index d, TransformKind basis, WaveletFilter filter,
                                               int lr_levels) {
  ResamplingPair p(PairKind::transform_trunc, n1, d);
  switch (basis) {
    case TransformKind::identity:
      p.hr_ = Transform::identity(n1);
      p.lr_ = Transform::identity(n1 / d);
      break;
    case TransformKind::dct:
      p.hr_ = Transform::dct(n1);
      p.lr_ = Transform::dct(n1 / d);
      break;
    case TransformKind::wavelet:
      if (!is_power_of_two(d)) throw ParameterError("wavelet truncation needs d to be a power of 2");
      p.hr_ = Transform::wavelet(n1, lr_levels + log2_exact(d), filter);
      p.lr_ = Transform::wavelet(n1 / d, lr_levels, filter);
      break;
    case TransformKind::difference:
      throw UnsupportedError("difference transform cannot define a truncation pair");
  }
  return p;
}

ResamplingPair ResamplingPair::decimate_repeat(Index n1, Index d) {
  ResamplingPair p(PairKind::decimate_repeat, n1, d);
  p.hr_ = Transform::identity(n1);
  p.lr_ = Transform::identity(n1 / d);
  return p;
}

ResamplingPair ResamplingPair::bicubic(Index n1, Index d) {
  ResamplingPair p(PairKind::bicubic, n1, d);
  p.hr_ = Transform::identity(n1);
  p.lr_ = Transform::identity(n1 / d);
  const Index nd = n1 / d;
  const double dd = static_cast<double>(d);
  auto make = [](double pos, Index limit) {
    Taps t;
    const Index base = static_cast<Index>(std::floor(pos)) - 1;
    for (int k = 0; k < 4; ++k) {
      const Index j = base + k;
      t.idx[k] = std::clamp<Index>(j, 0, limit - 1);
      t.w[k] = keys_kernel(pos - static_cast<double>(j));
    }
    return t;
  };
  p.down_taps_.reserve(nd);
  for (Index i = 0; i < nd; ++i) p.down_taps_.push_back(make((static_cast<double>(i) + 0.5) * dd - 0.5, n1));
  p.up_taps_.reserve(n1);
  for (Index j = 0; j < n1; ++j) p.up_taps_.push_back(make((static_cast<double>(j) + 0.5) / dd - 0.5, nd));
  return p;
}

void ResamplingPair::check_hr(Index n, const char* op) const {
  if (n != n1_) throw DimensionError(std::string(op) + ": expected length " + std::to_string(n1_));
}

void ResamplingPair::check_lr(Index n, const char* op) const {
  if (n != nd()) throw DimensionError(std::string(op) + ": expected length " + std::to_string(nd()));
}

Vector ResamplingPair::down(const Vector& x) const {
  check_hr(x.size(), "downsample");
  const Index nd = this->nd();
  switch (kind_) {
    case PairKind::transform_trunc: {
      const Vector s = hr_->forward(x);
      return std::sqrt(1.0 / static_cast<double>(d_)) * lr_->inverse(s.head(nd));
    }
    case PairKind::decimate_repeat: {
      Vector out(nd);
      for (Index i = 0; i < nd; ++i) out[i] = x[(i + 1) * d_ - 1];
      return out;
    }
    case PairKind::bicubic: {
      Vector out(nd);
      for (Index i = 0; i < nd; ++i) {
        const Taps& t = down_taps_[i];
        out[i] = t.w[0] * x[t.idx[0]] + t.w[1] * x[t.idx[1]] + t.w[2] * x[t.idx[2]] + t.w[3] * x[t.idx[3]];
      }
      return out;
    }
  }
  return {};
}

Vector ResamplingPair::up(const Vector& xd) const {
  check_lr(xd.size(), "upsample");
  switch (kind_) {
    case PairKind::transform_trunc: {
      Vector s = Vector::Zero(n1_);
      s.head(nd()) = lr_->forward(xd);
      return std::sqrt(static_cast<double>(d_)) * hr_->inverse(s);
    }
    case PairKind::decimate_repeat: {
      Vector out(n1_);
      for (Index j = 0; j < n1_; ++j) out[j] = xd[j / d_];
      return out;
    }
    case PairKind::bicubic: {
      Vector out(n1_);
      for (Index j = 0; j < n1_; ++j) {
        const Taps& t = up_taps_[j];
        out[j] = t.w[0] * xd[t.idx[0]] + t.w[1] * xd[t.idx[1]] + t.w[2] * xd[t.idx[2]] + t.w[3] * xd[t.idx[3]];
      }
      return out;
    }
  }
  return {};
}

Vector ResamplingPair::down_adjoint(const Vector& xd) const {
  check_lr(xd.size(), "downsample adjoint");
  switch (kind_) {
    case PairKind::transform_trunc: return up(xd) / static_cast<double>(d_);
    case PairKind::decimate_repeat: {
      Vector out = Vector::Zero(n1_);
      for (Index i = 0; i < nd(); ++i) out[(i + 1) * d_ - 1] = xd[i];
      return out;
    }
    case PairKind::bicubic: {
      Vector out = Vector::Zero(n1_);
      for (Index i = 0; i < nd(); ++i) {
        const Taps& t = down_taps_[i];
        for (int k = 0; k < 4; ++k) out[t.idx[k]] += t.w[k] * xd[i];
      }
      return out;
    }
  }
  return {};
}

Vector ResamplingPair::up_adjoint(const Vector& x) const {
  check_hr(x.size(), "upsample adjoint");
  switch (kind_) {
    case PairKind::transform_trunc: return static_cast<double>(d_) * down(x);
    case PairKind::decimate_repeat: {
      Vector out = Vector::Zero(nd());
      for (Index j = 0; j < n1_; ++j) out[j / d_] += x[j];
      return out;
    }
    case PairKind::bicubic: {
      Vector out = Vector::Zero(nd());
      for (Index j = 0; j < n1_; ++j) {
        const Taps& t = up_taps_[j];
        for (int k = 0; k < 4; ++k) out[t.idx[k]] += t.w[k] * x[j];
      }
      return out;
    }
  }
  return {};
}

Signal ResamplingPair::down(const Signal& x) const { return Signal(down(x.samples), x.family); }
Signal ResamplingPair::up(const Signal& xd) const { return Signal(up(xd.samples), xd.family); }

Matrix ResamplingPair::down2d(const Matrix& x) const {
  if (x.rows() != n1_ || x.cols() != n1_) throw DimensionError("downsample2d: expected n1 x n1 image");
  if (kind_ == PairKind::transform_trunc) {
    const Matrix s = hr_->forward2d(x);
    return lr_->inverse2d(s.topLeftCorner(nd(), nd())) / static_cast<double>(d_);
  }
  return separable(x, nd(), [this](const Vector& v) { return down(v); });
}

Matrix ResamplingPair::up2d(const Matrix& xd) const {
  if (xd.rows() != nd() || xd.cols() != nd()) throw DimensionError("upsample2d: expected n_d x n_d image");
  if (kind_ == PairKind::transform_trunc) {
    Matrix s = Matrix::Zero(n1_, n1_);
    s.topLeftCorner(nd(), nd()) = lr_->forward2d(xd);
    return hr_->inverse2d(s) * static_cast<double>(d_);
  }
  return separable(xd, n1_, [this](const Vector& v) { return up(v); });
}

Matrix ResamplingPair::up2d_adjoint(const Matrix& x) const {
  if (x.rows() != n1_ || x.cols() != n1_) throw DimensionError("upsample2d adjoint: expected n1 x n1 image");
  if (kind_ == PairKind::transform_trunc) return down2d(x) * static_cast<double>(d_ * d_);
  return separable(x, nd(), [this](const Vector& v) { return up_adjoint(v); });
}

Image ResamplingPair::down2d(const Image& x) const { return Image(down2d(x.pixels)); }
Image ResamplingPair::up2d(const Image& xd) const { return Image(up2d(xd.pixels)); }

Matrix ResamplingPair::down_matrix() const {
  Matrix m(nd(), n1_);
  Vector e = Vector::Zero(n1_);
  for (Index j = 0; j < n1_; ++j) {
    e[j] = 1.0;
    m.col(j) = down(e);
    e[j] = 0.0;
  }
  return m;
}

Matrix ResamplingPair::up_matrix() const {
  Matrix m(n1_, nd());
  Vector e = Vector::Zero(nd());
  for (Index j = 0; j < nd(); ++j) {
    e[j] = 1.0;
    m.col(j) = up(e);
    e[j] = 0.0;
  }
  return m;
}

double ResamplingPair::lambda_1d() const {
  if (kind_ == PairKind::bicubic) return std::sqrt(kBicubicLambdaMargin) * calibrate_lambda(*this, false);
  return 1.0 / std::sqrt(static_cast<double>(d_));
}

std::string ResamplingPair::name() const {
  std::string s = to_string(kind_);
  if (kind_ == PairKind::transform_trunc) {
    s += "(" + to_string(hr_->kind());
    if (hr_->kind() == TransformKind::wavelet) s += "-" + to_string(hr_->filter());
    s += ")";
  }
  return s + "/d=" + std::to_string(d_);
}

double lambda_for(const ResamplingPair& p) {
  if (p.kind() != PairKind::bicubic) return 1.0 / static_cast<double>(p.d());
  if (p.d() == 1) return 1.0;
  return kBicubicLambdaMargin * calibrate_lambda(p, true);
}

double bicubic_published_lambda(Index d) {
  if (d == 1) return 1.0;
  if (d == 2) return 1.0 / 2.68;
  if (d == 4) return 1.0 / 5.0;
  throw UnsupportedError("no published bicubic scaling constant for d = " + std::to_string(d));
}

double calibrate_lambda(const ResamplingPair& p, bool two_d) {
  const Matrix u = p.up_matrix();
  const double sq = u.colwise().squaredNorm().mean();
  // Columns of U (x) U are outer products, so squared norms multiply.
  const double col_sq = two_d ? (u.colwise().squaredNorm().transpose() * u.colwise().squaredNorm()).mean() : sq;
  return 1.0 / std::sqrt(col_sq);
}

double approximation_energy(const ResamplingPair& p, const Vector& x) {
  return (x - p.up(p.down(x))).squaredNorm();
}

double approximation_energy(const ResamplingPair& p, const Signal& x) { return approximation_energy(p, x.samples); }

double approximation_energy2d(const ResamplingPair& p, const Matrix& x) {
  return (x - p.up2d(p.down2d(x))).squaredNorm();
}

Index structured_count(const Vector& x, Family family, const Transform& basis, double tol) {
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  if (family == Family::piecewise_constant) {
    Index c = 0;
    for (Index i = 0; i + 1 < x.size(); ++i) c += std::abs(x[i + 1] - x[i]) > tol * scale ? 1 : 0;
    return c;
  }
  const Vector s = basis.forward(x);
  return static_cast<Index>((s.array().abs() > tol * scale).count());
}

ConditionReport validate_conditions(const ResamplingPair& p, const std::vector<Signal>& probes,
                                    std::uint64_t ensemble_seed) {
  ConditionReport rep;
  rep.pair = p.name();
  rep.exact_cond1 = p.exact_cond1();

  // Cond. 1 residual, column by column so no n_d x n_d product is formed twice.
  {
    Vector e = Vector::Zero(p.nd());
    double worst = 0.0;
    for (Index j = 0; j < p.nd(); ++j) {
      e[j] = 1.0;
      Vector col = p.down(p.up(e));
      col[j] -= 1.0;
      worst = std::max(worst, col.cwiseAbs().maxCoeff());
      e[j] = 0.0;
    }
    rep.cond1_residual_max = worst;
  }

  // Cond. 3 (Lemma-1 style bound) on the probes.
  rep.worst_bound_slack = -kInfinity;
  const double nd = static_cast<double>(p.nd());
  const double n1 = static_cast<double>(p.n1());
  for (const Signal& s : probes) {
    if (s.resolution() != p.n1()) throw DimensionError("probe length does not match the pair");
    const Family fam = s.family == Family::piecewise_constant ? Family::piecewise_constant : Family::simple_sparse;
    const double eps1 = static_cast<double>(structured_count(s.samples, fam, p.hr_transform())) / n1;
    const double epsd = static_cast<double>(structured_count(p.down(s.samples), fam, p.lr_transform())) / nd;
    rep.eps1_mean += eps1;
    rep.epsd_mean += epsd;
    const double slack = epsd - (static_cast<double>(p.d()) * eps1 + 1.0 / nd);
    rep.worst_bound_slack = std::max(rep.worst_bound_slack, slack);
    if (slack > 1e-12) ++rep.bound_violations;
    ++rep.probes;
  }
  if (rep.probes > 0) {
    rep.eps1_mean /= rep.probes;
    rep.epsd_mean /= rep.probes;
  } else {
    rep.worst_bound_slack = 0.0;
  }

  // Cond. 2: statistics of A U_d Lambda for a reference column-normalized ensemble.
  const Index m = std::max<Index>(1, p.nd() / 2);
  RowMatrix a(m, p.n1());
  kernels::parallel::fill_gaussian(a, ensemble_seed, 1.0 / std::sqrt(static_cast<double>(m)));
  const Vector norms = kernels::parallel::column_norms(a);
  kernels::parallel::scale_columns(a, norms.cwiseInverse());
  const Matrix ad = (a * p.up_matrix()) * p.lambda_1d();
  const Eigen::RowVectorXd cn = ad.colwise().norm();
  rep.column_norm_mean = cn.mean();
  rep.column_norm_std = std::sqrt((cn.array() - rep.column_norm_mean).square().mean());
  rep.entry_mean = ad.mean();
  rep.entry_variance_times_m = (ad.array() - rep.entry_mean).square().mean() * static_cast<double>(m);
  return rep;
}

}  // namespace mramp
