#include "mramp/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mramp/error.hpp"
#include "mramp/kernels.hpp"
#include "mramp/rng.hpp"
#include "mramp/theory.hpp"

namespace mramp {

std::string to_string(DenoiserKind k) {
  switch (k) {
    case DenoiserKind::soft_threshold: return "soft-threshold";
    case DenoiserKind::tv1d: return "tv-1d";
    case DenoiserKind::tv2d: return "tv-2d";
  }
  return "soft-threshold";
}

std::string to_string(Tuning t) {
  switch (t) {
    case Tuning::fixed: return "fixed";
    case Tuning::minimax: return "minimax";
    case Tuning::sure: return "sure";
    case Tuning::maxmin: return "maxmin";
    case Tuning::adaptive: return "adaptive";
  }
  return "fixed";
}

Vector soft_threshold(const Vector& z, double tau, double sigma) {
  if (tau < 0.0) throw ParameterError("threshold must be non-negative");
  if (sigma < 0.0) throw ParameterError("sigma must be non-negative");
  Vector out;
  kernels::parallel::soft_threshold(z, tau * sigma, out);
  return out;
}

double st_divergence(const Vector& z, double tau, double sigma) {
  const double thr = tau * sigma;
  return static_cast<double>((z.array().abs() > thr).count());
}

double sure_risk(const Vector& z, double tau, double sigma) {
  const double thr = tau * sigma;
  const double s2 = sigma * sigma;
  const auto a2 = z.array().square();
  return -static_cast<double>(z.size()) * s2 + a2.min(thr * thr).sum() +
         2.0 * s2 * static_cast<double>((z.array().abs() > thr).count());
}

double sure_threshold(const Vector& z, double sigma, double tau_max) {
  if (z.size() == 0) throw ParameterError("SURE needs a non-empty input");
  if (!(sigma > 0.0)) throw ParameterError("SURE needs sigma > 0");
  const Index n = z.size();
  if (tau_max < 0.0) tau_max = std::max(4.0, std::sqrt(2.0 * std::log(static_cast<double>(n))));
  std::vector<double> a(n);
  for (Index i = 0; i < n; ++i) a[i] = std::abs(z[i]) / sigma;
  std::sort(a.begin(), a.end());
  // Normalized SURE/sigma^2 at tau = a[k]: -n + sum_{i<=k} a_i^2 + (n-1-k) tau^2 + 2 #{a_i > tau}.
  double best_tau = 0.0;
  double best = -static_cast<double>(n) + 2.0 * static_cast<double>(std::count_if(a.begin(), a.end(), [](double v) { return v > 0.0; }));
  double prefix = 0.0;
  for (Index k = 0; k < n; ++k) {
    prefix += a[k] * a[k];
    if (a[k] > tau_max) break;
    if (k + 1 < n && a[k + 1] == a[k]) continue;  // evaluate once per distinct value
    const double rest = static_cast<double>(n - 1 - k);
    const double val = -static_cast<double>(n) + prefix + rest * a[k] * a[k] + 2.0 * rest;
    if (val < best) {
      best = val;
      best_tau = a[k];
    }
  }
  return best_tau;
}

double tune_threshold(const Vector& z, double sigma, const DenoiserConfig& cfg) {
  switch (cfg.tuning) {
    case Tuning::fixed: return cfg.value;
    case Tuning::minimax: return minimax_mse_st(cfg.eps).tau;
    case Tuning::sure: return sure_threshold(z, sigma);
    case Tuning::maxmin: return maxmin_alpha(cfg.delta);
    case Tuning::adaptive: break;
  }
  throw ParameterError("tuning rule does not apply to soft thresholding");
}

// Condat's direct algorithm: scans left to right keeping the range of
// feasible segment values, emitting a segment whenever the taut string is
// forced to bend.
Vector tv1d(const Vector& z, double lambda) {
  if (lambda < 0.0) throw ParameterError("lambda must be non-negative");
  const Index n = z.size();
  Vector out(n);
  if (n == 0) return out;
  Index k = 0, k0 = 0, kplus = 0, kminus = 0;
  double umin = lambda, umax = -lambda;
  double vmin = z[0] - lambda, vmax = z[0] + lambda;
  const double twolambda = 2.0 * lambda;
  for (;;) {
    while (k == n - 1) {
      if (umin < 0.0) {
        do out[k0++] = vmin;
        while (k0 <= kminus);
        k = kminus = k0;
        vmin = z[k0];
        umin = lambda;
        umax = vmin + umin - vmax;
      } else if (umax > 0.0) {
        do out[k0++] = vmax;
        while (k0 <= kplus);
        k = kplus = k0;
        vmax = z[k0];
        umax = -lambda;
        umin = vmax + umax - vmin;
      } else {
        vmin += umin / static_cast<double>(k - k0 + 1);
        do out[k0++] = vmin;
        while (k0 <= k);
        return out;
      }
    }
    umin += z[k + 1] - vmin;
    if (umin < -lambda) {
      do out[k0++] = vmin;
      while (k0 <= kminus);
      k = kminus = kplus = k0;
      vmin = z[k0];
      vmax = vmin + twolambda;
      umin = lambda;
      umax = -lambda;
      continue;
    }
    umax += z[k + 1] - vmax;
    if (umax > lambda) {
      do out[k0++] = vmax;
      while (k0 <= kplus);
      k = kminus = kplus = k0;
      vmax = z[k0];
      vmin = vmax - twolambda;
      umin = lambda;
      umax = -lambda;
      continue;
    }
    ++k;
    if (umin >= lambda) {
      kminus = k;
      vmin += (umin - lambda) / static_cast<double>(kminus - k0 + 1);
      umin = lambda;
    }
    if (umax <= -lambda) {
      kplus = k;
      vmax += (umax + lambda) / static_cast<double>(kplus - k0 + 1);
      umax = -lambda;
    }
  }
}

double tv1d_divergence(const Vector& x_out) {
  if (x_out.size() == 0) return 0.0;
  double segments = 1.0;
  for (Index i = 0; i + 1 < x_out.size(); ++i) segments += x_out[i + 1] != x_out[i] ? 1.0 : 0.0;
  return segments;
}

double tv1d_sure_lambda(const Vector& z, double sigma) {
  if (!(sigma > 0.0)) return 0.0;
  const double n = static_cast<double>(z.size());
  const double s2 = sigma * sigma;
  double best_c = 0.0, best = std::numeric_limits<double>::infinity();
  constexpr int kGrid = 40;
  for (int i = 0; i < kGrid; ++i) {
    const double c = 0.02 * std::pow(1000.0, static_cast<double>(i) / (kGrid - 1));  // 0.02 .. 20
    const Vector x = tv1d(z, c * sigma);
    const double risk = (x - z).squaredNorm() - n * s2 + 2.0 * s2 * tv1d_divergence(x);
    if (risk < best) {
      best = risk;
      best_c = c;
    }
  }
  return best_c;
}

double tv_norm2d(const Matrix& x) {
  Matrix gx, gy;
  kernels::parallel::gradient(x, gx, gy);
  return (gx.array().square() + gy.array().square()).sqrt().sum();
}

double tv2d_objective(const Matrix& x, const Matrix& z, double lambda) {
  return 0.5 * (x - z).squaredNorm() + lambda * tv_norm2d(x);
}

namespace {

constexpr double kChambolleStep = 0.125;
constexpr int kGapEvery = 5;

double relative_gap(const Matrix& x, const Matrix& z, double lambda) {
  const double primal = tv2d_objective(x, z, lambda);
  const double dual = 0.5 * z.squaredNorm() - 0.5 * x.squaredNorm();
  return (primal - dual) / std::max(primal, 1e-300);
}

}  // namespace

Tv2dResult tv2d_fixed(const Matrix& z, double lambda, const Tv2dOptions& opt, const Matrix* px0, const Matrix* py0,
                      int fixed_iterations) {
  if (lambda < 0.0) throw ParameterError("lambda must be non-negative");
  Tv2dResult res;
  res.lambda = lambda;
  const Index r = z.rows(), c = z.cols();
  Matrix px = px0 ? *px0 : Matrix::Zero(r, c);
  Matrix py = py0 ? *py0 : Matrix::Zero(r, c);
  res.px0 = px;
  res.py0 = py;
  if (lambda == 0.0) {
    res.x = z;
    res.converged = true;
    return res;
  }
  const int iters = fixed_iterations > 0 ? fixed_iterations : opt.max_inner;
  const double inv_lambda = 1.0 / lambda;
  Matrix div, gx, gy;
  Matrix w(r, c);
  int it = 0;
  double gap = std::numeric_limits<double>::infinity();
  while (it < iters) {
    kernels::parallel::divergence(px, py, div);
    w = div - inv_lambda * z;
    kernels::parallel::gradient(w, gx, gy);
    const Eigen::ArrayXXd denom = 1.0 + kChambolleStep * (gx.array().square() + gy.array().square()).sqrt();
    px.array() = (px.array() + kChambolleStep * gx.array()) / denom;
    py.array() = (py.array() + kChambolleStep * gy.array()) / denom;
    ++it;
    if (fixed_iterations == 0 && (it % kGapEvery == 0 || it == iters)) {
      kernels::parallel::divergence(px, py, div);
      gap = relative_gap(z - lambda * div, z, lambda);
      if (gap <= opt.gap_tol) break;
    }
  }
  kernels::parallel::divergence(px, py, div);
  res.x = z - lambda * div;
  res.px = std::move(px);
  res.py = std::move(py);
  if (fixed_iterations > 0) gap = relative_gap(res.x, z, lambda);
  res.gap = gap;
  res.converged = gap <= opt.gap_tol;
  res.inner_iterations = it;
  res.final_iterations = it;
  return res;
}

Tv2dResult tv2d(const Matrix& z, double sigma, const Tv2dOptions& opt) {
  if (sigma < 0.0) throw ParameterError("sigma must be non-negative");
  if (sigma == 0.0) return tv2d_fixed(z, 0.0, opt);
  const double npix = static_cast<double>(z.size());
  double lambda = opt.initial_lambda_over_sigma * sigma;
  Matrix px = Matrix::Zero(z.rows(), z.cols());
  Matrix py = Matrix::Zero(z.rows(), z.cols());
  Tv2dResult res;
  int total = 0;
  for (int s = 0; s < std::max(1, opt.outer_steps); ++s) {
    res = tv2d_fixed(z, lambda, opt, &px, &py);
    total += res.inner_iterations;
    if (s + 1 >= opt.outer_steps) break;
    const double rms = std::sqrt((res.x - z).squaredNorm() / npix);
    if (!(rms > 0.0)) break;
    px = res.px;
    py = res.py;
    lambda *= sigma / rms;
  }
  res.inner_iterations = total;
  return res;
}

double mc_divergence(const VectorMap& eta, const Vector& z, const Vector& eta_z, std::uint64_t probe_seed,
                     double epsilon) {
  if (!(epsilon > 0.0)) throw ParameterError("probe step must be positive");
  CounterRng rng(probe_seed, Purpose::probe);
  Vector b(z.size());
  for (Index i = 0; i < b.size(); ++i) b[i] = rng.normal();
  const Vector moved = eta(z + epsilon * b);
  return b.dot(moved - eta_z) / epsilon;
}

double mc_divergence(const VectorMap& eta, const Vector& z, std::uint64_t probe_seed, double epsilon) {
  return mc_divergence(eta, z, eta(z), probe_seed, epsilon);
}

namespace {

class SoftThresholdDenoiser final : public Denoiser {
 public:
  explicit SoftThresholdDenoiser(const DenoiserConfig& cfg) : cfg_(cfg) {
    // Rules that do not look at the data are resolved once.
    if (cfg.tuning != Tuning::sure) fixed_tau_ = tune_threshold(Vector(), 1.0, cfg);
  }

  double tau(const Vector& z, double sigma) const {
    if (cfg_.tuning != Tuning::sure) return fixed_tau_;
    return sigma > 0.0 ? sure_threshold(z, sigma) : 0.0;
  }

  Vector apply(const Vector& z, double sigma) const override { return soft_threshold(z, tau(z, sigma), sigma); }

  DenoiseOutput denoise(const Vector& z, double sigma, std::uint64_t probe_seed) const override {
    DenoiseOutput out;
    out.parameter = tau(z, sigma);
    out.x = soft_threshold(z, out.parameter, sigma);
    if (cfg_.force_mc_divergence && sigma > 0.0) {
      const double t = out.parameter;
      out.divergence = mc_divergence([t, sigma](const Vector& v) { return soft_threshold(v, t, sigma); }, z, out.x,
                                     probe_seed, sigma / 1000.0);
    } else {
      out.divergence = st_divergence(z, out.parameter, sigma);
    }
    return out;
  }

 private:
  DenoiserConfig cfg_;
  double fixed_tau_ = 0.0;
};

class Tv1dDenoiser final : public Denoiser {
 public:
  explicit Tv1dDenoiser(const DenoiserConfig& cfg) : cfg_(cfg) {
    if (cfg.tuning != Tuning::fixed && cfg.tuning != Tuning::adaptive)
      throw ParameterError("tv-1d supports fixed or adaptive tuning");
  }

  double lambda(const Vector& z, double sigma) const {
    const double c = cfg_.tuning == Tuning::fixed ? cfg_.value : tv1d_sure_lambda(z, sigma);
    return c * sigma;
  }

  Vector apply(const Vector& z, double sigma) const override { return tv1d(z, lambda(z, sigma)); }

  DenoiseOutput denoise(const Vector& z, double sigma, std::uint64_t probe_seed) const override {
    DenoiseOutput out;
    out.parameter = lambda(z, sigma);
    out.x = tv1d(z, out.parameter);
    if (cfg_.force_mc_divergence && sigma > 0.0) {
      const double lam = out.parameter;
      out.divergence =
          mc_divergence([lam](const Vector& v) { return tv1d(v, lam); }, z, out.x, probe_seed, sigma / 1000.0);
    } else {
      out.divergence = tv1d_divergence(out.x);
    }
    return out;
  }

 private:
  DenoiserConfig cfg_;
};

class Tv2dDenoiser final : public Denoiser {
 public:
  explicit Tv2dDenoiser(const DenoiserConfig& cfg) : cfg_(cfg) {
    if (cfg.tuning != Tuning::fixed && cfg.tuning != Tuning::adaptive)
      throw ParameterError("tv-2d supports fixed or adaptive tuning");
  }

  static Index side_of(const Vector& z) {
    const auto s = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(z.size()))));
    if (s * s != z.size()) throw DimensionError("tv-2d needs a square image");
    return s;
  }

  Tv2dResult solve(const Vector& z, double sigma) const {
    const Index s = side_of(z);
    const Eigen::Map<const Matrix> img(z.data(), s, s);
    if (cfg_.tuning == Tuning::fixed) return tv2d_fixed(img, cfg_.value * sigma);
    return tv2d(img, sigma);
  }

  Vector apply(const Vector& z, double sigma) const override {
    const Tv2dResult r = solve(z, sigma);
    return Eigen::Map<const Vector>(r.x.data(), r.x.size());
  }

  DenoiseOutput denoise(const Vector& z, double sigma, std::uint64_t probe_seed) const override {
    const Tv2dResult r = solve(z, sigma);
    DenoiseOutput out;
    out.x = Eigen::Map<const Vector>(r.x.data(), r.x.size());
    out.parameter = r.lambda;
    if (sigma <= 0.0 || r.lambda == 0.0) {
      out.divergence = static_cast<double>(z.size());
      return out;
    }
    const Index s = side_of(z);
    // Replay the final solve (same lambda, start point and step count) on
    // the perturbed input, so both evaluations come from one fixed map.
    auto eta = [&r, s](const Vector& v) {
      const Tv2dResult p =
          tv2d_fixed(Eigen::Map<const Matrix>(v.data(), s, s), r.lambda, {}, &r.px0, &r.py0, r.final_iterations);
      return Vector(Eigen::Map<const Vector>(p.x.data(), p.x.size()));
    };
    out.divergence = std::clamp(mc_divergence(eta, z, out.x, probe_seed, sigma / 1000.0), 0.0,
                                static_cast<double>(z.size()));
    return out;
  }

 private:
  DenoiserConfig cfg_;
};

}  // namespace

std::unique_ptr<Denoiser> make_denoiser(const DenoiserConfig& cfg) {
  switch (cfg.kind) {
    case DenoiserKind::soft_threshold: return std::make_unique<SoftThresholdDenoiser>(cfg);
    case DenoiserKind::tv1d: return std::make_unique<Tv1dDenoiser>(cfg);
    case DenoiserKind::tv2d: return std::make_unique<Tv2dDenoiser>(cfg);
  }
  throw ParameterError("unknown denoiser");
}

}  // namespace mramp
