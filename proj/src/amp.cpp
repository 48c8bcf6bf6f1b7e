#include "mramp/amp.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include "mramp/error.hpp"
#include "mramp/rng.hpp"

namespace mramp {

AmpResult amp_run(const LinearOperator& a, const Vector& y, const Denoiser& eta, const AmpOptions& opt) {
  if (y.size() != a.rows()) throw DimensionError("amp: measurement length does not match the operator");
  if (opt.max_iter < 1) throw ParameterError("amp: max_iter must be >= 1");
  if (opt.truth && opt.truth->size() != a.cols()) throw DimensionError("amp: truth length mismatch");
  const double m = static_cast<double>(a.rows());
  const double n = static_cast<double>(a.cols());

  AmpResult res;
  AmpState& s = res.state;
  s.x = Vector::Zero(a.cols());
  s.r = y;
  s.sigma = s.r.norm() / std::sqrt(m);
  const double sigma0 = s.sigma;
  Vector atr, ax;

  for (int t = 0; t < opt.max_iter; ++t) {
    a.adjoint(s.r, atr);
    s.z = s.x + atr;
    const DenoiseOutput out = eta.denoise(s.z, s.sigma, derive_key(opt.seed, {static_cast<std::uint64_t>(t)}));
    s.b = opt.onsager ? out.divergence / m : 0.0;
    a.apply(out.x, ax);
    Vector r_next = y - ax + s.b * s.r;
    if (!out.x.allFinite() || !r_next.allFinite()) throw DivergenceError("amp: non-finite state", t + 1);
    const double sigma_next = r_next.norm() / std::sqrt(m);

    AmpIterate row;
    row.iter = t + 1;
    row.sigma = s.sigma;
    row.b = s.b;
    row.parameter = out.parameter;
    row.mse = opt.truth ? (out.x - *opt.truth).squaredNorm() / n : std::numeric_limits<double>::quiet_NaN();
    res.history.push_back(row);

    s.x = out.x;
    s.r = std::move(r_next);
    s.iter = t + 1;
    const double prev = s.sigma;
    s.sigma = sigma_next;
    if (sigma0 > 0.0 && sigma_next > opt.divergence_guard * sigma0)
      throw DivergenceError("amp: sigma grew beyond the divergence guard", t + 1);
    if (prev == 0.0 || sigma_next == 0.0 || std::abs(sigma_next - prev) / prev < opt.tol ||
        (opt.min_sigma_ratio > 0.0 && sigma_next < opt.min_sigma_ratio * sigma0)) {
      res.converged = true;
      break;
    }
  }
  res.x = s.x;
  return res;
}

void write_trajectory_csv(const std::filesystem::path& path, const AmpResult& res) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path.string());
  f.precision(17);
  f << "iter,sigma_t,mse_vs_truth,b_t\n";
  for (const AmpIterate& r : res.history) {
    f << r.iter << ',' << r.sigma << ',';
    if (!std::isnan(r.mse)) f << r.mse;
    f << ',' << r.b << '\n';
  }
}

SeTrajectory se_predict(const Vector& x_target, double delta, double sigma_noise_sq, const Denoiser& eta,
                        const SeOptions& opt) {
  if (!(delta > 0.0)) throw ParameterError("se: delta must be positive");
  if (opt.mc_draws < 1) throw ParameterError("se: mc_draws must be >= 1");
  const Index n = x_target.size();
  SeTrajectory tr;
  double theta = x_target.squaredNorm() / static_cast<double>(n);
  tr.theta.push_back(theta);
  Vector noisy(n);
  for (int t = 0; t < opt.iters; ++t) {
    const double sigma = std::sqrt(theta / delta + sigma_noise_sq);
    tr.sigma.push_back(sigma);
    double acc = 0.0;
    for (int k = 0; k < opt.mc_draws; ++k) {
      CounterRng rng(opt.seed, Purpose::noise, {static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(k)});
      for (Index i = 0; i < n; ++i) noisy[i] = x_target[i] + sigma * rng.normal();
      acc += (eta.apply(noisy, sigma) - x_target).squaredNorm() / static_cast<double>(n);
    }
    const double next = acc / opt.mc_draws;
    const bool settled = std::abs(next - theta) <= 1e-9 * std::max(theta, 1e-300) || next < 1e-300;
    theta = next;
    tr.theta.push_back(theta);
    if (settled) tr.converged = true;
  }
  tr.fixed_point = theta;
  return tr;
}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::hr: return "hr";
    case Mode::lr: return "lr";
    case Mode::h2l: return "h2l";
    case Mode::l2h: return "l2h";
  }
  return "hr";
}

namespace {

Vector as_vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Vector hr_spatial(const Method& method, const Vector& v) {
  if (!method.hr_basis) return v;
  return synthesis_map(*method.hr_basis, method.two_d).forward(v);
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Vector run_hr(std::shared_ptr<const SensingEnsemble> e, const Vector& y, const Method& method, const AmpOptions& opt,
              AmpResult& amp, double& setup) {
  const auto t0 = std::chrono::steady_clock::now();
  const OperatorPtr a = hr_operator(e, method.hr_basis ? &*method.hr_basis : nullptr, method.two_d);
  setup += elapsed(t0);
  const auto eta = make_denoiser(method.hr_denoiser);
  amp = amp_run(*a, y, *eta, opt);
  return hr_spatial(method, amp.x);
}

Vector run_lr(std::shared_ptr<const SensingEnsemble> e, const Vector& y, const ResamplingPair& pair,
              const Method& method, const AmpOptions& opt, AmpResult& amp, double& setup) {
  const auto t0 = std::chrono::steady_clock::now();
  LrOperatorOptions lo;
  lo.two_d = method.two_d;
  lo.lambda = method.lambda;
  lo.coefficient_domain = method.lr_coefficient_domain;
  lo.materialize = method.materialize;
  const OperatorPtr a = effective_lr_operator(e, pair, lo);
  setup += elapsed(t0);
  const auto eta = make_denoiser(method.lr_denoiser);
  amp = amp_run(*a, y, *eta, opt);
  // x_d = Lambda Psi_d^T v
  const double lam = resolve_lambda(pair, lo);
  Vector v = amp.x;
  if (method.lr_coefficient_domain) v = synthesis_map(pair.lr_transform(), method.two_d).forward(v);
  return lam * v;
}

Vector downsample(const ResamplingPair& p, const Vector& x, bool two_d) {
  if (!two_d) return p.down(x);
  return as_vec(p.down2d(Eigen::Map<const Matrix>(x.data(), p.n1(), p.n1())));
}

Vector upsample(const ResamplingPair& p, const Vector& xd, bool two_d) {
  if (!two_d) return p.up(xd);
  return as_vec(p.up2d(Eigen::Map<const Matrix>(xd.data(), p.nd(), p.nd())));
}

}  // namespace

Reconstruction reconstruct_modes(std::shared_ptr<const SensingEnsemble> e, const Vector& y, const ResamplingPair& pair,
                                 const Method& method, Mode mode, const AmpOptions& opt) {
  Reconstruction rec;
  const auto t0 = std::chrono::steady_clock::now();
  switch (mode) {
    case Mode::hr: rec.signal = run_hr(e, y, method, opt, rec.amp, rec.setup_seconds); break;
    case Mode::lr: rec.signal = run_lr(e, y, pair, method, opt, rec.amp, rec.setup_seconds); break;
    case Mode::h2l: {
      const ResamplingPair& down = method.h2l_pair ? *method.h2l_pair : pair;
      rec.signal = downsample(down, run_hr(e, y, method, opt, rec.amp, rec.setup_seconds), method.two_d);
      break;
    }
    case Mode::l2h: rec.signal = upsample(pair, run_lr(e, y, pair, method, opt, rec.amp, rec.setup_seconds), method.two_d); break;
  }
  rec.seconds = elapsed(t0);
  return rec;
}

}  // namespace mramp
