#include "mramp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "mramp/error.hpp"
#include "mramp/rng.hpp"
#include "mramp/theory.hpp"

namespace mramp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Sub-stream tags under a trial seed.
enum : std::uint64_t { kEnsembleTag = 1, kSignalTag = 2, kNoiseTag = 3, kProbeTag = 4 };

std::ofstream open_csv(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path.string());
  f.precision(17);
  return f;
}

Index count_m(double delta, Index n) { return static_cast<Index>(std::llround(delta * static_cast<double>(n))); }

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}


}  // namespace

std::vector<double> default_ptc_axis() {
  std::vector<double> v(30);
  for (int i = 0; i < 30; ++i) v[i] = 0.05 + 0.9 * i / 29.0;
  return v;
}

std::string to_string(PtcFamily f) { return f == PtcFamily::ss ? "ss" : "pc"; }

Index PtcConfig::resolved_n() const {
  if (n > 0) return n;
  return family == PtcFamily::ss ? 2000 : 628;
}

double PtcConfig::resolved_threshold() const {
  if (success_threshold > 0.0) return success_threshold;
  return family == PtcFamily::ss ? 1e-6 : 1e-4;
}

std::uint64_t cell_seed(std::uint64_t master, Index d, int delta_index, int rho_index, int trial) {
  return derive_key(master, {static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(delta_index),
                             static_cast<std::uint64_t>(rho_index), static_cast<std::uint64_t>(trial)});
}

double PtcGrid::crossing(int di) const {
  double prev_rho = kNaN, prev_rate = kNaN;
  for (std::size_t ri = 0; ri < rhos.size(); ++ri) {
    const PtcCell& c = cell(di, static_cast<int>(ri));
    if (c.skipped) continue;
    const double rate = c.rate();
    if (!std::isnan(prev_rate) && prev_rate >= 0.5 && rate < 0.5) {
      return prev_rho + (prev_rate - 0.5) / (prev_rate - rate) * (c.rho - prev_rho);
    }
    prev_rho = c.rho;
    prev_rate = rate;
  }
  return kNaN;
}

double PtcGrid::theory(int di) const {
  if (config.family != PtcFamily::ss) return kNaN;
  return ptc_rho(deltas[di], static_cast<double>(config.d));
}

namespace {

// One noiseless trial; returns true on success.
bool ptc_trial(const PtcConfig& cfg, Index n, Index m, double delta, double rho, std::uint64_t seed) {
  const Index d = cfg.d;
  const Index nd = n / d;
  const double eps1 = rho * delta;
  const double epsd = std::min(1.0, static_cast<double>(d) * eps1);
  auto e = std::make_shared<const SensingEnsemble>(m, n, derive_key(seed, {kEnsembleTag}), true);

  Vector x, v;
  std::optional<ResamplingPair> pair;
  DenoiserConfig dc;
  if (cfg.family == PtcFamily::ss) {
    pair = ResamplingPair::transform_trunc(n, d, TransformKind::identity);
    x = gen_lowpass_sparse(n, d, epsd, derive_key(seed, {kSignalTag})).samples;
    v = x.head(nd);  // Lambda^{-1} D x for the identity truncation pair
    dc.kind = DenoiserKind::soft_threshold;
    dc.tuning = Tuning::minimax;
    dc.eps = epsd;
  } else {
    pair = ResamplingPair::decimate_repeat(n, d);
    const Vector xd = gen_piecewise_constant(nd, epsd, derive_key(seed, {kSignalTag})).samples;
    x = pair->up(xd);
    v = xd / pair->lambda_1d();
    dc.kind = DenoiserKind::tv1d;
    dc.tuning = Tuning::adaptive;
  }
  const Vector y = sample(*e, x, NoiseModel{0.0}, 0);
  const OperatorPtr a = effective_lr_operator(e, *pair);
  const auto eta = make_denoiser(dc);
  AmpOptions opt;
  opt.max_iter = cfg.max_iter;
  opt.tol = cfg.tol;
  opt.min_sigma_ratio = 1e-7;
  opt.seed = derive_key(seed, {kProbeTag});
  AmpResult res;
  try {
    res = amp_run(*a, y, *eta, opt);
  } catch (const DivergenceError&) {
    return false;
  }
  if (v.squaredNorm() == 0.0) return res.x.squaredNorm() <= cfg.resolved_threshold();
  return nmse(v, res.x) <= cfg.resolved_threshold();
}

}  // namespace

PtcGrid ptc_sweep(const PtcConfig& cfg) {
  if (cfg.d < 1) throw ParameterError("d must be >= 1");
  if (cfg.trials < 1) throw ParameterError("trials must be >= 1");
  PtcGrid g;
  g.config = cfg;
  g.deltas = cfg.deltas.empty() ? default_ptc_axis() : cfg.deltas;
  g.rhos = cfg.rhos.empty() ? default_ptc_axis() : cfg.rhos;
  const Index n = cfg.resolved_n();
  if (n % cfg.d != 0) throw ParameterError("d must divide n");
  const Index nd = n / cfg.d;

  g.cells.resize(g.deltas.size() * g.rhos.size());
  for (std::size_t di = 0; di < g.deltas.size(); ++di) {
    int zero_run = 0;
    for (std::size_t ri = 0; ri < g.rhos.size(); ++ri) {
      PtcCell& c = g.cells[di * g.rhos.size() + ri];
      c.delta_index = static_cast<int>(di);
      c.rho_index = static_cast<int>(ri);
      c.delta = g.deltas[di];
      c.rho = g.rhos[ri];
      c.m = count_m(c.delta, n);
      if (c.m >= nd || c.m < 1) {
        c.skipped = true;
        continue;
      }
      c.trials = cfg.trials;
      if (cfg.early_stop && zero_run >= 2) {
        c.inferred = true;
        continue;
      }
      std::vector<char> ok(cfg.trials, 0);
#pragma omp parallel for schedule(dynamic)
      for (int t = 0; t < cfg.trials; ++t) {
        ok[t] = ptc_trial(cfg, n, c.m, c.delta, c.rho, cell_seed(cfg.seed, cfg.d, c.delta_index, c.rho_index, t));
      }
      c.successes = static_cast<int>(std::count(ok.begin(), ok.end(), 1));
      zero_run = c.successes == 0 ? zero_run + 1 : 0;
    }
  }
  return g;
}

void write_ptc_csv(const std::filesystem::path& path, const PtcGrid& g) {
  auto f = open_csv(path);
  f << "family,n,d,delta,rho,m,trials,successes,success_rate,status,success_threshold,master_seed,delta_index,"
       "rho_index\n";
  for (const PtcCell& c : g.cells) {
    const char* status = c.skipped ? "skipped" : (c.inferred ? "inferred" : "run");
    f << to_string(g.config.family) << ',' << g.config.resolved_n() << ',' << g.config.d << ',' << c.delta << ','
      << c.rho << ',' << c.m << ',' << c.trials << ',' << c.successes << ',' << c.rate() << ',' << status << ','
      << g.config.resolved_threshold() << ',' << g.config.seed << ',' << c.delta_index << ',' << c.rho_index << '\n';
  }
}

void write_ptc_contour_csv(const std::filesystem::path& path, const PtcGrid& g) {
  auto f = open_csv(path);
  f << "family,d,delta,rho_empirical_50,rho_theory,master_seed,delta_index\n";
  for (std::size_t di = 0; di < g.deltas.size(); ++di) {
    f << to_string(g.config.family) << ',' << g.config.d << ',' << g.deltas[di] << ','
      << g.crossing(static_cast<int>(di)) << ',' << g.theory(static_cast<int>(di)) << ',' << g.config.seed << ','
      << di << '\n';
  }
}

std::vector<NoiseSensitivityRow> noise_sensitivity(const NoiseSensitivityConfig& cfg) {
  if (cfg.d != 2) throw ParameterError("the three-point experiment uses d = 2");
  const double eps1 = cfg.rho1 * cfg.delta1;
  const Index m = count_m(cfg.delta1, cfg.n1);
  const Index nd = cfg.n1 / cfg.d;
  const ResamplingPair pair = ResamplingPair::transform_trunc(cfg.n1, cfg.d, TransformKind::identity);
  const double sigma_w = std::sqrt(cfg.sigma_w_sq);

  DenoiserConfig hr_dc;
  hr_dc.eps = eps1;
  DenoiserConfig lr_dc;
  lr_dc.eps = std::min(1.0, static_cast<double>(cfg.d) * eps1);
  const auto hr_eta = make_denoiser(hr_dc);
  const auto lr_eta = make_denoiser(lr_dc);

  std::vector<NoiseSensitivityRow> rows;
  for (std::size_t gi = 0; gi < cfg.gammas.size(); ++gi) {
    const ThreePointSpec spec = make_three_point_spec(cfg.gammas[gi], eps1, cfg.delta1, cfg.sigma_w_sq);
    std::vector<double> hr(cfg.trials), lr(cfg.trials), approx(cfg.trials);
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < cfg.trials; ++t) {
      const std::uint64_t seed = derive_key(cfg.seed, {static_cast<std::uint64_t>(gi), static_cast<std::uint64_t>(t)});
      const Vector x = gen_three_point_mixture(spec, cfg.n1, cfg.d, derive_key(seed, {kSignalTag})).samples;
      auto e = std::make_shared<const SensingEnsemble>(m, cfg.n1, derive_key(seed, {kEnsembleTag}), true);
      const Vector y = sample(*e, x, NoiseModel{sigma_w}, derive_key(seed, {kNoiseTag}));
      AmpOptions opt;
      opt.max_iter = cfg.max_iter;
      opt.tol = 1e-7;
      opt.seed = derive_key(seed, {kProbeTag});
      double hr_mse;
      try {
        hr_mse = (amp_run(*hr_operator(e), y, *hr_eta, opt).x - x).squaredNorm() / static_cast<double>(cfg.n1);
      } catch (const DivergenceError&) {
        hr_mse = std::numeric_limits<double>::infinity();
      }
      const Vector v = x.head(nd);
      const AmpResult lres = amp_run(*effective_lr_operator(e, pair), y, *lr_eta, opt);
      hr[t] = hr_mse;
      lr[t] = (lres.x - v).squaredNorm() / static_cast<double>(nd);
      approx[t] = approximation_energy(pair, x);
    }
    NoiseSensitivityRow row;
    row.gamma = cfg.gammas[gi];
    row.mu = spec.mu;
    row.hr_reference = cfg.delta1 * row.gamma / (1.0 - row.gamma) * cfg.sigma_w_sq;
    row.hr_mse = std::accumulate(hr.begin(), hr.end(), 0.0) / cfg.trials;
    row.lr_mse = std::accumulate(lr.begin(), lr.end(), 0.0) / cfg.trials;
    row.hr_mse_median = median(hr);
    row.lr_mse_median = median(lr);
    row.approx_energy = std::accumulate(approx.begin(), approx.end(), 0.0) / cfg.trials;
    row.lr_bound = ns_bound_lr(eps1, static_cast<double>(cfg.d), cfg.delta1, cfg.sigma_w_sq, row.approx_energy,
                               static_cast<double>(m));
    row.trials = cfg.trials;
    rows.push_back(row);
  }
  return rows;
}

void write_noise_sensitivity_csv(const std::filesystem::path& path, const NoiseSensitivityConfig& cfg,
                                 const std::vector<NoiseSensitivityRow>& rows) {
  auto f = open_csv(path);
  f << "gamma,mu,hr_reference_bound,hr_mse,lr_bound,lr_mse,hr_mse_median,lr_mse_median,approx_energy,trials,n1,delta1,rho1,sigma_w_sq,d,"
       "master_seed,gamma_index\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    f << r.gamma << ',' << r.mu << ',' << r.hr_reference << ',' << r.hr_mse << ',' << r.lr_bound << ',' << r.lr_mse
      << ',' << r.hr_mse_median << ',' << r.lr_mse_median << ',' << r.approx_energy << ',' << r.trials << ',' << cfg.n1 << ',' << cfg.delta1 << ',' << cfg.rho1 << ','
      << cfg.sigma_w_sq << ',' << cfg.d << ',' << cfg.seed << ',' << i << '\n';
  }
}

std::string to_string(ImageMethod m) {
  switch (m) {
    case ImageMethod::st_dct: return "st-dct";
    case ImageMethod::st_wavelet: return "st-wavelet";
    case ImageMethod::tv2d_repeat: return "tv2d-repeat";
    case ImageMethod::tv2d_bicubic: return "tv2d-bicubic";
  }
  return "st-dct";
}

ImageMethod parse_image_method(const std::string& s) {
  for (ImageMethod m : {ImageMethod::st_dct, ImageMethod::st_wavelet, ImageMethod::tv2d_repeat, ImageMethod::tv2d_bicubic})
    if (to_string(m) == s) return m;
  throw ParameterError("unknown method: " + s);
}

Mode parse_mode(const std::string& s) {
  for (Mode m : {Mode::hr, Mode::lr, Mode::h2l, Mode::l2h})
    if (to_string(m) == s) return m;
  throw ParameterError("unknown mode: " + s);
}

namespace {

bool is_st(ImageMethod m) { return m == ImageMethod::st_dct || m == ImageMethod::st_wavelet; }

}  // namespace

ImageProblem make_image_problem(const Image& truth, const ImageConfig& cfg) {
  const Index side = truth.side();
  if (side % cfg.d != 0) throw ParameterError("d must divide the image side");
  const Index n = side * side;
  const Index m = count_m(cfg.delta1, n);
  const Index nd = n / (cfg.d * cfg.d);
  if (m < 1 || m >= nd) throw ParameterError("infeasible geometry: need 0 < m < n_d");
  ImageProblem p;
  p.truth = truth;
  p.config = cfg;
  p.ensemble = std::make_shared<const SensingEnsemble>(m, n, derive_key(cfg.seed, {kEnsembleTag}), true);
  p.y = sample(*p.ensemble, truth.vec(), NoiseModel{cfg.sigma_w}, derive_key(cfg.seed, {kNoiseTag}));
  return p;
}

ResamplingPair image_pair(const ImageConfig& cfg, Index side) {
  switch (cfg.method) {
    case ImageMethod::st_dct: return ResamplingPair::transform_trunc(side, cfg.d, TransformKind::dct);
    case ImageMethod::st_wavelet:
      return ResamplingPair::transform_trunc(side, cfg.d, TransformKind::wavelet, cfg.wavelet_filter,
                                             cfg.wavelet_lr_levels);
    case ImageMethod::tv2d_repeat: return ResamplingPair::decimate_repeat(side, cfg.d);
    case ImageMethod::tv2d_bicubic: return ResamplingPair::bicubic(side, cfg.d);
  }
  throw ParameterError("unknown method");
}

Image lr_reference(const Image& truth, const ImageConfig& cfg) {
  if (is_st(cfg.method)) return image_pair(cfg, truth.side()).down2d(truth);
  return ResamplingPair::bicubic(truth.side(), cfg.d).down2d(truth);
}

Method image_method(const ImageConfig& cfg, Index side) {
  const ResamplingPair pair = image_pair(cfg, side);
  Method m;
  m.two_d = true;
  if (is_st(cfg.method)) {
    const Tuning rule = cfg.st_tuning ? *cfg.st_tuning : (cfg.d == 2 ? Tuning::sure : Tuning::maxmin);
    m.hr_denoiser.kind = DenoiserKind::soft_threshold;
    m.hr_denoiser.tuning = rule;
    m.hr_denoiser.delta = cfg.delta1;
    m.lr_denoiser = m.hr_denoiser;
    m.lr_denoiser.delta = std::min(0.99, cfg.delta1 * static_cast<double>(cfg.d * cfg.d));
    m.hr_basis = pair.hr_transform();
    m.lr_coefficient_domain = true;
  } else {
    m.hr_denoiser.kind = DenoiserKind::tv2d;
    m.hr_denoiser.tuning = Tuning::adaptive;
    m.lr_denoiser = m.hr_denoiser;
    m.h2l_pair = ResamplingPair::bicubic(side, cfg.d);
  }
  return m;
}

ImageRun run_image_mode(const ImageProblem& problem, Mode mode) {
  const ImageConfig& cfg = problem.config;
  const Index side = problem.truth.side();
  const ResamplingPair pair = image_pair(cfg, side);
  const Method method = image_method(cfg, side);
  AmpOptions opt;
  opt.max_iter = cfg.max_iter;
  opt.seed = derive_key(cfg.seed, {kProbeTag});
  const Reconstruction rec = reconstruct_modes(problem.ensemble, problem.y, pair, method, mode, opt);
  ImageRun run;
  run.mode = mode;
  const bool low = mode == Mode::lr || mode == Mode::h2l;
  run.output = Image::from_vec(rec.signal, low ? side / cfg.d : side);
  run.reference = low ? lr_reference(problem.truth, cfg) : problem.truth;
  run.psnr = psnr(run.reference, run.output);
  run.seconds = rec.seconds;
  run.setup_seconds = rec.setup_seconds;
  run.iterations = static_cast<int>(rec.amp.history.size());
  return run;
}

std::string to_string(SeMethod m) {
  switch (m) {
    case SeMethod::st: return "st";
    case SeMethod::st_dct: return "st-dct";
    case SeMethod::tv2d_repeat: return "tv2d-repeat";
    case SeMethod::tv2d_bicubic: return "tv2d-bicubic";
  }
  return "st";
}

namespace {

struct SeTrial {
  std::vector<double> mse;
  std::vector<double> theta;
};

SeTrial se_trial_1d(const SeCompareConfig& cfg, int t) {
  const std::uint64_t seed = derive_key(cfg.seed, {static_cast<std::uint64_t>(t)});
  const Vector x = gen_bernoulli_gaussian(cfg.n, cfg.eps, derive_key(seed, {kSignalTag})).samples;
  const Index m = count_m(cfg.delta, cfg.n);
  auto e = std::make_shared<const SensingEnsemble>(m, cfg.n, derive_key(seed, {kEnsembleTag}), true);
  const Vector y = sample(*e, x, NoiseModel{cfg.sigma_w}, derive_key(seed, {kNoiseTag}));
  DenoiserConfig dc;
  dc.eps = cfg.eps;
  const auto eta = make_denoiser(dc);
  AmpOptions opt;
  opt.max_iter = cfg.iters;
  opt.tol = 0.0;
  opt.truth = &x;
  const AmpResult res = amp_run(*hr_operator(e), y, *eta, opt);
  const SeTrajectory se = se_predict(x, static_cast<double>(m) / static_cast<double>(cfg.n),
                                     cfg.sigma_w * cfg.sigma_w, *eta, {cfg.iters, cfg.mc_draws, derive_key(seed, {5})});
  SeTrial out;
  for (const AmpIterate& r : res.history) out.mse.push_back(r.mse);
  out.theta.assign(se.theta.begin() + 1, se.theta.end());
  return out;
}

SeTrial se_trial_image(const SeCompareConfig& cfg, const Image& image, int t) {
  ImageConfig ic;
  ic.method = cfg.method == SeMethod::st_dct ? ImageMethod::st_dct
              : cfg.method == SeMethod::tv2d_repeat ? ImageMethod::tv2d_repeat
                                                    : ImageMethod::tv2d_bicubic;
  ic.delta1 = cfg.delta1;
  ic.d = cfg.d;
  ic.sigma_w = cfg.sigma_w;
  ic.seed = derive_key(cfg.seed, {static_cast<std::uint64_t>(t)});
  ic.max_iter = cfg.iters;
  const ImageProblem prob = make_image_problem(image, ic);
  const Index side = image.side();
  const ResamplingPair pair = image_pair(ic, side);
  const Method method = image_method(ic, side);
  LrOperatorOptions lo;
  lo.two_d = true;
  lo.coefficient_domain = method.lr_coefficient_domain;
  const double lam = resolve_lambda(pair, lo);

  // Target in the AMP variable and the approximation energy it leaves behind.
  const Image xd = lr_reference(image, ic);
  Vector v = xd.vec() / lam;
  if (lo.coefficient_domain) v = synthesis_map(pair.lr_transform(), true).adjoint(v);
  const Vector upsampled = lr_synthesis_map(pair, lo).forward(v);
  const double approx = (image.vec() - upsampled).squaredNorm();
  const Index m = prob.ensemble->rows();

  const OperatorPtr a = effective_lr_operator(prob.ensemble, pair, lo);
  const auto eta = make_denoiser(method.lr_denoiser);
  AmpOptions opt;
  opt.max_iter = cfg.iters;
  opt.tol = 0.0;
  opt.truth = &v;
  opt.seed = derive_key(ic.seed, {kProbeTag});
  const AmpResult res = amp_run(*a, prob.y, *eta, opt);
  const double delta_d = static_cast<double>(m) / static_cast<double>(v.size());
  const double noise = cfg.sigma_w * cfg.sigma_w + approx / static_cast<double>(m);
  const SeTrajectory se = se_predict(v, delta_d, noise, *eta, {cfg.iters, cfg.mc_draws, derive_key(ic.seed, {5})});
  SeTrial out;
  for (const AmpIterate& r : res.history) out.mse.push_back(r.mse);
  out.theta.assign(se.theta.begin() + 1, se.theta.end());
  return out;
}

}  // namespace

SeCompareResult se_compare(const SeCompareConfig& cfg) {
  if (cfg.trials < 1 || cfg.iters < 1) throw ParameterError("se-compare needs trials, iters >= 1");
  std::optional<Image> image = cfg.image;
  if (cfg.method != SeMethod::st && !image)
    image = gen_piecewise_constant_image(cfg.side, cfg.rectangles, derive_key(cfg.seed, {0}));
  std::vector<SeTrial> trials(cfg.trials);
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < cfg.trials; ++t) {
    trials[t] = cfg.method == SeMethod::st ? se_trial_1d(cfg, t) : se_trial_image(cfg, *image, t);
  }
  SeCompareResult res;
  for (int it = 0; it < cfg.iters; ++it) {
    SeCompareRow row;
    row.iter = it + 1;
    int count = 0;
    double s = 0.0, s2 = 0.0, th = 0.0;
    for (const SeTrial& tr : trials) {
      if (it >= static_cast<int>(tr.mse.size())) continue;
      s += tr.mse[it];
      s2 += tr.mse[it] * tr.mse[it];
      th += tr.theta[it];
      ++count;
    }
    if (count == 0) break;
    row.mse_mean = s / count;
    row.mse_std = std::sqrt(std::max(0.0, s2 / count - row.mse_mean * row.mse_mean));
    row.theta = th / count;
    if (row.mse_mean > 0.0)
      res.max_relative_gap = std::max(res.max_relative_gap, std::abs(row.theta - row.mse_mean) / row.mse_mean);
    res.rows.push_back(row);
  }
  res.agreement = cfg.method == SeMethod::tv2d_bicubic ? "approximate" : "near-exact";
  return res;
}

void write_se_csv(const std::filesystem::path& path, const SeCompareConfig& cfg, const SeCompareResult& res) {
  auto f = open_csv(path);
  f << "iter,theta_predicted,mse_empirical_mean,mse_empirical_std,method,agreement,trials,master_seed\n";
  for (const SeCompareRow& r : res.rows) {
    f << r.iter << ',' << r.theta << ',' << r.mse_mean << ',' << r.mse_std << ',' << to_string(cfg.method) << ','
      << res.agreement << ',' << cfg.trials << ',' << cfg.seed << '\n';
  }
}

std::vector<BenchRow> bench_modes(const Image& image, const std::vector<ImageConfig>& configs,
                                  const std::vector<Mode>& modes, int repetitions) {
  std::vector<BenchRow> rows;
  for (const ImageConfig& cfg : configs) {
    const ImageProblem prob = make_image_problem(image, cfg);
    for (Mode mode : modes) {
      std::vector<double> times, solve;
      for (int r = 0; r < repetitions; ++r) {
        const ImageRun run = run_image_mode(prob, mode);
        times.push_back(run.seconds);
        solve.push_back(run.seconds - run.setup_seconds);
      }
      rows.push_back({cfg.method, mode, cfg.delta1, cfg.d, median(times), median(solve), repetitions});
    }
  }
  return rows;
}

void write_bench_csv(const std::filesystem::path& path, const std::vector<BenchRow>& rows) {
  auto f = open_csv(path);
  f << "method,mode,delta1,d,median_seconds,median_solve_seconds,repetitions\n";
  for (const BenchRow& r : rows) {
    f << to_string(r.method) << ',' << to_string(r.mode) << ',' << r.delta1 << ',' << r.d << ',' << r.median_seconds
      << ',' << r.median_solve_seconds << ',' << r.repetitions << '\n';
  }
}

}  // namespace mramp
