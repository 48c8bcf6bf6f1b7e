// mramp: experiment harness.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "mramp/error.hpp"
#include "mramp/experiments.hpp"
#include "mramp/kernels.hpp"
#include "mramp/rng.hpp"
#include "mramp/theory.hpp"

namespace fs = std::filesystem;
using namespace mramp;

namespace {

struct Common {
  std::uint64_t seed = 1;
  int trials = 20;
  std::string out = "out";
  int threads = 0;
};

void add_common(CLI::App* cmd, Common& c, bool with_trials = true) {
  cmd->add_option("--seed", c.seed, "master seed")->capture_default_str();
  if (with_trials) cmd->add_option("--trials", c.trials, "Monte-Carlo trials")->capture_default_str();
  cmd->add_option("--out", c.out, "output directory")->capture_default_str();
  cmd->add_option("--threads", c.threads, "OpenMP threads (0: runtime default)")->capture_default_str();
}

// Every option of the subcommand as given or defaulted.
void write_run_config(const CLI::App* cmd, const fs::path& dir) {
  nlohmann::json j;
  j["command"] = cmd->get_name();
  nlohmann::json opts = nlohmann::json::object();
  for (const CLI::Option* o : cmd->get_options()) {
    if (o->get_name() == "--help") continue;
    std::string key = o->get_name();
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    std::vector<std::string> vals = o->count() ? o->results() : std::vector<std::string>{};
    if (vals.empty()) {
      const std::string d = o->get_default_str();
      if (!d.empty()) vals.push_back(d);
    }
    if (vals.size() == 1) opts[key] = vals[0];
    else opts[key] = vals;
  }
  j["options"] = opts;
  fs::create_directories(dir);
  std::ofstream(dir / "run_config.json") << j.dump(2) << '\n';
}

void apply_threads(const Common& c) { kernels::set_threads(c.threads); }

const std::map<std::string, Tuning> kTunings{{"minimax", Tuning::minimax}, {"sure", Tuning::sure},
                                             {"maxmin", Tuning::maxmin}};
const std::map<std::string, WaveletFilter> kFilters{{"haar", WaveletFilter::haar}, {"d8", WaveletFilter::d8}};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

// ---------------------------------------------------------------- ptc-sweep
struct PtcArgs {
  Common c;
  std::string family = "ss";
  PtcConfig cfg;
  bool no_early_stop = false;
};

void setup_ptc(CLI::App& app, PtcArgs& a) {
  auto* cmd = app.add_subcommand("ptc-sweep", "empirical phase transition over a (delta, rho) grid");
  add_common(cmd, a.c);
  cmd->add_option("--family", a.family, "ss (simple-sparse, soft threshold) or pc (piecewise-constant, tv-1d)")
      ->check(CLI::IsMember({"ss", "pc"}))
      ->capture_default_str();
  cmd->add_option("--n", a.cfg.n, "signal length (0: 2000 ss, 628 pc)")->capture_default_str();
  cmd->add_option("--d", a.cfg.d, "downsampling factor")->capture_default_str();
  cmd->add_option("--deltas", a.cfg.deltas, "delta axis (default: 30 points in [0.05, 0.95])");
  cmd->add_option("--rhos", a.cfg.rhos, "rho axis (default: 30 points in [0.05, 0.95])");
  cmd->add_option("--threshold", a.cfg.success_threshold, "NMSE success cutoff (0: family default)")
      ->capture_default_str();
  cmd->add_option("--max-iter", a.cfg.max_iter, "AMP iterations per trial")->capture_default_str();
  cmd->add_option("--tol", a.cfg.tol, "relative sigma change that ends a trial")->capture_default_str();
  cmd->add_flag("--no-early-stop", a.no_early_stop, "run every cell even after two empty cells along rho");
  cmd->callback([cmd, &a] {
    apply_threads(a.c);
    a.cfg.family = a.family == "ss" ? PtcFamily::ss : PtcFamily::pc;
    a.cfg.trials = a.c.trials;
    a.cfg.seed = a.c.seed;
    a.cfg.early_stop = !a.no_early_stop;
    const fs::path dir(a.c.out);
    write_run_config(cmd, dir);
    const PtcGrid g = ptc_sweep(a.cfg);
    const std::string tag = a.family + "_d" + std::to_string(a.cfg.d);
    write_ptc_csv(dir / ("ptc_" + tag + ".csv"), g);
    write_ptc_contour_csv(dir / ("ptc_contour_" + tag + ".csv"), g);
    for (std::size_t di = 0; di < g.deltas.size(); ++di) {
      std::cout << "delta " << g.deltas[di] << "  rho50 " << g.crossing(static_cast<int>(di)) << "  theory "
                << g.theory(static_cast<int>(di)) << '\n';
    }
  });
}

// -------------------------------------------------------- noise-sensitivity
struct NsArgs {
  Common c;
  NoiseSensitivityConfig cfg;
};

void setup_ns(CLI::App& app, NsArgs& a) {
  auto* cmd = app.add_subcommand("noise-sensitivity", "HR vs LR noise sensitivity on the three-point prior");
  add_common(cmd, a.c);
  cmd->add_option("--n1", a.cfg.n1, "HR length")->capture_default_str();
  cmd->add_option("--delta1", a.cfg.delta1)->capture_default_str();
  cmd->add_option("--rho1", a.cfg.rho1)->capture_default_str();
  cmd->add_option("--sigma-w-sq", a.cfg.sigma_w_sq, "measurement noise variance")->capture_default_str();
  cmd->add_option("--gammas", a.cfg.gammas)->capture_default_str();
  cmd->add_option("--max-iter", a.cfg.max_iter)->capture_default_str();
  cmd->callback([cmd, &a] {
    apply_threads(a.c);
    a.cfg.trials = a.c.trials;
    a.cfg.seed = a.c.seed;
    const fs::path dir(a.c.out);
    write_run_config(cmd, dir);
    const auto rows = noise_sensitivity(a.cfg);
    write_noise_sensitivity_csv(dir / "noise_sensitivity.csv", a.cfg, rows);
    for (const auto& r : rows) {
      std::cout << "gamma " << r.gamma << "  HR " << r.hr_mse << " (ref " << r.hr_reference << ")  LR " << r.lr_mse
                << " (bound " << r.lr_bound << ")\n";
    }
  });
}

// --------------------------------------------------------------- reconstruct
struct ReconArgs {
  Common c;
  std::string image, signal;
  std::string method = "st-dct";
  std::vector<std::string> modes{"hr", "lr", "h2l", "l2h"};
  double delta1 = 0.1;
  Index d = 2;
  double sigma_w = 0.0;
  int max_iter = 30;
  std::string st_tuning;
  int wavelet_levels = 3;
  std::string wavelet_filter = "d8";
};

void reconstruct_image(const ReconArgs& a, const fs::path& dir) {
  ImageConfig cfg;
  cfg.method = parse_image_method(a.method);
  cfg.delta1 = a.delta1;
  cfg.d = a.d;
  cfg.sigma_w = a.sigma_w;
  cfg.seed = a.c.seed;
  cfg.max_iter = a.max_iter;
  if (!a.st_tuning.empty()) cfg.st_tuning = kTunings.at(a.st_tuning);
  cfg.wavelet_lr_levels = a.wavelet_levels;
  cfg.wavelet_filter = kFilters.at(a.wavelet_filter);
  const ImageProblem prob = make_image_problem(read_pgm(a.image), cfg);

  std::ofstream csv(dir / "reconstruct.csv");
  csv.precision(17);
  csv << "image,method,mode,delta1,d,sigma_w,psnr,seconds,setup_seconds,iterations,master_seed\n";
  for (const std::string& ms : a.modes) {
    const ImageRun run = run_image_mode(prob, parse_mode(ms));
    write_pgm(dir / ("recon_" + ms + ".pgm"), run.output);
    csv << fs::path(a.image).filename().string() << ',' << a.method << ',' << ms << ',' << a.delta1 << ',' << a.d
        << ',' << a.sigma_w << ',' << run.psnr << ',' << run.seconds << ',' << run.setup_seconds << ','
        << run.iterations << ',' << a.c.seed << '\n';
    std::cout << ms << "  PSNR " << run.psnr << " dB  " << run.seconds << " s\n";
  }
}

// 1D: soft thresholding on the identity truncation pair, or tv-1d on
// decimate/repeat.
void reconstruct_signal(const ReconArgs& a, const fs::path& dir) {
  const Signal x = read_signal(a.signal);
  const Index n = x.resolution();
  const bool st = a.method == "st";
  if (!st && a.method != "tv1d") throw ParameterError("1D methods are st and tv1d");
  const ResamplingPair pair =
      st ? ResamplingPair::transform_trunc(n, a.d, TransformKind::identity) : ResamplingPair::decimate_repeat(n, a.d);
  const Index m = static_cast<Index>(std::llround(a.delta1 * static_cast<double>(n)));
  auto e = std::make_shared<const SensingEnsemble>(m, n, derive_key(a.c.seed, {1}), true);
  const Vector y = sample(*e, x.samples, NoiseModel{a.sigma_w}, derive_key(a.c.seed, {2}));
  Method method;
  method.hr_denoiser.kind = st ? DenoiserKind::soft_threshold : DenoiserKind::tv1d;
  method.hr_denoiser.tuning = st ? (a.st_tuning.empty() ? Tuning::sure : kTunings.at(a.st_tuning)) : Tuning::adaptive;
  method.hr_denoiser.delta = a.delta1;
  method.lr_denoiser = method.hr_denoiser;
  method.lr_denoiser.delta = std::min(0.99, a.delta1 * static_cast<double>(a.d));
  AmpOptions opt;
  opt.max_iter = a.max_iter;
  opt.seed = derive_key(a.c.seed, {3});

  std::ofstream csv(dir / "reconstruct.csv");
  csv.precision(17);
  csv << "signal,method,mode,delta1,d,sigma_w,nmse,seconds,iterations,master_seed\n";
  for (const std::string& ms : a.modes) {
    const Mode mode = parse_mode(ms);
    const Reconstruction rec = reconstruct_modes(e, y, pair, method, mode, opt);
    const bool low = mode == Mode::lr || mode == Mode::h2l;
    const Vector ref = low ? pair.down(x.samples) : x.samples;
    const double err = nmse(ref, rec.signal);
    write_signal(dir / ("recon_" + ms + ".txt"), Signal{rec.signal, x.family});
    csv << fs::path(a.signal).filename().string() << ',' << a.method << ',' << ms << ',' << a.delta1 << ',' << a.d
        << ',' << a.sigma_w << ',' << err << ',' << rec.seconds << ',' << rec.amp.history.size() << ',' << a.c.seed
        << '\n';
    std::cout << ms << "  NMSE " << err << "  " << rec.seconds << " s\n";
  }
}

void setup_recon(CLI::App& app, ReconArgs& a) {
  auto* cmd = app.add_subcommand("reconstruct", "reconstruct an image (or 1D signal) in HR/LR/H2L/L2H modes");
  add_common(cmd, a.c, false);
  auto* img = cmd->add_option("--image", a.image, "8-bit PGM input")->check(CLI::ExistingFile);
  auto* sig = cmd->add_option("--signal", a.signal, "1D signal file")->check(CLI::ExistingFile);
  img->excludes(sig);
  cmd->add_option("--method", a.method, "st-dct | st-wavelet | tv2d-repeat | tv2d-bicubic; 1D: st | tv1d")
      ->capture_default_str();
  cmd->add_option("--modes", a.modes, "subset of hr lr h2l l2h")->capture_default_str();
  cmd->add_option("--delta1", a.delta1, "m / n1")->capture_default_str();
  cmd->add_option("--d", a.d, "downsampling factor")->capture_default_str();
  cmd->add_option("--sigma-w", a.sigma_w, "measurement noise std")->capture_default_str();
  cmd->add_option("--max-iter", a.max_iter)->capture_default_str();
  cmd->add_option("--st-tuning", a.st_tuning, "minimax | sure | maxmin")->check(CLI::IsMember({"minimax", "sure", "maxmin"}));
  cmd->add_option("--wavelet-levels", a.wavelet_levels, "LR decomposition levels")->capture_default_str();
  cmd->add_option("--wavelet-filter", a.wavelet_filter)->check(CLI::IsMember({"haar", "d8"}))->capture_default_str();
  cmd->callback([cmd, &a] {
    if (a.image.empty() == a.signal.empty()) throw CLI::ValidationError("give exactly one of --image, --signal");
    apply_threads(a.c);
    const fs::path dir(a.c.out);
    write_run_config(cmd, dir);
    if (!a.image.empty()) reconstruct_image(a, dir);
    else reconstruct_signal(a, dir);
  });
}

// ---------------------------------------------------------------- se-compare
struct SeArgs {
  Common c;
  std::string method = "st";
  std::string image;
  SeCompareConfig cfg;
};

void setup_se(CLI::App& app, SeArgs& a) {
  auto* cmd = app.add_subcommand("se-compare", "state evolution vs empirical per-iteration MSE");
  add_common(cmd, a.c);
  cmd->add_option("--method", a.method, "st | st-dct | tv2d-repeat | tv2d-bicubic")
      ->check(CLI::IsMember({"st", "st-dct", "tv2d-repeat", "tv2d-bicubic"}))
      ->capture_default_str();
  cmd->add_option("--image", a.image, "PGM (image methods; default synthetic piecewise-constant)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--n", a.cfg.n, "length for st")->capture_default_str();
  cmd->add_option("--delta", a.cfg.delta, "m / n for st")->capture_default_str();
  cmd->add_option("--eps", a.cfg.eps, "Bernoulli-Gaussian sparsity for st")->capture_default_str();
  cmd->add_option("--side", a.cfg.side, "synthetic image side")->capture_default_str();
  cmd->add_option("--rectangles", a.cfg.rectangles, "synthetic image rectangles")->capture_default_str();
  cmd->add_option("--d", a.cfg.d)->capture_default_str();
  cmd->add_option("--delta1", a.cfg.delta1, "m / n1 for image methods")->capture_default_str();
  cmd->add_option("--sigma-w", a.cfg.sigma_w)->capture_default_str();
  cmd->add_option("--iters", a.cfg.iters)->capture_default_str();
  cmd->add_option("--mc-draws", a.cfg.mc_draws, "noise draws per state-evolution step")->capture_default_str();
  cmd->callback([cmd, &a] {
    apply_threads(a.c);
    static const std::map<std::string, SeMethod> methods{{"st", SeMethod::st},
                                                         {"st-dct", SeMethod::st_dct},
                                                         {"tv2d-repeat", SeMethod::tv2d_repeat},
                                                         {"tv2d-bicubic", SeMethod::tv2d_bicubic}};
    a.cfg.method = methods.at(a.method);
    a.cfg.trials = a.c.trials;
    a.cfg.seed = a.c.seed;
    if (!a.image.empty()) a.cfg.image = read_pgm(a.image);
    const fs::path dir(a.c.out);
    write_run_config(cmd, dir);
    const SeCompareResult res = se_compare(a.cfg);
    write_se_csv(dir / "se_compare.csv", a.cfg, res);
    for (const auto& r : res.rows)
      std::cout << r.iter << "  theta " << r.theta << "  mse " << r.mse_mean << " +- " << r.mse_std << '\n';
    std::cout << "agreement: " << res.agreement << "  max relative gap " << res.max_relative_gap << '\n';
  });
}

// --------------------------------------------------------------------- bench
struct BenchArgs {
  Common c;
  std::string image;
  std::vector<std::string> methods{"st-dct", "tv2d-bicubic"};
  std::vector<std::string> modes{"hr", "lr"};
  std::vector<double> deltas{0.05, 0.1};
  std::vector<Index> ds{2, 4};
  int reps = 3;
};

void setup_bench(CLI::App& app, BenchArgs& a) {
  auto* cmd = app.add_subcommand("bench", "median wall time per (method, mode, delta1, d)");
  add_common(cmd, a.c, false);
  cmd->add_option("--image", a.image, "PGM input")->required()->check(CLI::ExistingFile);
  cmd->add_option("--methods", a.methods)->capture_default_str();
  cmd->add_option("--modes", a.modes)->capture_default_str();
  cmd->add_option("--delta1", a.deltas)->capture_default_str();
  cmd->add_option("--d", a.ds)->capture_default_str();
  cmd->add_option("--reps", a.reps, "repetitions per configuration")->capture_default_str();
  cmd->callback([cmd, &a] {
    apply_threads(a.c);
    const Image img = read_pgm(a.image);
    std::vector<ImageConfig> configs;
    for (const auto& ms : a.methods)
      for (double dl : a.deltas)
        for (Index d : a.ds) {
          ImageConfig cfg;
          cfg.method = parse_image_method(ms);
          cfg.delta1 = dl;
          cfg.d = d;
          cfg.seed = a.c.seed;
          const Index n = img.side() * img.side();
          const auto m = static_cast<Index>(std::llround(dl * static_cast<double>(n)));
          if (m >= n / (d * d)) {
            std::cerr << "skip " << ms << " delta1=" << dl << " d=" << d << ": m >= n_d\n";
            continue;
          }
          configs.push_back(cfg);
        }
    std::vector<Mode> modes;
    for (const auto& s : a.modes) modes.push_back(parse_mode(s));
    const fs::path dir(a.c.out);
    write_run_config(cmd, dir);
    const auto rows = bench_modes(img, configs, modes, a.reps);
    write_bench_csv(dir / "bench.csv", rows);
    for (const auto& r : rows) {
      std::cout << to_string(r.method) << ' ' << to_string(r.mode) << " delta1=" << r.delta1 << " d=" << r.d << "  "
                << r.median_seconds << " s (solve " << r.median_solve_seconds << " s)\n";
    }
  });
}

// -------------------------------------------------------------- theory-curve
struct TheoryArgs {
  Common c;
  int points = 200;
  std::vector<double> ds{1, 2, 4};
};

void setup_theory(CLI::App& app, TheoryArgs& a) {
  auto* cmd = app.add_subcommand("theory-curve", "minimax MSE curve and predicted LR phase transitions");
  cmd->add_option("--out", a.c.out)->capture_default_str();
  cmd->add_option("--points", a.points, "interpolation nodes")->capture_default_str();
  cmd->add_option("--d", a.ds, "factors for the predicted transition table")->capture_default_str();
  cmd->callback([cmd, &a] {
    const fs::path dir(a.c.out);
    write_run_config(cmd, dir);
    const MinimaxCurve curve(a.points);
    curve.write_csv(dir / "minimax_curve.csv");
    std::ofstream f(dir / "ptc_theory.csv");
    f.precision(17);
    f << "d,delta,rho_star\n";
    for (double d : a.ds)
      for (double delta : default_ptc_axis()) f << d << ',' << delta << ',' << ptc_rho(delta, d) << '\n';
    std::cout << "wrote " << (dir / "minimax_curve.csv").string() << " and " << (dir / "ptc_theory.csv").string()
              << '\n';
  });
}

// ------------------------------------------------------------- validate-pair
struct ValidateArgs {
  Common c;
  std::string kind = "transform-dct";
  Index n1 = 64;
  Index d = 2;
  int probes = 20;
  double eps = 0.05;
};

ResamplingPair make_pair(const std::string& kind, Index n1, Index d) {
  if (kind == "transform-identity") return ResamplingPair::transform_trunc(n1, d, TransformKind::identity);
  if (kind == "transform-dct") return ResamplingPair::transform_trunc(n1, d, TransformKind::dct);
  if (kind == "transform-haar")
    return ResamplingPair::transform_trunc(n1, d, TransformKind::wavelet, WaveletFilter::haar);
  if (kind == "transform-d8") return ResamplingPair::transform_trunc(n1, d, TransformKind::wavelet, WaveletFilter::d8);
  if (kind == "decimate-repeat") return ResamplingPair::decimate_repeat(n1, d);
  return ResamplingPair::bicubic(n1, d);
}

void setup_validate(CLI::App& app, ValidateArgs& a) {
  auto* cmd = app.add_subcommand("validate-pair", "check the up/down-sampling conditions of a resampling pair");
  add_common(cmd, a.c, false);
  cmd->add_option("--kind", a.kind)
      ->check(CLI::IsMember(
          {"transform-identity", "transform-dct", "transform-haar", "transform-d8", "decimate-repeat", "bicubic"}))
      ->capture_default_str();
  cmd->add_option("--n1", a.n1)->capture_default_str();
  cmd->add_option("--d", a.d)->capture_default_str();
  cmd->add_option("--probes", a.probes, "random probe signals")->capture_default_str();
  cmd->add_option("--eps", a.eps, "LR structured ratio of the probes")->capture_default_str();
  cmd->callback([cmd, &a] {
    const ResamplingPair p = make_pair(a.kind, a.n1, a.d);
    std::vector<Signal> probes;
    for (int i = 0; i < a.probes; ++i) {
      const std::uint64_t s = derive_key(a.c.seed, {static_cast<std::uint64_t>(i)});
      if (p.kind() == PairKind::transform_trunc) {
        const Vector coef = gen_lowpass_sparse(a.n1, a.d, a.eps, s).samples;
        probes.push_back(Signal{p.hr_transform().inverse(coef), Family::simple_sparse});
      } else {
        probes.push_back(Signal{p.up(gen_piecewise_constant(p.nd(), a.eps, s).samples), Family::piecewise_constant});
      }
    }
    const ConditionReport r = validate_conditions(p, probes, a.c.seed);
    nlohmann::json j{{"pair", r.pair},
                     {"exact_cond1", r.exact_cond1},
                     {"cond1_residual_max", r.cond1_residual_max},
                     {"eps1_mean", r.eps1_mean},
                     {"epsd_mean", r.epsd_mean},
                     {"worst_bound_slack", r.worst_bound_slack},
                     {"bound_violations", r.bound_violations},
                     {"probes", r.probes},
                     {"column_norm_mean", r.column_norm_mean},
                     {"column_norm_std", r.column_norm_std},
                     {"entry_mean", r.entry_mean},
                     {"entry_variance_times_m", r.entry_variance_times_m},
                     {"master_seed", a.c.seed}};
    const fs::path dir(a.c.out);
    write_run_config(cmd, dir);
    std::ofstream(dir / "validate_pair.json") << j.dump(2) << '\n';
    std::cout << j.dump(2) << '\n';
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-resolution approximate message passing experiments"};
  app.require_subcommand(1);
  PtcArgs ptc;
  NsArgs ns;
  ReconArgs recon;
  SeArgs se;
  BenchArgs bench;
  TheoryArgs theory;
  ValidateArgs validate;
  setup_ptc(app, ptc);
  setup_ns(app, ns);
  setup_recon(app, recon);
  setup_se(app, se);
  setup_bench(app, bench);
  setup_theory(app, theory);
  setup_validate(app, validate);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
