#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mramp/amp.hpp"
#include "mramp/signals.hpp"

namespace mramp {

// 30 equally spaced points on [0.05, 0.95].
std::vector<double> default_ptc_axis();

enum class PtcFamily { ss, pc };  // simple-sparse + soft threshold, piecewise-constant + tv-1d
std::string to_string(PtcFamily f);

struct PtcConfig {
  PtcFamily family = PtcFamily::ss;
  Index n = 0;  // 0: 2000 for ss, 628 for pc
  Index d = 1;
  std::vector<double> deltas;  // empty: default axis
  std::vector<double> rhos;
  int trials = 20;
  double success_threshold = 0.0;  // 0: 1e-6 for ss, 1e-4 for pc
  std::uint64_t seed = 1;
  int max_iter = 1000;
  double tol = 1e-6;  // relative sigma change that ends a trial
  // Once two consecutive cells along rho have no successes, the rest of that
  // column is recorded as zero without running (flagged `inferred`).
  bool early_stop = true;

  Index resolved_n() const;
  double resolved_threshold() const;
};

struct PtcCell {
  int delta_index = 0;
  int rho_index = 0;
  double delta = 0.0;
  double rho = 0.0;
  Index m = 0;
  bool skipped = false;   // m >= n_d
  bool inferred = false;  // filled in by the early stop
  int successes = 0;
  int trials = 0;
  double rate() const { return trials > 0 ? static_cast<double>(successes) / trials : 0.0; }
};

struct PtcGrid {
  PtcConfig config;
  std::vector<double> deltas;
  std::vector<double> rhos;
  std::vector<PtcCell> cells;  // delta-major

  const PtcCell& cell(int di, int ri) const { return cells[static_cast<std::size_t>(di) * rhos.size() + ri]; }
  // First downward 50% crossing along rho for a delta column, by linear
  // interpolation between adjacent cells; NaN when there is none.
  double crossing(int di) const;
  // Corollary-1 prediction M^{-1}(d delta)/(d delta) (ss only, NaN otherwise).
  double theory(int di) const;
};

// Seed for one trial of one cell.
std::uint64_t cell_seed(std::uint64_t master, Index d, int delta_index, int rho_index, int trial);

PtcGrid ptc_sweep(const PtcConfig& cfg);
void write_ptc_csv(const std::filesystem::path& path, const PtcGrid& grid);
void write_ptc_contour_csv(const std::filesystem::path& path, const PtcGrid& grid);

struct NoiseSensitivityConfig {
  Index n1 = 2000;
  double delta1 = 0.2;
  double rho1 = 0.3;
  double sigma_w_sq = 1.0;
  Index d = 2;
  std::vector<double> gammas{0.95, 0.98, 0.99, 0.998};
  int trials = 20;
  std::uint64_t seed = 1;
  int max_iter = 300;
};

struct NoiseSensitivityRow {
  double gamma = 0.0;
  double mu = 0.0;
  double hr_reference = 0.0;  // delta1 gamma / (1 - gamma) sigma_w^2
  double hr_mse = 0.0;
  double lr_mse = 0.0;
  double hr_mse_median = 0.0;
  double lr_mse_median = 0.0;
  double lr_bound = 0.0;  // from the mean measured approximation energy
  double approx_energy = 0.0;
  int trials = 0;
};

std::vector<NoiseSensitivityRow> noise_sensitivity(const NoiseSensitivityConfig& cfg);
void write_noise_sensitivity_csv(const std::filesystem::path& path, const NoiseSensitivityConfig& cfg,
                                 const std::vector<NoiseSensitivityRow>& rows);

enum class ImageMethod { st_dct, st_wavelet, tv2d_repeat, tv2d_bicubic };
std::string to_string(ImageMethod m);
ImageMethod parse_image_method(const std::string& s);
Mode parse_mode(const std::string& s);

struct ImageConfig {
  ImageMethod method = ImageMethod::st_dct;
  double delta1 = 0.1;
  Index d = 2;
  double sigma_w = 0.0;
  std::uint64_t seed = 1;
  int max_iter = 30;
  // Soft-threshold rule; unset picks SURE for d = 2 and max-min otherwise.
  std::optional<Tuning> st_tuning;
  int wavelet_lr_levels = 3;
  WaveletFilter wavelet_filter = WaveletFilter::d8;
};

// Measurements of one image, shared by every mode.
struct ImageProblem {
  Image truth;
  ImageConfig config;
  std::shared_ptr<const SensingEnsemble> ensemble;
  Vector y;
};

struct ImageRun {
  Mode mode = Mode::hr;
  Image output;
  Image reference;
  double psnr = 0.0;
  double seconds = 0.0;
  double setup_seconds = 0.0;
  int iterations = 0;
};

ImageProblem make_image_problem(const Image& truth, const ImageConfig& cfg);
// Pair used by the LR operator of a method.
ResamplingPair image_pair(const ImageConfig& cfg, Index side);
// Reference for LR outputs: transform truncation for ST, bicubic for TV.
Image lr_reference(const Image& truth, const ImageConfig& cfg);
Method image_method(const ImageConfig& cfg, Index side);
ImageRun run_image_mode(const ImageProblem& problem, Mode mode);

enum class SeMethod { st, st_dct, tv2d_repeat, tv2d_bicubic };
std::string to_string(SeMethod m);

struct SeCompareConfig {
  SeMethod method = SeMethod::st;
  // 1D synthetic (st)
  Index n = 2000;
  double delta = 0.4;
  double eps = 0.08;
  // images (LR mode); a synthetic piecewise-constant image when none is given
  std::optional<Image> image;
  Index side = 64;
  int rectangles = 8;
  Index d = 2;
  double delta1 = 0.15;
  double sigma_w = 0.0;
  int iters = 20;
  int trials = 20;
  int mc_draws = 1;
  std::uint64_t seed = 1;
};

struct SeCompareRow {
  int iter = 0;
  double theta = 0.0;
  double mse_mean = 0.0;
  double mse_std = 0.0;
};

struct SeCompareResult {
  std::vector<SeCompareRow> rows;  // iterations 1..iters
  std::string agreement;  // "near-exact" for exact Cond. 1 pairs and 1D, "approximate" for bicubic
  double max_relative_gap = 0.0;
};

SeCompareResult se_compare(const SeCompareConfig& cfg);
void write_se_csv(const std::filesystem::path& path, const SeCompareConfig& cfg, const SeCompareResult& res);

struct BenchRow {
  ImageMethod method;
  Mode mode;
  double delta1 = 0.0;
  Index d = 1;
  double median_seconds = 0.0;
  double median_solve_seconds = 0.0;  // excludes operator construction
  int repetitions = 0;
};

std::vector<BenchRow> bench_modes(const Image& image, const std::vector<ImageConfig>& configs,
                                  const std::vector<Mode>& modes, int repetitions);
void write_bench_csv(const std::filesystem::path& path, const std::vector<BenchRow>& rows);

}  // namespace mramp
