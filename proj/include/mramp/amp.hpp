#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "mramp/denoise.hpp"
#include "mramp/resampling.hpp"
#include "mramp/sensing.hpp"
#include "mramp/types.hpp"

namespace mramp {

struct AmpOptions {
  int max_iter = 30;
  double tol = 1e-6;           // stop when |sigma_{t+1} - sigma_t| / sigma_t < tol
  double min_sigma_ratio = 0;  // also stop once sigma_t / sigma_0 falls below this
  std::uint64_t seed = 0;      // probe streams are keyed by (seed, iteration)
  bool onsager = true;
  double divergence_guard = 1e6;  // abort when sigma grows past this multiple of sigma_0
  const Vector* truth = nullptr;  // in the AMP variable, for per-iteration MSE
};

struct AmpState {
  Vector x, r, z;
  double sigma = 0.0;
  double b = 0.0;
  int iter = 0;
};

// One row per iteration t = 1, 2, ...: sigma_{t-1} used to denoise, the
// Onsager coefficient, the denoiser parameter, and MSE of x_t when a truth
// was supplied (NaN otherwise).
struct AmpIterate {
  int iter = 0;
  double sigma = 0.0;
  double b = 0.0;
  double parameter = 0.0;
  double mse = 0.0;
};

struct AmpResult {
  Vector x;
  AmpState state;
  std::vector<AmpIterate> history;
  bool converged = false;
};

// x^0 = 0, r^0 = y; z = x + A^T r; x+ = eta(z); r+ = y - A x+ + (div/m) r.
AmpResult amp_run(const LinearOperator& a, const Vector& y, const Denoiser& eta, const AmpOptions& opt = {});

void write_trajectory_csv(const std::filesystem::path& path, const AmpResult& res);

struct SeOptions {
  int iters = 30;
  int mc_draws = 1;
  std::uint64_t seed = 0;
};

struct SeTrajectory {
  std::vector<double> theta;  // theta_0 .. theta_iters
  std::vector<double> sigma;  // sigma_0 .. sigma_{iters-1}
  bool converged = false;
  double fixed_point = 0.0;
};

// theta_0 = ||x||^2/n; sigma_t^2 = theta_t/delta + noise_sq;
// theta_{t+1} = E ||eta(x + sigma_t e) - x||^2 / n over mc_draws draws.
SeTrajectory se_predict(const Vector& x_target, double delta, double sigma_noise_sq, const Denoiser& eta,
                        const SeOptions& opt = {});

enum class Mode { hr, lr, h2l, l2h };
std::string to_string(Mode m);

// How to reconstruct: the denoisers, an optional sparsifying basis for the
// HR coefficient domain, and the resampling pair for the LR problem.
struct Method {
  DenoiserConfig hr_denoiser;
  DenoiserConfig lr_denoiser;
  std::optional<Transform> hr_basis;  // AMP runs on coefficients when set
  bool lr_coefficient_domain = false;  // LR AMP on pair.lr_transform() coefficients
  bool two_d = false;
  std::optional<double> lambda;          // overrides the pair's default Lambda
  std::optional<ResamplingPair> h2l_pair;  // downsampler for H2L (default: the pair)
  bool materialize = true;
};

struct Reconstruction {
  Vector signal;  // spatial domain; HR for hr/l2h, LR for lr/h2l (vectorized in 2D)
  AmpResult amp;
  double seconds = 0.0;        // total, including operator construction
  double setup_seconds = 0.0;  // operator construction only
};

Reconstruction reconstruct_modes(std::shared_ptr<const SensingEnsemble> e, const Vector& y, const ResamplingPair& pair,
                                 const Method& method, Mode mode, const AmpOptions& opt = {});

}  // namespace mramp
