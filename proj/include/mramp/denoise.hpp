#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "mramp/types.hpp"

namespace mramp {

enum class DenoiserKind { soft_threshold, tv1d, tv2d };
// fixed: use `value` directly (tau for soft thresholding, lambda/sigma for TV).
// adaptive: SURE over lambda for tv1d, discrepancy rule for tv2d.
enum class Tuning { fixed, minimax, sure, maxmin, adaptive };

std::string to_string(DenoiserKind k);
std::string to_string(Tuning t);

struct DenoiserConfig {
  DenoiserKind kind = DenoiserKind::soft_threshold;
  Tuning tuning = Tuning::minimax;
  double eps = 0.1;    // sparsity ratio for the minimax rule
  double delta = 0.1;  // undersampling ratio for the max-min rule
  double value = 1.0;  // fixed tau, or fixed lambda/sigma
  // Use the Monte-Carlo divergence even where an exact one exists.
  bool force_mc_divergence = false;
};

// sign(z) max(|z| - tau sigma, 0)
Vector soft_threshold(const Vector& z, double tau, double sigma);
// #{i : |z_i| > tau sigma}
double st_divergence(const Vector& z, double tau, double sigma);

// SURE(tau) = -n sigma^2 + sum min(z_i^2, tau^2 sigma^2) + 2 sigma^2 #{|z_i| > tau sigma}
double sure_risk(const Vector& z, double tau, double sigma);
// Exact minimizer of SURE over tau in [0, tau_max]: SURE is increasing
// between consecutive sorted |z_i|/sigma, so only those points are candidates.
double sure_threshold(const Vector& z, double sigma, double tau_max = -1.0);

// Threshold tau (in units of sigma) for a tuning rule.
double tune_threshold(const Vector& z, double sigma, const DenoiserConfig& cfg);

// Exact minimizer of 0.5 ||x - z||^2 + lambda sum |x_{i+1} - x_i|.
Vector tv1d(const Vector& z, double lambda);
// Number of constant segments in a tv1d output.
double tv1d_divergence(const Vector& x_out);
// lambda/sigma minimizing SURE over a fixed geometric grid.
double tv1d_sure_lambda(const Vector& z, double sigma);

struct Tv2dOptions {
  int max_inner = 100;
  double gap_tol = 1e-5;  // relative to the primal objective
  int outer_steps = 5;
  double initial_lambda_over_sigma = 1.0;
};

struct Tv2dResult {
  Matrix x;
  double lambda = 0.0;
  bool converged = false;
  double gap = 0.0;  // relative duality gap of the last solve
  int inner_iterations = 0;
  // Dual state the final solve started from, and its iteration count; a
  // perturbed solve replaying both is the same map as the returned x.
  Matrix px0, py0;
  int final_iterations = 0;
  Matrix px, py;  // final dual state
};

// Isotropic TV proximal map for a fixed lambda. Starts from the dual
// (px, py) when given and stops at the gap tolerance or max_inner; with
// fixed_iterations > 0 runs exactly that many steps.
Tv2dResult tv2d_fixed(const Matrix& z, double lambda, const Tv2dOptions& opt = {}, const Matrix* px0 = nullptr,
                      const Matrix* py0 = nullptr, int fixed_iterations = 0);
// Adaptive lambda: lambda <- lambda sigma / rms(x - z), warm-started.
Tv2dResult tv2d(const Matrix& z, double sigma, const Tv2dOptions& opt = {});

double tv2d_objective(const Matrix& x, const Matrix& z, double lambda);
double tv_norm2d(const Matrix& x);

using VectorMap = std::function<Vector(const Vector&)>;

// (1/eps) <b, eta(z + eps b) - eta(z)> with b standard normal from probe_seed.
double mc_divergence(const VectorMap& eta, const Vector& z, std::uint64_t probe_seed, double epsilon);
// Same, reusing an already computed eta(z).
double mc_divergence(const VectorMap& eta, const Vector& z, const Vector& eta_z, std::uint64_t probe_seed,
                     double epsilon);

struct DenoiseOutput {
  Vector x;
  double divergence = 0.0;
  double parameter = 0.0;  // tau or lambda actually used
};

class Denoiser {
 public:
  virtual ~Denoiser() = default;
  // probe_seed feeds the Monte-Carlo divergence where one is needed.
  virtual DenoiseOutput denoise(const Vector& z, double sigma, std::uint64_t probe_seed) const = 0;
  // Plain denoising with the tuning rule, no divergence.
  virtual Vector apply(const Vector& z, double sigma) const = 0;
};

std::unique_ptr<Denoiser> make_denoiser(const DenoiserConfig& cfg);

}  // namespace mramp
