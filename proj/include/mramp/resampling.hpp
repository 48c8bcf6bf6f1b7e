#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mramp/signals.hpp"
#include "mramp/transforms.hpp"
#include "mramp/types.hpp"

namespace mramp {

enum class PairKind { transform_trunc, decimate_repeat, bicubic };

std::string to_string(PairKind k);

// Down-/up-sampling operators D_d (n_d x n1) and U_d (n1 x n_d) with the
// column scaling Lambda of the effective low-resolution matrix A U_d Lambda.
// All operators are matrix-free; *_matrix() materializes them for checks.
class ResamplingPair {
 public:
  // Transform-domain truncation / zero padding. For wavelets the HR
  // transform has lr_levels + log2(d) levels and the LR transform lr_levels,
  // so the kept block is exactly the scaled low-pass subband.
  static ResamplingPair transform_trunc(Index n1, Index d, TransformKind basis,
                                        WaveletFilter filter = WaveletFilter::haar, int lr_levels = 0);
  static ResamplingPair decimate_repeat(Index n1, Index d);
  // Keys cubic convolution (a = -0.5), centre-aligned grids, edge replication.
  static ResamplingPair bicubic(Index n1, Index d);

  PairKind kind() const { return kind_; }
  Index d() const { return d_; }
  Index n1() const { return n1_; }
  Index nd() const { return n1_ / d_; }
  bool exact_cond1() const { return kind_ != PairKind::bicubic; }

  const Transform& hr_transform() const { return *hr_; }
  const Transform& lr_transform() const { return *lr_; }

  Vector down(const Vector& x) const;
  Vector up(const Vector& xd) const;
  Vector down_adjoint(const Vector& xd) const;  // D^T
  Vector up_adjoint(const Vector& x) const;     // U^T

  Signal down(const Signal& x) const;
  Signal up(const Signal& xd) const;

  // Separable 2D versions: D X D^T, U X U^T, U^T X U.
  Matrix down2d(const Matrix& x) const;
  Matrix up2d(const Matrix& xd) const;
  Matrix up2d_adjoint(const Matrix& x) const;
  Image down2d(const Image& x) const;
  Image up2d(const Image& xd) const;

  Matrix down_matrix() const;
  Matrix up_matrix() const;

  // Equal diagonal entry of Lambda for the 1D problem (1/sqrt(d) for exact
  // pairs; for bicubic, the square root of lambda_for).
  double lambda_1d() const;

  std::string name() const;

 private:
  struct Taps {
    std::array<Index, 4> idx{};
    std::array<double, 4> w{};
  };

  ResamplingPair(PairKind kind, Index n1, Index d);
  void check_hr(Index n, const char* op) const;
  void check_lr(Index n, const char* op) const;

  PairKind kind_;
  Index n1_;
  Index d_;
  std::optional<Transform> hr_;
  std::optional<Transform> lr_;
  std::vector<Taps> down_taps_;  // bicubic only
  std::vector<Taps> up_taps_;
};

// Bicubic columns of A U overlap, and AMP on them is unstable at exactly unit
// column norm; the calibrated Lambda is shrunk by this factor.
inline constexpr double kBicubicLambdaMargin = 0.9;

// Diagonal entry of Lambda for the 2D (image) problem: 1/d for the transform
// and repetition pairs; margin * calibrated column norm for bicubic.
double lambda_for(const ResamplingPair& p);

// Published bicubic constants (1/2.68 at d=2, 1/5 at d=4). They assume an
// upsampler with a different gain than ours; pass through
// LrOperatorOptions::lambda to use them anyway.
double bicubic_published_lambda(Index d);

// 1/(column norm of U_d) in 1D, or of U_d (x) U_d in 2D: the Lambda that
// exactly normalizes unit-norm columns on average.
double calibrate_lambda(const ResamplingPair& p, bool two_d);

// Keys cubic convolution kernel with a = -0.5.
double keys_kernel(double x);

// ||(I - U_d D_d) x||_2^2
double approximation_energy(const ResamplingPair& p, const Signal& x);
double approximation_energy(const ResamplingPair& p, const Vector& x);
double approximation_energy2d(const ResamplingPair& p, const Matrix& x);

struct ConditionReport {
  std::string pair;
  bool exact_cond1 = false;
  double cond1_residual_max = 0.0;  // ||D U - I||_max
  // Structured-information ratios of the probes (sparsity or change points).
  double eps1_mean = 0.0;
  double epsd_mean = 0.0;
  // max over probes of eps_d - (d * eps_1 + 1/n_d); <= 0 means the bound held
  double worst_bound_slack = 0.0;
  int bound_violations = 0;
  int probes = 0;
  // Effective LR matrix A U_d Lambda built from a reference ensemble.
  double column_norm_mean = 0.0;
  double column_norm_std = 0.0;
  double entry_mean = 0.0;
  double entry_variance_times_m = 0.0;
};

// Structured-information count of a signal in the sense of its family:
// nonzeros in `basis` for simple-sparse, change points for piecewise-constant.
Index structured_count(const Vector& x, Family family, const Transform& basis, double tol = 1e-9);

ConditionReport validate_conditions(const ResamplingPair& p, const std::vector<Signal>& probes,
                                    std::uint64_t ensemble_seed = 0x5EED);

}  // namespace mramp
