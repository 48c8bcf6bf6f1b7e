#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>

#include "mramp/resampling.hpp"
#include "mramp/signals.hpp"
#include "mramp/transforms.hpp"
#include "mramp/types.hpp"

namespace mramp {

// Matrices with at most this many columns are stored densely; wider ones are
// regenerated row by row from the seed.
inline constexpr Index kDenseColumnLimit = 16384;

enum class KernelPath { serial, parallel };

// Gaussian measurement matrix with entries N(0, 1/m), optionally scaled to
// unit-norm columns.
class SensingEnsemble {
 public:
  SensingEnsemble(Index m, Index n, std::uint64_t seed, bool column_normalized, bool force_matrix_free = false);

  Index rows() const { return m_; }
  Index cols() const { return n_; }
  std::uint64_t seed() const { return seed_; }
  bool column_normalized() const { return normalized_; }
  bool dense() const { return static_cast<bool>(dense_); }
  const RowMatrix& matrix() const;  // throws UnsupportedError when matrix-free

  void apply(const Vector& x, Vector& y, KernelPath path = KernelPath::parallel) const;
  void adjoint(const Vector& r, Vector& out, KernelPath path = KernelPath::parallel) const;

  // Cache format: eight little-endian int64 (magic, version, m, n, seed,
  // normalized, 0, 0) followed by m*n little-endian float64, row-major.
  void save(const std::filesystem::path& path) const;
  static SensingEnsemble load(const std::filesystem::path& path);

 private:
  SensingEnsemble() = default;
  void row(Index i, double* out) const;

  Index m_ = 0;
  Index n_ = 0;
  std::uint64_t seed_ = 0;
  bool normalized_ = true;
  std::shared_ptr<const RowMatrix> dense_;
  Vector inv_norms_;  // matrix-free path only
};

SensingEnsemble gen_ensemble(Index m, Index n, std::uint64_t seed, bool column_normalized = true);

struct NoiseModel {
  double sigma_w = 0.0;

  // sigma_w^2 + ||(I - U D) x||^2 / m
  double sigma_dw_sq(double approx_energy, Index m) const {
    return sigma_w * sigma_w + approx_energy / static_cast<double>(m);
  }
};

Vector sample(const SensingEnsemble& e, const Vector& x, const NoiseModel& noise, std::uint64_t seed);
Vector sample(const SensingEnsemble& e, const Signal& x, const NoiseModel& noise, std::uint64_t seed);

class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual Index rows() const = 0;
  virtual Index cols() const = 0;
  virtual void apply(const Vector& x, Vector& y) const = 0;
  virtual void adjoint(const Vector& r, Vector& out) const = 0;

  Vector apply(const Vector& x) const {
    Vector y;
    apply(x, y);
    return y;
  }
  Vector adjoint(const Vector& r) const {
    Vector out;
    adjoint(r, out);
    return out;
  }
  // Column-by-column materialization, for checks on small sizes.
  Matrix to_dense() const;
};

using OperatorPtr = std::shared_ptr<const LinearOperator>;

// A linear map S: R^in -> R^out with its adjoint.
struct LinearMap {
  Index in = 0;
  Index out = 0;
  std::function<Vector(const Vector&)> forward;
  std::function<Vector(const Vector&)> adjoint;
};

class EnsembleOperator final : public LinearOperator {
 public:
  explicit EnsembleOperator(std::shared_ptr<const SensingEnsemble> e, KernelPath path = KernelPath::parallel)
      : e_(std::move(e)), path_(path) {}
  Index rows() const override { return e_->rows(); }
  Index cols() const override { return e_->cols(); }
  void apply(const Vector& x, Vector& y) const override { e_->apply(x, y, path_); }
  void adjoint(const Vector& r, Vector& out) const override { e_->adjoint(r, out, path_); }

 private:
  std::shared_ptr<const SensingEnsemble> e_;
  KernelPath path_;
};

class DenseOperator final : public LinearOperator {
 public:
  explicit DenseOperator(RowMatrix a) : a_(std::move(a)) {}
  Index rows() const override { return a_.rows(); }
  Index cols() const override { return a_.cols(); }
  void apply(const Vector& x, Vector& y) const override;
  void adjoint(const Vector& r, Vector& out) const override;
  const RowMatrix& matrix() const { return a_; }

 private:
  RowMatrix a_;
};

// A composed with S: v -> A S v.
class ComposedOperator final : public LinearOperator {
 public:
  ComposedOperator(OperatorPtr a, LinearMap s);
  Index rows() const override { return a_->rows(); }
  Index cols() const override { return s_.in; }
  void apply(const Vector& x, Vector& y) const override;
  void adjoint(const Vector& r, Vector& out) const override;

 private:
  OperatorPtr a_;
  LinearMap s_;
};

// Synthesis maps v -> Psi^T v (1D) or vec(Psi^T V Psi) (2D, side x side).
LinearMap synthesis_map(const Transform& t, bool two_d);

struct LrOperatorOptions {
  bool two_d = false;
  // Lambda; unset means lambda_for(p) in 2D and p.lambda_1d() in 1D.
  std::optional<double> lambda;
  // Work with LR transform coefficients (Phi_d) instead of LR samples.
  bool coefficient_domain = false;
  // Form A U Lambda (Psi_d^T) explicitly with dense products. Requires a
  // dense ensemble; falls back to composition otherwise.
  bool materialize = true;
};

// The LR synthesis map v -> Lambda U (Psi_d^T v) used by the effective operator.
LinearMap lr_synthesis_map(const ResamplingPair& p, const LrOperatorOptions& opt);
double resolve_lambda(const ResamplingPair& p, const LrOperatorOptions& opt);

// HR operator A or Phi_1 = A Psi^T (when basis is given).
OperatorPtr hr_operator(std::shared_ptr<const SensingEnsemble> e, const Transform* basis = nullptr,
                        bool two_d = false);

// A_d = A U_d Lambda, optionally followed by Psi_d^T.
OperatorPtr effective_lr_operator(std::shared_ptr<const SensingEnsemble> e, const ResamplingPair& p,
                                  const LrOperatorOptions& opt = {});

}  // namespace mramp
