#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace mramp {

double gaussian_pdf(double t);
// Upper tail probability Q(t) = P(Z > t).
double gaussian_tail(double t);

// E[eta_1(Z; tau)^2] for Z ~ N(0,1): 2[(1 + tau^2) Q(tau) - tau phi(tau)].
double st_zero_risk(double tau);
// Soft-threshold risk against the least favorable eps-sparse prior
// (mass at infinity): eps (1 + tau^2) + (1 - eps) st_zero_risk(tau).
double st_minimax_risk(double eps, double tau);

struct MinimaxPoint {
  double M = 0.0;
  double tau = 0.0;  // +infinity at eps = 0
};

// inf over tau of st_minimax_risk(eps, tau).
MinimaxPoint minimax_mse_st(double eps);

// Inverse of eps -> M(eps) on [0, 1] by bisection on direct evaluations.
double minimax_inverse(double delta);

// Cached (eps, M, tau*) grid with monotone cubic (PCHIP) interpolation.
class MinimaxCurve {
 public:
  explicit MinimaxCurve(int points = 200);

  double M(double eps) const;
  double tau(double eps) const;
  const std::vector<double>& eps_grid() const { return eps_; }
  const std::vector<double>& m_grid() const { return m_; }
  const std::vector<double>& tau_grid() const { return tau_; }

  void write_csv(const std::filesystem::path& path) const;

 private:
  std::vector<double> eps_;
  std::vector<double> m_;
  std::vector<double> tau_;
  std::function<double(double)> interp_;
};

// Shared instance built on first use.
const MinimaxCurve& minimax_curve();

// delta threshold for HR-AMP: M(eps).
double ptc_hr(double eps);
// delta_1 threshold for LR-AMP: M(d eps1)/d. d may be fractional.
double ptc_lr(double eps1, double d);
// Predicted rho_1 = eps1/delta1 on the LR transition at a given delta1:
// M^{-1}(d delta1)/(d delta1). Returns NaN when d delta1 >= 1.
double ptc_rho(double delta1, double d);

// Root in d of delta1 = M(d eps1)/d on [1, 1/eps1]. Requires
// eps1 <= delta1 <= M(eps1).
double critical_d(double eps1, double delta1, double tol = 1e-10);

// M(d eps1)/(1 - M(d eps1)/(d delta1)) * (sigma_w^2 + approx_energy/m).
double ns_bound_lr(double eps1, double d, double delta1, double sigma_w_sq, double approx_energy, double m);
// Same bound with the approximation term replaced by its 8-bit worst case
// 255^2 d / M(d eps1).
double ns_bound_pixel_worstcase(double eps1, double d, double delta1, double sigma_w_sq);

// Max-min threshold for a given undersampling ratio: the minimax tau at the
// sparsity on the transition, tau*(M^{-1}(delta)).
double maxmin_alpha(double delta);

struct ConcavityViolation {
  std::string kind;  // "concavity" or "subadditivity"
  double a = 0.0, b = 0.0, q = 0.0;
  double excess = 0.0;
};

struct ConcavityReport {
  int checks = 0;
  std::vector<ConcavityViolation> violations;
  bool ok() const { return violations.empty(); }
};

ConcavityReport concavity_check(const std::vector<double>& eps_grid, const std::vector<int>& ds = {2, 3, 4},
                                double tol = 1e-6);

}  // namespace mramp
