#include "mramp/theory.hpp"

#include <algorithm>
#include <cmath>

// Boost 1.74 pchip calls isnan unqualified.
using std::isnan;

#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>

#include "mramp/error.hpp"

namespace mramp {

namespace {

constexpr double kTauMax = 12.0;

double bisect(double lo, double hi, double target, double (*f)(double), double tol = 1e-14) {
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double minimax_value(double eps) { return minimax_mse_st(eps).M; }

}  // namespace

double gaussian_pdf(double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); }

double gaussian_tail(double t) { return 0.5 * std::erfc(t / std::numbers::sqrt2); }

double st_zero_risk(double tau) {
  return 2.0 * ((1.0 + tau * tau) * gaussian_tail(tau) - tau * gaussian_pdf(tau));
}

double st_minimax_risk(double eps, double tau) {
  return eps * (1.0 + tau * tau) + (1.0 - eps) * st_zero_risk(tau);
}

MinimaxPoint minimax_mse_st(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw ParameterError("eps must lie in [0, 1]");
  if (eps == 0.0) return {0.0, std::numeric_limits<double>::infinity()};
  if (eps == 1.0) return {1.0, 0.0};
  auto f = [eps](double tau) { return st_minimax_risk(eps, tau); };
  const auto [tau, m] = boost::math::tools::brent_find_minima(f, 0.0, kTauMax, 52);
  return {std::clamp(m, 0.0, 1.0), tau};
}

double minimax_inverse(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw ParameterError("delta must lie in [0, 1]");
  if (delta == 0.0) return 0.0;
  if (delta == 1.0) return 1.0;
  return bisect(0.0, 1.0, delta, &minimax_value);
}

MinimaxCurve::MinimaxCurve(int points) {
  if (points < 4) throw ParameterError("minimax curve needs at least 4 points");
  eps_.resize(points);
  m_.resize(points);
  tau_.resize(points);
  for (int i = 0; i < points; ++i) {
    const double e = static_cast<double>(i) / (points - 1);
    const MinimaxPoint p = minimax_mse_st(e);
    eps_[i] = e;
    m_[i] = p.M;
    tau_[i] = p.tau;
  }
  // pchip takes ownership of its inputs, so hand it copies.
  auto spline = std::make_shared<const boost::math::interpolators::pchip<std::vector<double>>>(
      std::vector<double>(eps_), std::vector<double>(m_));
  interp_ = [spline](double e) { return (*spline)(e); };
}

double MinimaxCurve::M(double eps) const {
  if (!(eps >= 0.0 && eps <= 1.0)) throw ParameterError("eps must lie in [0, 1]");
  return std::clamp(interp_(eps), 0.0, 1.0);
}

double MinimaxCurve::tau(double eps) const {
  if (!(eps > 0.0 && eps <= 1.0)) throw ParameterError("eps must lie in (0, 1]");
  // tau* is infinite at eps = 0; interpolate linearly between finite nodes.
  const auto it = std::upper_bound(eps_.begin(), eps_.end(), eps);
  std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - eps_.begin()), eps_.size() - 1);
  if (hi < 2) return minimax_mse_st(eps).tau;
  const std::size_t lo = hi - 1;
  const double w = (eps - eps_[lo]) / (eps_[hi] - eps_[lo]);
  return (1.0 - w) * tau_[lo] + w * tau_[hi];
}

void MinimaxCurve::write_csv(const std::filesystem::path& path) const {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path.string());
  f.precision(17);
  f << "eps,M,tau_star\n";
  for (std::size_t i = 0; i < eps_.size(); ++i) f << eps_[i] << ',' << m_[i] << ',' << tau_[i] << '\n';
}

const MinimaxCurve& minimax_curve() {
  static const MinimaxCurve curve(200);
  return curve;
}

double ptc_hr(double eps) { return minimax_mse_st(eps).M; }

double ptc_lr(double eps1, double d) {
  if (d < 1.0) throw ParameterError("d must be >= 1");
  if (d * eps1 > 1.0 + 1e-15) throw ParameterError("d * eps1 exceeds 1");
  return minimax_mse_st(std::min(1.0, d * eps1)).M / d;
}

double ptc_rho(double delta1, double d) {
  const double dd = d * delta1;
  if (!(dd > 0.0) || dd >= 1.0) return std::numeric_limits<double>::quiet_NaN();
  return minimax_inverse(dd) / dd;
}

double critical_d(double eps1, double delta1, double tol) {
  if (!(eps1 > 0.0 && eps1 <= 1.0)) throw ParameterError("eps1 must lie in (0, 1]");
  const double hi0 = 1.0 / eps1;
  auto g = [&](double d) { return ptc_lr(eps1, d) - delta1; };
  if (g(1.0) < 0.0) throw ParameterError("HR-AMP already succeeds; no critical d above 1");
  if (g(hi0) > 0.0) throw ParameterError("no d reaches delta1 before the family saturates");
  double lo = 1.0, hi = hi0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double ns_bound_lr(double eps1, double d, double delta1, double sigma_w_sq, double approx_energy, double m) {
  if (m <= 0.0) throw ParameterError("m must be positive");
  const double md = ptc_lr(eps1, d) * d;
  const double dd = d * delta1;
  if (dd <= md) throw BoundDivergesError("d*delta1 <= M(d*eps1): noise sensitivity is unbounded");
  return md / (1.0 - md / dd) * (sigma_w_sq + approx_energy / m);
}

double ns_bound_pixel_worstcase(double eps1, double d, double delta1, double sigma_w_sq) {
  const double md = ptc_lr(eps1, d) * d;
  const double dd = d * delta1;
  if (dd <= md) throw BoundDivergesError("d*delta1 <= M(d*eps1): noise sensitivity is unbounded");
  return md / (1.0 - md / dd) * (sigma_w_sq + 255.0 * 255.0 * d / md);
}

double maxmin_alpha(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
  return minimax_mse_st(minimax_inverse(delta)).tau;
}

ConcavityReport concavity_check(const std::vector<double>& eps_grid, const std::vector<int>& ds, double tol) {
  ConcavityReport rep;
  std::vector<double> m(eps_grid.size());
  for (std::size_t i = 0; i < eps_grid.size(); ++i) m[i] = minimax_mse_st(eps_grid[i]).M;
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    for (std::size_t j = i; j < eps_grid.size(); ++j) {
      for (double q : {0.25, 0.5, 0.75}) {
        const double mix = q * eps_grid[i] + (1.0 - q) * eps_grid[j];
        const double excess = q * m[i] + (1.0 - q) * m[j] - minimax_mse_st(mix).M;
        ++rep.checks;
        if (excess > tol) rep.violations.push_back({"concavity", eps_grid[i], eps_grid[j], q, excess});
      }
    }
    for (int d : ds) {
      if (d * eps_grid[i] > 1.0) continue;
      const double excess = ptc_lr(eps_grid[i], d) - m[i];
      ++rep.checks;
      if (excess > tol) rep.violations.push_back({"subadditivity", eps_grid[i], static_cast<double>(d), 0.0, excess});
    }
  }
  return rep;
}

}  // namespace mramp
