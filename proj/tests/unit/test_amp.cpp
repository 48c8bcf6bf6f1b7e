#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "mramp/amp.hpp"
#include "mramp/error.hpp"
#include "mramp/theory.hpp"

using namespace mramp;

namespace {
struct Problem {
  std::shared_ptr<const SensingEnsemble> e;
  Vector x, y;
};

Problem bg_problem(Index n, Index m, double eps, std::uint64_t seed, double sigma_w = 0.0) {
  Problem p;
  p.x = gen_bernoulli_gaussian(n, eps, seed).samples;
  p.e = std::make_shared<const SensingEnsemble>(m, n, seed + 1000, true);
  p.y = sample(*p.e, p.x, NoiseModel{sigma_w}, seed + 2000);
  return p;
}

std::unique_ptr<Denoiser> minimax_st(double eps) {
  DenoiserConfig c;
  c.eps = eps;
  return make_denoiser(c);
}
}  // namespace

TEST_SUITE("amp") {
  TEST_CASE("noiseless recovery below the transition") {
    // (delta, eps) = (0.5, 0.1) sits below delta = M(eps) = 0.329. The error
    // contracts by about M(eps)/delta = 0.66 per iteration, so 30 iterations
    // reach roughly 1e-6..4e-6 and 50 iterations are needed for 1e-6.
    REQUIRE(minimax_mse_st(0.1).M < 0.5);
    const auto eta = minimax_st(0.1);
    int ok30 = 0, ok50 = 0;
    for (int t = 0; t < 20; ++t) {
      const Problem p = bg_problem(2000, 1000, 0.1, 10 + t);
      AmpOptions o;
      o.max_iter = 30;
      o.tol = 0;
      ok30 += nmse(p.x, amp_run(*hr_operator(p.e), p.y, *eta, o).x) <= 1e-5;
      o.max_iter = 50;
      ok50 += nmse(p.x, amp_run(*hr_operator(p.e), p.y, *eta, o).x) <= 1e-6;
    }
    CHECK(ok30 >= 18);
    CHECK(ok50 >= 18);
  }

  TEST_CASE("removing the Onsager term degrades recovery") {
    const auto eta = minimax_st(0.1);
    const Problem p = bg_problem(2000, 800, 0.1, 3);
    AmpOptions o;
    o.max_iter = 100;
    const double with = nmse(p.x, amp_run(*hr_operator(p.e), p.y, *eta, o).x);
    o.onsager = false;
    double without;
    try {
      without = nmse(p.x, amp_run(*hr_operator(p.e), p.y, *eta, o).x);
    } catch (const DivergenceError&) {
      without = std::numeric_limits<double>::infinity();
    }
    CHECK(without >= 10 * with);
  }

  TEST_CASE("history and trajectory output") {
    const Problem p = bg_problem(500, 250, 0.05, 4);
    const auto eta = minimax_st(0.05);
    AmpOptions o;
    o.max_iter = 8;
    o.tol = 0;
    o.truth = &p.x;
    const AmpResult r = amp_run(*hr_operator(p.e), p.y, *eta, o);
    REQUIRE(r.history.size() == 8);
    CHECK(r.history[0].sigma == doctest::Approx(p.y.norm() / std::sqrt(250.0)));
    CHECK(r.history[7].mse == doctest::Approx((r.x - p.x).squaredNorm() / 500));
    const auto path = std::filesystem::temp_directory_path() / "mramp_traj.csv";
    write_trajectory_csv(path, r);
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    CHECK(header == "iter,sigma_t,mse_vs_truth,b_t");
  }

  TEST_CASE("errors") {
    const Problem p = bg_problem(200, 100, 0.05, 4);
    const auto eta = minimax_st(0.05);
    CHECK_THROWS_AS(amp_run(*hr_operator(p.e), Vector::Ones(99), *eta), DimensionError);
    AmpOptions o;
    o.max_iter = 0;
    CHECK_THROWS_AS(amp_run(*hr_operator(p.e), p.y, *eta, o), ParameterError);
    Vector bad = p.y;
    bad[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(amp_run(*hr_operator(p.e), bad, *eta), DivergenceError);
  }

  TEST_CASE("state evolution: zero signal and fixed point below the transition") {
    const auto eta = minimax_st(0.1);
    const SeTrajectory zero = se_predict(Vector::Zero(1000), 0.5, 0.0, *eta, {10, 1, 1});
    for (double th : zero.theta) CHECK(th == 0.0);

    const Vector x = gen_bernoulli_gaussian(4000, 0.1, 5).samples;
    const SeTrajectory se = se_predict(x, 0.5, 0.0, *eta, {50, 1, 2});
    CHECK(se.theta.size() == 51);
    CHECK(se.theta.back() < 1e-8);
    CHECK(se.theta[0] == doctest::Approx(x.squaredNorm() / 4000));
  }

  TEST_CASE("state evolution tracks empirical MSE") {
    // At n = 2000 the empirical error decays slightly slower than predicted;
    // the relative gap grows to about 25% by iteration 20.
    const auto eta = minimax_st(0.08);
    const int trials = 20, iters = 20;
    std::vector<double> emp(iters, 0.0), th(iters, 0.0);
    for (int t = 0; t < trials; ++t) {
      const Problem p = bg_problem(2000, 800, 0.08, 40 + t);
      AmpOptions o;
      o.max_iter = iters;
      o.tol = 0;
      o.truth = &p.x;
      const AmpResult r = amp_run(*hr_operator(p.e), p.y, *eta, o);
      const SeTrajectory se = se_predict(p.x, 0.4, 0.0, *eta, {iters, 1, 7u + t});
      for (int i = 0; i < iters; ++i) {
        emp[i] += r.history[i].mse / trials;
        th[i] += se.theta[i + 1] / trials;
      }
    }
    for (int i = 0; i < 8; ++i) CHECK(emp[i] == doctest::Approx(th[i]).epsilon(0.1));
    for (int i = 8; i < iters; ++i) CHECK(emp[i] == doctest::Approx(th[i]).epsilon(0.3));
  }

  TEST_CASE("LR-AMP recovers the low-resolution target") {
    // eps_d = 0.2 at delta_d = 0.6: below the transition for the LR problem only
    const Index n = 2000, d = 2;
    const Vector x = gen_lowpass_sparse(n, d, 0.2, 3).samples;
    auto e = std::make_shared<const SensingEnsemble>(600, n, 4, true);
    const Vector y = sample(*e, x, NoiseModel{0.0}, 5);
    const auto pair = ResamplingPair::transform_trunc(n, d, TransformKind::identity);
    Method m;
    m.hr_denoiser.eps = 0.1;
    m.lr_denoiser.eps = 0.2;
    AmpOptions o;
    o.max_iter = 200;
    const Reconstruction lr = reconstruct_modes(e, y, pair, m, Mode::lr, o);
    CHECK(nmse(pair.down(x), lr.signal) < 1e-6);
    const Reconstruction l2h = reconstruct_modes(e, y, pair, m, Mode::l2h, o);
    CHECK(nmse(x, l2h.signal) < 1e-6);
    CHECK(lr.seconds >= lr.setup_seconds);
  }

  TEST_CASE("d = 1: lr mode reproduces hr mode") {
    const Problem p = bg_problem(400, 200, 0.05, 9);
    const auto pair = ResamplingPair::transform_trunc(400, 1, TransformKind::identity);
    Method m;
    m.hr_denoiser.eps = 0.05;
    m.lr_denoiser = m.hr_denoiser;
    const Reconstruction hr = reconstruct_modes(p.e, p.y, pair, m, Mode::hr);
    const Reconstruction lr = reconstruct_modes(p.e, p.y, pair, m, Mode::lr);
    CHECK(hr.signal == lr.signal);
  }

  TEST_CASE("mode names") {
    CHECK(to_string(Mode::h2l) == "h2l");
    CHECK(to_string(Mode::l2h) == "l2h");
  }
}
