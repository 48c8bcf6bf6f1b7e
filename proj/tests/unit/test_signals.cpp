#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "mramp/error.hpp"
#include "mramp/signals.hpp"

using namespace mramp;

namespace {
// |count - n p| within k binomial standard deviations
bool binomial_ok(double count, double n, double p, double k = 5.0) {
  return std::abs(count - n * p) <= k * std::sqrt(n * p * (1 - p)) + 1.0;
}
}  // namespace

TEST_SUITE("signals") {
  TEST_CASE("Bernoulli-Gaussian sparsity concentrates at eps") {
    const Signal s = gen_bernoulli_gaussian(20000, 0.1, 4);
    const double nnz = static_cast<double>((s.samples.array() != 0.0).count());
    CHECK(binomial_ok(nnz, 20000, 0.1));
    CHECK(s.family == Family::simple_sparse);
  }

  TEST_CASE("piecewise-constant change points concentrate at eps") {
    const PiecewiseDraw p = gen_piecewise_constant_with_innovation(5000, 0.05, 8);
    const Vector& x = p.signal.samples;
    int changes = 0;
    for (Index i = 0; i + 1 < x.size(); ++i) changes += x[i + 1] != x[i];
    CHECK(binomial_ok(changes, 4999, 0.05));
    for (Index i = 0; i + 1 < x.size(); ++i) CHECK(x[i + 1] - x[i] == doctest::Approx(p.innovation[i]));
  }

  TEST_CASE("low-pass sparse signal lives in the first n1/d entries") {
    const Signal s = gen_lowpass_sparse(1000, 4, 0.3, 1);
    CHECK(s.samples.tail(750).isZero(0.0));
    CHECK(binomial_ok(static_cast<double>((s.samples.head(250).array() != 0.0).count()), 250, 0.3));
    CHECK_THROWS_AS(gen_lowpass_sparse(1001, 4, 0.3, 1), ParameterError);
  }

  TEST_CASE("three-point mixture support and levels") {
    const ThreePointSpec spec = make_three_point_spec(0.95, 0.06, 0.2, 1.0);
    CHECK(spec.mu > 0.0);
    CHECK(spec.mu == doctest::Approx(default_mu_mapping(0.95, 0.9 * 0.06, 0.2, 1.0)));
    const Signal s = gen_three_point_mixture(spec, 4000, 2, 3);
    int head = 0;
    for (Index i = 0; i < 2000; ++i) {
      if (s.samples[i] != 0.0) {
        CHECK(std::abs(s.samples[i]) == doctest::Approx(spec.mu));
        ++head;
      }
    }
    CHECK(binomial_ok(head, 2000, 1.8 * 0.06));
    CHECK(binomial_ok(static_cast<double>((s.samples.tail(2000).array() != 0.0).count()), 2000, 0.2 * 0.06));
    CHECK(make_three_point_spec(0.998, 0.06, 0.2, 1.0).mu > spec.mu);
  }

  TEST_CASE("metrics") {
    Vector t(4), e(4);
    t << 1, 2, 3, 4;
    e << 1, 2, 3, 5;
    CHECK(nmse(t, e) == doctest::Approx(1.0 / 30.0));
    CHECK(nsnr(Signal(t), Signal(e)) == doctest::Approx(30.0));
    CHECK(nsnr(Signal(t), Signal(t)) == kInfinity);
    CHECK_THROWS_AS(nmse(Vector::Zero(3), Vector::Ones(3)), UndefinedMetricError);
    const Image a(Matrix::Constant(4, 4, 100.0));
    Matrix bm = a.pixels;
    bm(0, 0) = 116.0;  // MSE 16
    CHECK(psnr(a, Image(bm)) == doctest::Approx(10.0 * std::log10(255.0 * 255.0 / 16.0)));
    CHECK(psnr(a, a) == kInfinity);
  }

  TEST_CASE("geometry validation") {
    CHECK_NOTHROW((ProblemGeometry{100, 20, 2}.validate()));
    CHECK_THROWS_AS((ProblemGeometry{100, 60, 2}.validate()), ParameterError);
    CHECK_THROWS_AS((ProblemGeometry{101, 20, 2}.validate()), ParameterError);
    CHECK(ProblemGeometry{100, 20, 2}.delta_d() == doctest::Approx(0.4));
  }

  TEST_CASE("signal and PGM round trips") {
    const auto dir = std::filesystem::temp_directory_path() / "mramp_unit_io";
    std::filesystem::create_directories(dir);
    const Signal s = gen_bernoulli_gaussian(57, 0.5, 2);
    write_signal(dir / "s.txt", s);
    CHECK(read_signal(dir / "s.txt").samples == s.samples);

    Matrix px(5, 5);
    for (Index i = 0; i < 25; ++i) px.data()[i] = static_cast<double>(i * 10);
    write_pgm(dir / "a.pgm", Image(px));
    const Image back = read_pgm(dir / "a.pgm");
    CHECK(back.pixels == px);
    // values are clamped on write
    write_pgm(dir / "b.pgm", Image(Matrix::Constant(2, 2, 300.0)));
    CHECK(read_pgm(dir / "b.pgm").pixels(0, 0) == 255.0);
    CHECK_THROWS_AS(read_pgm(dir / "missing.pgm"), IoError);
  }

  TEST_CASE("vec is column-major") {
    Matrix m(2, 2);
    m << 1, 2, 3, 4;
    Vector v = Image(m).vec();
    CHECK(v[1] == 3.0);
    CHECK(Image::from_vec(v, 2).pixels == m);
  }
}
