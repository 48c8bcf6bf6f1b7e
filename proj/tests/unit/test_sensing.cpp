#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "mramp/error.hpp"
#include "mramp/rng.hpp"
#include "mramp/sensing.hpp"

using namespace mramp;

namespace {
Vector randn(Index n, std::uint64_t seed) {
  CounterRng rng(seed, Purpose::test);
  Vector v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

void check_adjoint(const LinearOperator& op, std::uint64_t seed) {
  const Vector x = randn(op.cols(), seed), r = randn(op.rows(), seed + 1);
  const double lhs = op.apply(x).dot(r);
  const double rhs = x.dot(op.adjoint(r));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}
}  // namespace

TEST_SUITE("sensing") {
  TEST_CASE("ensemble statistics") {
    const SensingEnsemble e(400, 300, 5, true);
    const RowMatrix& a = e.matrix();
    CHECK((a.colwise().norm().array() - 1.0).abs().maxCoeff() < 1e-12);
    const SensingEnsemble raw(400, 300, 5, false);
    const double var = raw.matrix().array().square().mean();
    CHECK(var * 400 == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::abs(raw.matrix().mean()) < 5 * std::sqrt(1.0 / 400 / 120000.0));
  }

  TEST_CASE("matrix-free regeneration matches the dense matrix") {
    for (bool normalized : {true, false}) {
      const SensingEnsemble dense(120, 700, 9, normalized);
      const SensingEnsemble mf(120, 700, 9, normalized, true);
      CHECK_FALSE(mf.dense());
      CHECK_THROWS_AS(mf.matrix(), UnsupportedError);
      const Vector x = randn(700, 1), r = randn(120, 2);
      Vector y1, y2, g1, g2;
      dense.apply(x, y1);
      mf.apply(x, y2);
      dense.adjoint(r, g1);
      mf.adjoint(r, g2);
      CHECK((y1 - y2).lpNorm<Eigen::Infinity>() < 1e-10);
      CHECK((g1 - g2).lpNorm<Eigen::Infinity>() < 1e-10);
    }
  }

  TEST_CASE("serial and parallel paths agree") {
    const SensingEnsemble e(200, 500, 4, true);
    const Vector x = randn(500, 3), r = randn(200, 4);
    Vector a, b, c, d;
    e.apply(x, a, KernelPath::serial);
    e.apply(x, b, KernelPath::parallel);
    e.adjoint(r, c, KernelPath::serial);
    e.adjoint(r, d, KernelPath::parallel);
    CHECK((a - b).lpNorm<Eigen::Infinity>() < 1e-11);
    CHECK((c - d).lpNorm<Eigen::Infinity>() < 1e-11);
  }

  TEST_CASE("cache round trip is bit-exact") {
    const auto dir = std::filesystem::temp_directory_path() / "mramp_unit_cache";
    std::filesystem::create_directories(dir);
    const SensingEnsemble e(33, 71, 12, true);
    e.save(dir / "e.bin");
    CHECK(std::filesystem::file_size(dir / "e.bin") == 8 * 8 + 33 * 71 * 8);
    const SensingEnsemble back = SensingEnsemble::load(dir / "e.bin");
    CHECK(back.seed() == 12);
    CHECK(back.matrix() == e.matrix());
    {
      std::fstream f(dir / "e.bin", std::ios::in | std::ios::out | std::ios::binary);
      f.write("garbage!", 8);
    }
    CHECK_THROWS_AS(SensingEnsemble::load(dir / "e.bin"), IoError);
  }

  TEST_CASE("noiseless and noisy sampling") {
    const SensingEnsemble e(300, 400, 1, true);
    const Vector x = randn(400, 6);
    Vector ax;
    e.apply(x, ax);
    CHECK((sample(e, x, NoiseModel{0.0}, 3) - ax).norm() == 0.0);
    const Vector y = sample(e, x, NoiseModel{2.0}, 3);
    const double var = (y - ax).squaredNorm() / 300;
    CHECK(var == doctest::Approx(4.0).epsilon(0.25));
    CHECK(sample(e, x, NoiseModel{2.0}, 3) == y);
    CHECK(NoiseModel{1.0}.sigma_dw_sq(50.0, 100) == doctest::Approx(1.5));
  }

  TEST_CASE("operators pass the adjoint test") {
    auto e = std::make_shared<const SensingEnsemble>(40, 64, 7, true);
    const Transform dct = Transform::dct(64);
    check_adjoint(*hr_operator(e), 1);
    check_adjoint(*hr_operator(e, &dct), 2);
    for (const auto& p : {ResamplingPair::transform_trunc(64, 2, TransformKind::dct),
                          ResamplingPair::decimate_repeat(64, 4), ResamplingPair::bicubic(64, 2)}) {
      for (bool coef : {false, true}) {
        for (bool mat : {false, true}) {
          LrOperatorOptions o;
          o.coefficient_domain = coef;
          o.materialize = mat;
          check_adjoint(*effective_lr_operator(e, p, o), 3);
        }
      }
    }
  }

  TEST_CASE("effective LR matrix equals A U Lambda (Psi_d^T) from explicit matrices") {
    auto e = std::make_shared<const SensingEnsemble>(30, 48, 2, true);
    const Matrix a = e->matrix();
    for (const auto& p : {ResamplingPair::transform_trunc(48, 2, TransformKind::identity),
                          ResamplingPair::transform_trunc(48, 2, TransformKind::dct),
                          ResamplingPair::decimate_repeat(48, 3), ResamplingPair::bicubic(48, 2)}) {
      for (bool coef : {false, true}) {
        LrOperatorOptions o;
        o.coefficient_domain = coef;
        Matrix expect = a * p.up_matrix() * p.lambda_1d();
        if (coef) expect = expect * p.lr_transform().matrix().transpose();
        CHECK((effective_lr_operator(e, p, o)->to_dense() - expect).lpNorm<Eigen::Infinity>() < 1e-12);
        o.materialize = false;
        CHECK((effective_lr_operator(e, p, o)->to_dense() - expect).lpNorm<Eigen::Infinity>() < 1e-12);
      }
    }
  }

  TEST_CASE("2D effective LR matrix equals A (U x U) Lambda") {
    auto e = std::make_shared<const SensingEnsemble>(20, 256, 3, true);
    const Matrix a = e->matrix();
    for (const auto& p : {ResamplingPair::transform_trunc(16, 2, TransformKind::dct),
                          ResamplingPair::decimate_repeat(16, 2), ResamplingPair::bicubic(16, 4)}) {
      for (bool coef : {false, true}) {
        LrOperatorOptions o;
        o.two_d = true;
        o.coefficient_domain = coef;
        Matrix m1 = p.up_matrix();
        if (coef) m1 = m1 * p.lr_transform().matrix().transpose();
        const Matrix expect = lambda_for(p) * a * kron(m1, m1);
        CHECK((effective_lr_operator(e, p, o)->to_dense() - expect).lpNorm<Eigen::Infinity>() < 1e-12);
        o.materialize = false;
        CHECK((effective_lr_operator(e, p, o)->to_dense() - expect).lpNorm<Eigen::Infinity>() < 1e-12);
      }
    }
  }

  TEST_CASE("transform truncation keeps the first n_d columns of the HR effective matrix") {
    auto e = std::make_shared<const SensingEnsemble>(20, 64, 8, true);
    const auto p = ResamplingPair::transform_trunc(64, 2, TransformKind::dct);
    LrOperatorOptions o;
    o.coefficient_domain = true;
    const Matrix hr = hr_operator(e, &p.hr_transform())->to_dense();
    const Matrix lr = effective_lr_operator(e, p, o)->to_dense();
    CHECK((lr - hr.leftCols(32)).lpNorm<Eigen::Infinity>() < 1e-12);
  }

  TEST_CASE("d = 1 reduces to the HR operator") {
    auto e = std::make_shared<const SensingEnsemble>(20, 32, 8, true);
    const auto p = ResamplingPair::transform_trunc(32, 1, TransformKind::identity);
    CHECK((effective_lr_operator(e, p)->to_dense() - e->matrix()).lpNorm<Eigen::Infinity>() == 0.0);
  }

  TEST_CASE("dimension mismatch") {
    auto e = std::make_shared<const SensingEnsemble>(20, 32, 8, true);
    CHECK_THROWS_AS(effective_lr_operator(e, ResamplingPair::decimate_repeat(64, 2)), DimensionError);
  }
}
