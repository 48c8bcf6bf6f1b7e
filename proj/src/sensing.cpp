#include "mramp/sensing.hpp"

#include <bit>
#include <cmath>
#include <fstream>

#include "mramp/error.hpp"
#include "mramp/kernels.hpp"
#include "mramp/rng.hpp"

namespace mramp {

namespace {

constexpr std::int64_t kCacheMagic = 0x534E454D41524D4D;  // "MMRAMENS"
constexpr std::int64_t kCacheVersion = 1;
// Row blocks for the matrix-free adjoint; fixed so the reduction order does
// not depend on the thread count.
constexpr Index kAdjointBlocks = 16;

static_assert(std::endian::native == std::endian::little, "cache I/O assumes a little-endian host");

Index exact_side(Index n) {
  const auto s = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (s * s != n) throw DimensionError("2D operator needs a square number of columns");
  return s;
}

}  // namespace

SensingEnsemble::SensingEnsemble(Index m, Index n, std::uint64_t seed, bool column_normalized,
                                 bool force_matrix_free)
    : m_(m), n_(n), seed_(seed), normalized_(column_normalized) {
  if (m < 1 || n < 1) throw ParameterError("ensemble dimensions must be positive");
  const double stddev = 1.0 / std::sqrt(static_cast<double>(m));
  if (!force_matrix_free && n <= kDenseColumnLimit) {
    auto a = std::make_shared<RowMatrix>(m, n);
    kernels::parallel::fill_gaussian(*a, seed, stddev);
    if (normalized_) kernels::parallel::scale_columns(*a, kernels::parallel::column_norms(*a).cwiseInverse());
    dense_ = std::move(a);
    return;
  }
  inv_norms_ = Vector::Ones(n);
  if (!normalized_) return;
  const Index block = (m + kAdjointBlocks - 1) / kAdjointBlocks;
  std::vector<Vector> partial(kAdjointBlocks, Vector::Zero(n));
#pragma omp parallel for schedule(dynamic)
  for (Index b = 0; b < kAdjointBlocks; ++b) {
    Vector rowbuf(n);
    for (Index i = b * block; i < std::min(m, (b + 1) * block); ++i) {
      kernels::gaussian_row(seed, i, stddev, rowbuf.data(), n);
      partial[b].array() += rowbuf.array().square();
    }
  }
  Vector sq = Vector::Zero(n);
  for (const Vector& p : partial) sq += p;
  inv_norms_ = sq.cwiseSqrt().cwiseInverse();
}

const RowMatrix& SensingEnsemble::matrix() const {
  if (!dense_) throw UnsupportedError("ensemble is matrix-free");
  return *dense_;
}

void SensingEnsemble::row(Index i, double* out) const {
  kernels::gaussian_row(seed_, i, 1.0 / std::sqrt(static_cast<double>(m_)), out, n_);
  Eigen::Map<Vector> r(out, n_);
  r.array() *= inv_norms_.array();
}

void SensingEnsemble::apply(const Vector& x, Vector& y, KernelPath path) const {
  if (x.size() != n_) throw DimensionError("ensemble apply: length mismatch");
  if (dense_) {
    if (path == KernelPath::serial) kernels::serial::gemv(*dense_, x, y);
    else kernels::parallel::gemv(*dense_, x, y);
    return;
  }
  y.resize(m_);
#pragma omp parallel if (path == KernelPath::parallel)
  {
    Vector rowbuf(n_);
#pragma omp for schedule(static)
    for (Index i = 0; i < m_; ++i) {
      row(i, rowbuf.data());
      y[i] = rowbuf.dot(x);
    }
  }
}

void SensingEnsemble::adjoint(const Vector& r, Vector& out, KernelPath path) const {
  if (r.size() != m_) throw DimensionError("ensemble adjoint: length mismatch");
  if (dense_) {
    if (path == KernelPath::serial) kernels::serial::gemv_t(*dense_, r, out);
    else kernels::parallel::gemv_t(*dense_, r, out);
    return;
  }
  const Index block = (m_ + kAdjointBlocks - 1) / kAdjointBlocks;
  std::vector<Vector> partial(kAdjointBlocks, Vector::Zero(n_));
#pragma omp parallel for schedule(dynamic) if (path == KernelPath::parallel)
  for (Index b = 0; b < kAdjointBlocks; ++b) {
    Vector rowbuf(n_);
    for (Index i = b * block; i < std::min(m_, (b + 1) * block); ++i) {
      row(i, rowbuf.data());
      partial[b] += r[i] * rowbuf;
    }
  }
  out = Vector::Zero(n_);
  for (const Vector& p : partial) out += p;
}

void SensingEnsemble::save(const std::filesystem::path& path) const {
  const RowMatrix& a = matrix();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  const std::int64_t header[8] = {kCacheMagic, kCacheVersion, static_cast<std::int64_t>(m_),
                                  static_cast<std::int64_t>(n_), static_cast<std::int64_t>(seed_),
                                  normalized_ ? 1 : 0, 0, 0};
  f.write(reinterpret_cast<const char*>(header), sizeof(header));
  f.write(reinterpret_cast<const char*>(a.data()), static_cast<std::streamsize>(sizeof(double) * a.size()));
  if (!f) throw IoError("write failed: " + path.string());
}

SensingEnsemble SensingEnsemble::load(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::int64_t header[8];
  f.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!f || header[0] != kCacheMagic || header[1] != kCacheVersion) throw IoError("not an ensemble cache: " + path.string());
  if (header[2] < 1 || header[3] < 1) throw IoError("corrupt ensemble header");
  SensingEnsemble e;
  e.m_ = header[2];
  e.n_ = header[3];
  e.seed_ = static_cast<std::uint64_t>(header[4]);
  e.normalized_ = header[5] != 0;
  auto a = std::make_shared<RowMatrix>(e.m_, e.n_);
  f.read(reinterpret_cast<char*>(a->data()), static_cast<std::streamsize>(sizeof(double) * a->size()));
  if (!f) throw IoError("truncated ensemble cache: " + path.string());
  e.dense_ = std::move(a);
  return e;
}

SensingEnsemble gen_ensemble(Index m, Index n, std::uint64_t seed, bool column_normalized) {
  return SensingEnsemble(m, n, seed, column_normalized);
}

Vector sample(const SensingEnsemble& e, const Vector& x, const NoiseModel& noise, std::uint64_t seed) {
  if (noise.sigma_w < 0.0) throw ParameterError("noise std must be non-negative");
  Vector y;
  e.apply(x, y);
  if (noise.sigma_w > 0.0) {
    CounterRng rng(seed, Purpose::noise);
    for (Index i = 0; i < y.size(); ++i) y[i] += noise.sigma_w * rng.normal();
  }
  return y;
}

Vector sample(const SensingEnsemble& e, const Signal& x, const NoiseModel& noise, std::uint64_t seed) {
  return sample(e, x.samples, noise, seed);
}

Matrix LinearOperator::to_dense() const {
  Matrix out(rows(), cols());
  Vector e = Vector::Zero(cols());
  Vector col;
  for (Index j = 0; j < cols(); ++j) {
    e[j] = 1.0;
    apply(e, col);
    out.col(j) = col;
    e[j] = 0.0;
  }
  return out;
}

void DenseOperator::apply(const Vector& x, Vector& y) const {
  if (x.size() != a_.cols()) throw DimensionError("operator apply: length mismatch");
  kernels::parallel::gemv(a_, x, y);
}

void DenseOperator::adjoint(const Vector& r, Vector& out) const {
  if (r.size() != a_.rows()) throw DimensionError("operator adjoint: length mismatch");
  kernels::parallel::gemv_t(a_, r, out);
}

ComposedOperator::ComposedOperator(OperatorPtr a, LinearMap s) : a_(std::move(a)), s_(std::move(s)) {
  if (s_.out != a_->cols()) throw DimensionError("composed operator: inner map does not match");
}

void ComposedOperator::apply(const Vector& x, Vector& y) const {
  if (x.size() != s_.in) throw DimensionError("operator apply: length mismatch");
  a_->apply(s_.forward(x), y);
}

void ComposedOperator::adjoint(const Vector& r, Vector& out) const {
  Vector t;
  a_->adjoint(r, t);
  out = s_.adjoint(t);
}

LinearMap synthesis_map(const Transform& t, bool two_d) {
  const Index n = t.size();
  if (!t.orthonormal()) throw UnsupportedError("synthesis needs an orthonormal transform");
  if (!two_d) {
    return {n, n, [t](const Vector& v) { return t.inverse(v); }, [t](const Vector& x) { return t.forward(x); }};
  }
  const Index len = n * n;
  return {len, len,
          [t, n](const Vector& v) {
            const Matrix s = t.inverse2d(Eigen::Map<const Matrix>(v.data(), n, n));
            return Vector(Eigen::Map<const Vector>(s.data(), s.size()));
          },
          [t, n](const Vector& x) {
            const Matrix s = t.forward2d(Eigen::Map<const Matrix>(x.data(), n, n));
            return Vector(Eigen::Map<const Vector>(s.data(), s.size()));
          }};
}

double resolve_lambda(const ResamplingPair& p, const LrOperatorOptions& opt) {
  if (opt.lambda) return *opt.lambda;
  return opt.two_d ? lambda_for(p) : p.lambda_1d();
}

LinearMap lr_synthesis_map(const ResamplingPair& p, const LrOperatorOptions& opt) {
  const double lam = resolve_lambda(p, opt);
  const bool coef = opt.coefficient_domain;
  if (!opt.two_d) {
    return {p.nd(), p.n1(),
            [p, lam, coef](const Vector& v) { return Vector(lam * p.up(coef ? p.lr_transform().inverse(v) : v)); },
            [p, lam, coef](const Vector& x) {
              const Vector t = p.up_adjoint(x);
              return Vector(lam * (coef ? p.lr_transform().forward(t) : t));
            }};
  }
  const Index nd = p.nd(), n1 = p.n1();
  return {nd * nd, n1 * n1,
          [p, lam, coef, nd](const Vector& v) {
            Matrix s = Eigen::Map<const Matrix>(v.data(), nd, nd);
            if (coef) s = p.lr_transform().inverse2d(s);
            const Matrix x = lam * p.up2d(s);
            return Vector(Eigen::Map<const Vector>(x.data(), x.size()));
          },
          [p, lam, coef, n1](const Vector& x) {
            Matrix t = p.up2d_adjoint(Eigen::Map<const Matrix>(x.data(), n1, n1));
            if (coef) t = p.lr_transform().forward2d(t);
            t *= lam;
            return Vector(Eigen::Map<const Vector>(t.data(), t.size()));
          }};
}

OperatorPtr hr_operator(std::shared_ptr<const SensingEnsemble> e, const Transform* basis, bool two_d) {
  auto a = std::make_shared<EnsembleOperator>(e);
  if (!basis) return a;
  const Index expect = two_d ? basis->size() * basis->size() : basis->size();
  if (expect != e->cols()) throw DimensionError("basis size does not match the ensemble");
  return std::make_shared<ComposedOperator>(a, synthesis_map(*basis, two_d));
}

OperatorPtr effective_lr_operator(std::shared_ptr<const SensingEnsemble> e, const ResamplingPair& p,
                                  const LrOperatorOptions& opt) {
  const Index n1 = opt.two_d ? p.n1() * p.n1() : p.n1();
  if (e->cols() != n1) throw DimensionError("resampling pair does not match the ensemble");
  const double lam = resolve_lambda(p, opt);

  // d = 1 with unit scaling is HR-AMP; share its operator exactly.
  if (p.d() == 1 && lam == 1.0 && p.kind() != PairKind::bicubic) {
    return hr_operator(e, opt.coefficient_domain ? &p.lr_transform() : nullptr, opt.two_d);
  }

  if (!opt.materialize || !e->dense()) {
    return std::make_shared<ComposedOperator>(std::make_shared<EnsembleOperator>(e), lr_synthesis_map(p, opt));
  }

  const Index k = p.nd();
  const auto build_factor = [&p, &opt, k] {
    // 1D factor M = U (Psi_d^T) with unit Lambda.
    Matrix m1(p.n1(), k);
    Vector ej = Vector::Zero(k);
    for (Index j = 0; j < k; ++j) {
      ej[j] = 1.0;
      m1.col(j) = p.up(opt.coefficient_domain ? p.lr_transform().inverse(ej) : ej);
      ej[j] = 0.0;
    }
    return m1;
  };
  const RowMatrix& a = e->matrix();
  const Index m = a.rows();
  // Identity-basis truncation keeps the first n_d columns of A.
  if (!opt.two_d && p.kind() == PairKind::transform_trunc && p.hr_transform().kind() == TransformKind::identity) {
    RowMatrix phi = (lam * std::sqrt(static_cast<double>(p.d()))) * a.leftCols(k);
    return std::make_shared<DenseOperator>(std::move(phi));
  }
  const Matrix m1 = build_factor();
  if (!opt.two_d) {
    RowMatrix phi = lam * (a * m1);
    return std::make_shared<DenseOperator>(std::move(phi));
  }

  // Row i of A is vec(R_i) with R_i side x side; its LR row is
  // lam * vec(M^T R_i M). Viewing A as a stack of R_i^T blocks turns the
  // first product into one GEMM per row block.
  const Index side = exact_side(n1);
  RowMatrix phi(m, k * k);
  const Index blocks = (m + kernels::kChunk - 1) / kernels::kChunk;
#pragma omp parallel for schedule(dynamic)
  for (Index b = 0; b < blocks; ++b) {
    const Index r0 = b * kernels::kChunk;
    const Index len = std::min(kernels::kChunk, m - r0);
    Eigen::Map<const RowMatrix> stacked(a.row(r0).data(), len * side, side);
    const RowMatrix t = stacked * m1;  // block i: R_i^T M
    for (Index i = 0; i < len; ++i) {
      Eigen::Map<Matrix> out(phi.row(r0 + i).data(), k, k);
      out.noalias() = lam * (t.middleRows(i * side, side).transpose() * m1);
    }
  }
  return std::make_shared<DenseOperator>(std::move(phi));
}

}  // namespace mramp
