#include "mramp/signals.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "mramp/error.hpp"
#include "mramp/rng.hpp"

namespace mramp {

namespace {

// Distinguishes generator streams that share a user seed.
enum : std::uint64_t { kBg = 11, kPc = 12, kLowpass = 13, kThreePoint = 14, kRects = 15 };

void check_rate(double eps, const char* what) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw ParameterError(std::string(what) + " must lie in [0,1], got " + std::to_string(eps));
  }
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::simple_sparse: return "simple-sparse";
    case Family::piecewise_constant: return "piecewise-constant";
    case Family::image: return "image";
    case Family::generic: return "generic";
  }
  return "generic";
}

Signal::Signal(Vector s, Family f) : samples(std::move(s)), family(f) {
  if (!samples.allFinite()) throw ParameterError("signal samples must be finite");
}

Image::Image(Matrix p) : pixels(std::move(p)) {
  if (pixels.rows() != pixels.cols()) throw DimensionError("image must be square");
  if (pixels.rows() < 2) throw DimensionError("image side must be at least 2");
}

Image Image::from_vec(const Vector& v, Index side) {
  if (v.size() != side * side) throw DimensionError("vector length does not match image side");
  return Image(Eigen::Map<const Matrix>(v.data(), side, side));
}

void ProblemGeometry::validate() const {
  if (n1 < 1 || m < 1 || d < 1) throw ParameterError("geometry dimensions must be positive");
  if (n1 % d != 0) throw ParameterError("d must divide n1");
  if (m >= nd()) throw ParameterError("m must be smaller than n_d");
}

double default_mu_mapping(double gamma, double eps_eff, double delta, double sigma_w_sq) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterError("gamma must lie in (0,1)");
  if (!(eps_eff > 0.0)) throw ParameterError("three-point rate must be positive");
  return std::sqrt(delta * gamma * sigma_w_sq / ((1.0 - gamma) * eps_eff));
}

ThreePointSpec make_three_point_spec(double gamma, double eps1, double delta1, double sigma_w_sq,
                                     const MuMapping& mapping) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterError("gamma must lie in (0,1)");
  check_rate(eps1, "eps1");
  return {gamma, eps1, mapping(gamma, 0.9 * eps1, delta1, sigma_w_sq)};
}

Signal gen_bernoulli_gaussian(Index n, double eps, std::uint64_t seed) {
  if (n < 1) throw ParameterError("n must be positive");
  check_rate(eps, "eps");
  CounterRng rng(seed, Purpose::signal, {kBg});
  Vector x = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    if (rng.bernoulli(eps)) x[i] = rng.normal();
  }
  return Signal(std::move(x), Family::simple_sparse);
}

PiecewiseDraw gen_piecewise_constant_with_innovation(Index n, double eps, std::uint64_t seed) {
  if (n < 2) throw ParameterError("n must be at least 2");
  check_rate(eps, "eps");
  CounterRng rng(seed, Purpose::signal, {kPc});
  Vector innov = Vector::Zero(n - 1);
  for (Index i = 0; i + 1 < n; ++i) {
    if (rng.bernoulli(eps)) innov[i] = rng.normal();
  }
  Vector x(n);
  x[0] = rng.normal();
  for (Index i = 1; i < n; ++i) x[i] = x[i - 1] + innov[i - 1];
  return {Signal(std::move(x), Family::piecewise_constant), std::move(innov)};
}

Signal gen_piecewise_constant(Index n, double eps, std::uint64_t seed) {
  return gen_piecewise_constant_with_innovation(n, eps, seed).signal;
}

Signal gen_lowpass_sparse(Index n1, Index d, double eps_d, std::uint64_t seed) {
  if (d < 1 || n1 % d != 0) throw ParameterError("d must divide n1");
  check_rate(eps_d, "eps_d");
  CounterRng rng(seed, Purpose::signal, {kLowpass});
  Vector x = Vector::Zero(n1);
  for (Index i = 0; i < n1 / d; ++i) {
    if (rng.bernoulli(eps_d)) x[i] = rng.normal();
  }
  return Signal(std::move(x), Family::simple_sparse);
}

Signal gen_three_point_mixture(const ThreePointSpec& spec, Index n1, Index d, std::uint64_t seed) {
  if (d != 2) throw ParameterError("three-point mixture is defined for d = 2");
  if (n1 % 2 != 0) throw ParameterError("n1 must be even");
  if (!(spec.gamma > 0.0 && spec.gamma < 1.0)) throw ParameterError("gamma must lie in (0,1)");
  const double head_rate = 1.8 * spec.eps;
  const double tail_rate = 0.2 * spec.eps;
  if (head_rate > 1.0 || spec.eps < 0.0) throw ParameterError("1.8*eps1 must not exceed 1");
  CounterRng rng(seed, Purpose::signal, {kThreePoint});
  Vector x = Vector::Zero(n1);
  const Index half = n1 / 2;
  for (Index i = 0; i < half; ++i) {
    if (rng.bernoulli(head_rate)) x[i] = rng.bernoulli(0.5) ? spec.mu : -spec.mu;
  }
  for (Index i = half; i < n1; ++i) {
    if (rng.bernoulli(tail_rate)) x[i] = rng.normal();
  }
  return Signal(std::move(x), Family::simple_sparse);
}

Image gen_piecewise_constant_image(Index side, int rectangles, std::uint64_t seed) {
  if (side < 2) throw ParameterError("image side must be at least 2");
  CounterRng rng(seed, Purpose::signal, {kRects});
  Matrix px = Matrix::Constant(side, side, 64.0 + 128.0 * rng.uniform());
  for (int k = 0; k < rectangles; ++k) {
    Index r0 = static_cast<Index>(rng.uniform() * side);
    Index c0 = static_cast<Index>(rng.uniform() * side);
    Index h = 1 + static_cast<Index>(rng.uniform() * side / 2);
    Index w = 1 + static_cast<Index>(rng.uniform() * side / 2);
    h = std::min(h, side - r0);
    w = std::min(w, side - c0);
    px.block(r0, c0, h, w).setConstant(255.0 * rng.uniform());
  }
  return Image(std::move(px));
}

double nmse(const Vector& truth, const Vector& estimate) {
  if (truth.size() != estimate.size()) throw DimensionError("nmse: length mismatch");
  const double energy = truth.squaredNorm();
  if (energy == 0.0) throw UndefinedMetricError("nmse: truth is all zero");
  return (truth - estimate).squaredNorm() / energy;
}

double nmse(const Signal& truth, const Signal& estimate) { return nmse(truth.samples, estimate.samples); }

double nsnr(const Signal& truth, const Signal& estimate) {
  if (truth.resolution() != estimate.resolution()) throw DimensionError("nsnr: length mismatch");
  const double err = (truth.samples - estimate.samples).squaredNorm();
  const double energy = truth.samples.squaredNorm();
  if (energy == 0.0) throw UndefinedMetricError("nsnr: truth is all zero");
  if (err == 0.0) return kInfinity;
  return energy / err;
}

double mse(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("mse: size mismatch");
  return (a - b).squaredNorm() / static_cast<double>(a.size());
}

double psnr_from_mse(double m) {
  if (m == 0.0) return kInfinity;
  return 10.0 * std::log10(255.0 * 255.0 / m);
}

double psnr(const Image& reference, const Image& test) {
  if (reference.side() != test.side()) throw DimensionError("psnr: dimension mismatch");
  return psnr_from_mse(mse(reference.pixels, test.pixels));
}

void write_signal(const std::filesystem::path& path, const Signal& s) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << s.resolution() << '\n' << std::setprecision(17);
  for (Index i = 0; i < s.resolution(); ++i) out << s.samples[i] << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

Signal read_signal(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  long long n = 0;
  if (!(in >> n) || n < 1) throw IoError("bad signal header in " + path.string());
  Vector v(n);
  for (long long i = 0; i < n; ++i) {
    if (!(in >> v[i])) throw IoError("truncated signal file " + path.string());
  }
  return Signal(std::move(v));
}

namespace {

// Next header token of a PGM, skipping '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(c);
  }
  return tok;
}

}  // namespace

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  if (pgm_token(in) != "P5") throw IoError(path.string() + " is not a binary PGM (P5)");
  const int w = std::stoi(pgm_token(in));
  const int h = std::stoi(pgm_token(in));
  const int maxval = std::stoi(pgm_token(in));
  if (maxval != 255) throw IoError("only 8-bit PGM (maxval 255) is supported");
  if (w != h) throw DimensionError("PGM image must be square");
  std::vector<unsigned char> buf(static_cast<std::size_t>(w) * h);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (in.gcount() != static_cast<std::streamsize>(buf.size())) throw IoError("truncated PGM " + path.string());
  Matrix px(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) px(r, c) = buf[static_cast<std::size_t>(r) * w + c];
  return Image(std::move(px));
}

void write_pgm(const std::filesystem::path& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const Index n = img.side();
  out << "P5\n" << n << ' ' << n << "\n255\n";
  std::vector<unsigned char> buf(static_cast<std::size_t>(n * n));
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c)
      buf[static_cast<std::size_t>(r * n + c)] =
          static_cast<unsigned char>(std::clamp(std::round(img.pixels(r, c)), 0.0, 255.0));
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace mramp
