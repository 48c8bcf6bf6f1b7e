#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <string>

#include "mramp/types.hpp"

namespace mramp {

enum class Family { simple_sparse, piecewise_constant, image, generic };

std::string to_string(Family f);

// Dense 1D signal; its resolution is the sample count.
struct Signal {
  Vector samples;
  Family family = Family::generic;

  Signal() = default;
  explicit Signal(Vector s, Family f = Family::generic);

  Index resolution() const { return samples.size(); }
  bool all_finite() const { return samples.allFinite(); }
};

// Square grayscale image; vec() is the column-major concatenation.
struct Image {
  Matrix pixels;

  Image() = default;
  explicit Image(Matrix p);

  Index side() const { return pixels.rows(); }
  Vector vec() const { return Eigen::Map<const Vector>(pixels.data(), pixels.size()); }
  static Image from_vec(const Vector& v, Index side);
};

struct ProblemGeometry {
  Index n1 = 0;
  Index m = 0;
  Index d = 1;

  Index nd() const { return n1 / d; }
  double delta1() const { return static_cast<double>(m) / static_cast<double>(n1); }
  double delta_d() const { return static_cast<double>(m) / static_cast<double>(nd()); }
  // Throws ParameterError unless d | n1 and m < n_d.
  void validate() const;
};

// Mapping gamma -> spike magnitude for the three-point prior. Arguments are
// (gamma, eps_eff, delta, sigma_w_sq) where eps_eff is the per-coordinate
// rate of three-point nonzeros in the full-resolution signal.
using MuMapping = std::function<double(double, double, double, double)>;

// Default mapping: chooses mu so that the per-coordinate energy of the
// three-point component equals delta*gamma/(1-gamma)*sigma_w^2, the MSE the
// least-favorable construction attains above the phase transition. mu -> 0
// as gamma -> 0 and mu -> infinity as gamma -> 1.
double default_mu_mapping(double gamma, double eps_eff, double delta, double sigma_w_sq);

struct ThreePointSpec {
  double gamma = 0.0;
  double eps = 0.0;  // full-resolution sparsity ratio eps1
  double mu = 0.0;
};

// The mixture places three-point spikes at rate 1.8*eps1 in the first half,
// so eps_eff = 0.9*eps1.
ThreePointSpec make_three_point_spec(double gamma, double eps1, double delta1, double sigma_w_sq,
                                     const MuMapping& mapping = default_mu_mapping);

Signal gen_bernoulli_gaussian(Index n, double eps, std::uint64_t seed);

struct PiecewiseDraw {
  Signal signal;
  Vector innovation;  // first differences, length n-1
};
PiecewiseDraw gen_piecewise_constant_with_innovation(Index n, double eps, std::uint64_t seed);
Signal gen_piecewise_constant(Index n, double eps, std::uint64_t seed);

// First n1/d entries Bernoulli-Gaussian at rate eps_d, the rest zero.
Signal gen_lowpass_sparse(Index n1, Index d, double eps_d, std::uint64_t seed);

Signal gen_three_point_mixture(const ThreePointSpec& spec, Index n1, Index d, std::uint64_t seed);

// Random axis-aligned rectangles on a constant background (test material
// for the 2D TV path).
Image gen_piecewise_constant_image(Index side, int rectangles, std::uint64_t seed);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

double nmse(const Vector& truth, const Vector& estimate);
double nmse(const Signal& truth, const Signal& estimate);
// Reciprocal of nmse; +infinity for a perfect estimate.
double nsnr(const Signal& truth, const Signal& estimate);
double mse(const Matrix& a, const Matrix& b);
// 10*log10(255^2/MSE); +infinity when the images are identical.
double psnr(const Image& reference, const Image& test);
double psnr_from_mse(double mse);

// Plain-text signal: first line is the length, then one value per line.
void write_signal(const std::filesystem::path& path, const Signal& s);
Signal read_signal(const std::filesystem::path& path);

// Binary PGM (P5), 8-bit, maxval 255. Writing rounds and clamps to [0,255].
Image read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const Image& img);

}  // namespace mramp
