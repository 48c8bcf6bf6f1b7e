#pragma once

#include <memory>
#include <string>

#include "mramp/types.hpp"

namespace mramp {

enum class TransformKind { identity, dct, wavelet, difference };
enum class WaveletFilter { haar, d8 };

std::string to_string(TransformKind k);
std::string to_string(WaveletFilter f);

// Sparsifying transform Psi of size n. dct is the orthonormal DCT-II;
// wavelet is a periodized orthogonal multi-level DWT with coefficient layout
// [a_J | d_J | ... | d_1]; D8 is the 8-tap Daubechies filter (4 vanishing
// moments). difference maps R^n -> R^(n-1) with entry i = x[i+1] - x[i].
class Transform {
 public:
  static Transform identity(Index n);
  static Transform dct(Index n);
  static Transform wavelet(Index n, int levels, WaveletFilter filter);
  static Transform difference(Index n);

  TransformKind kind() const { return kind_; }
  Index size() const { return n_; }
  int levels() const { return levels_; }
  WaveletFilter filter() const { return filter_; }
  bool orthonormal() const { return kind_ != TransformKind::difference; }
  Index output_size() const { return kind_ == TransformKind::difference ? n_ - 1 : n_; }

  Vector forward(const Vector& x) const;
  Vector inverse(const Vector& s) const;
  // Psi X Psi^T and its inverse.
  Matrix forward2d(const Matrix& x) const;
  Matrix inverse2d(const Matrix& s) const;

  // Explicit matrix (output_size x n), for validation on small sizes.
  Matrix matrix() const;

 private:
  Transform(TransformKind kind, Index n, int levels, WaveletFilter filter);

  void dwt_forward(double* data, Index stride, Vector& work) const;
  void dwt_inverse(double* data, Index stride, Vector& work) const;

  TransformKind kind_;
  Index n_;
  int levels_ = 0;
  WaveletFilter filter_ = WaveletFilter::haar;
  std::shared_ptr<const Matrix> basis_;  // DCT basis rows
};

// Largest J with 2^J | n.
int max_wavelet_levels(Index n);

}  // namespace mramp
