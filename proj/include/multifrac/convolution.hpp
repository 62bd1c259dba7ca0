#ifndef MULTIFRAC_CONVOLUTION_HPP
#define MULTIFRAC_CONVOLUTION_HPP

#include "multifrac/core.hpp"

#include <unsupported/Eigen/FFT>

#include <complex>
#include <cstdint>

namespace multifrac {

/// Full linear convolution (a * b)[k] = sum_i a[i] b[k - i], length a.size() + b.size() - 1.
/// Short inputs are summed directly, long ones through a zero-padded FFT.
template <typename DerivedA, typename DerivedB>
Vector convolve(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  const Eigen::Index na = a.size();
  const Eigen::Index nb = b.size();
  if (na == 0 || nb == 0) return Vector();
  const Eigen::Index out = na + nb - 1;
  if (std::min(na, nb) <= 64) {
    Vector r = Vector::Zero(out);
    for (Eigen::Index i = 0; i < na; ++i) r.segment(i, nb) += a[i] * b;
    return r;
  }
  Eigen::Index size = 1;
  while (size < out) size <<= 1;
  Vector pa = Vector::Zero(size);
  Vector pb = Vector::Zero(size);
  pa.head(na) = a;
  pb.head(nb) = b;
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  Eigen::VectorXcd fa;
  Eigen::VectorXcd fb;
  fft.fwd(fa, pa);
  fft.fwd(fb, pb);
  fa.array() *= fb.array();
  Vector r;
  fft.inv(r, fa, size);
  return r.head(out);
}

}  // namespace multifrac

#endif  // MULTIFRAC_CONVOLUTION_HPP
