#pragma once

#include <random>

#include "oqs/linalg.hpp"

namespace testing_support {

using oqs::cd;
using oqs::Index;
using oqs::Mat;
using oqs::Vec;

inline Mat random_matrix(std::mt19937_64& g, Index r, Index c) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = cd(n(g), n(g));
  return m;
}

inline Mat random_hermitian(std::mt19937_64& g, Index d) {
  Mat a = random_matrix(g, d, d);
  return 0.5 * (a + a.adjoint());
}

inline Mat random_density(std::mt19937_64& g, Index d) {
  Mat a = random_matrix(g, d, d);
  Mat r = a * a.adjoint();
  return r / r.trace();
}

inline Vec random_state(std::mt19937_64& g, Index d) {
  Vec v = random_matrix(g, d, 1);
  return v.normalized();
}

inline Mat random_unitary(std::mt19937_64& g, Index d) {
  Eigen::HouseholderQR<Mat> qr(random_matrix(g, d, d));
  return qr.householderQ();
}

inline oqs::SpMat random_sparse_hermitian(std::mt19937_64& g, Index d, double fill) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> n(0.0, 1.0);
  Mat m = Mat::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    m(i, i) = n(g);
    for (Index j = i + 1; j < d; ++j)
      if (u(g) < fill) {
        m(i, j) = cd(n(g), n(g));
        m(j, i) = std::conj(m(i, j));
      }
  }
  return m.sparseView();
}

// Dense matrix exponential by scaling and squaring with a Taylor core.
inline Mat expm_oracle(const Mat& a) {
  const double nrm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int s = nrm > 0.5 ? static_cast<int>(std::ceil(std::log2(nrm / 0.5))) : 0;
  Mat x = a / std::pow(2.0, s);
  Mat out = Mat::Identity(a.rows(), a.cols());
  Mat term = out;
  for (int k = 1; k < 30; ++k) {
    term = term * x / double(k);
    out += term;
  }
  for (int i = 0; i < s; ++i) out = out * out;
  return out;
}

}  // namespace testing_support
