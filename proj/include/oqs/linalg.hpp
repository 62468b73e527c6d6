#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <cstdint>

#include "oqs/errors.hpp"

namespace oqs {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;   // column-major storage
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<cd, Eigen::RowMajor>;  // CSR
using SpMatC = Eigen::SparseMatrix<cd>;                  // CSC, for factorizations
using Index = Eigen::Index;

inline constexpr cd I1{0.0, 1.0};

// Largest row count a dense kron may produce.
inline Index kron_max_dim = 1 << 16;

template <class DA, class DB>
Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  static_assert(std::is_same_v<typename DA::Scalar, typename DB::Scalar>);
  const Index rb = b.rows(), cb = b.cols();
  if (a.rows() * rb > kron_max_dim || a.cols() * cb > kron_max_dim)
    throw CapacityError("kron: result exceeds kron_max_dim");
  Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * rb,
                                                                         a.cols() * cb);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
  return out;
}

SpMat kron(const SpMat& a, const SpMat& b);

double max_abs(const Mat& a);
bool is_hermitian(const Mat& a, double rel_tol = 1e-12);

struct EigResult {
  RVec values;  // ascending
  Mat vectors;  // columns
};

EigResult hermitian_eig(const Mat& a);

// Orthonormal basis (columns) of the right null space.
Mat null_space(const Mat& a, double tol = 1e-10);

enum class Which { lowest, highest };

struct Eigenpair {
  double value;
  Vec vector;
  int iterations;
  double residual;
};

// Thick-restart Lanczos with full reorthogonalization; deflate spans excluded directions.
Eigenpair lanczos_extremal(const SpMat& h, Which which, double tol = 1e-10,
                           int max_iter = 5000, const Vec* start = nullptr,
                           const Mat* deflate = nullptr);

// exp(-i h dt) v by Lanczos with adaptive substeps; h hermitian.
Vec krylov_expm_action(const SpMat& h, const Vec& v, double dt, double tol = 1e-10,
                       int krylov_dim = 30);

double norm_estimate(const SpMat& h);  // max row sum, bounds the 2-norm

}  // namespace oqs
