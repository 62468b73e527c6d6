#include "oqs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace oqs {

SpMat kron(const SpMat& a, const SpMat& b) {
  std::vector<Eigen::Triplet<cd>> trip;
  trip.reserve(static_cast<size_t>(a.nonZeros() * b.nonZeros()));
  for (Index i = 0; i < a.outerSize(); ++i)
    for (SpMat::InnerIterator ia(a, i); ia; ++ia)
      for (Index k = 0; k < b.outerSize(); ++k)
        for (SpMat::InnerIterator ib(b, k); ib; ++ib)
          trip.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                            ia.value() * ib.value());
  SpMat out(a.rows() * b.rows(), a.cols() * b.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

double max_abs(const Mat& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

bool is_hermitian(const Mat& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(max_abs(a), 1e-300);
  return max_abs(a - a.adjoint()) <= rel_tol * scale;
}

EigResult hermitian_eig(const Mat& a) {
  if (!is_hermitian(a, 1e-10)) throw ContractViolation("hermitian_eig: input is not hermitian");
  // The solver reads only the lower triangle; symmetrize so both halves count.
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.adjoint()));
  return {es.eigenvalues(), es.eigenvectors()};
}

Mat null_space(const Mat& a, double tol) {
  if (a.rows() != a.cols()) throw ContractViolation("null_space: matrix must be square");
  const Index n = a.cols();
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeFullV);
  const RVec& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * smax) ++rank;
  if (smax == 0.0) rank = 0;
  return svd.matrixV().rightCols(n - rank);
}

double norm_estimate(const SpMat& h) {
  double best = 0.0;
  for (Index i = 0; i < h.outerSize(); ++i) {
    double row = 0.0;
    for (SpMat::InnerIterator it(h, i); it; ++it) row += std::abs(it.value());
    best = std::max(best, row);
  }
  return best;
}

namespace {

Vec seeded_vector(Index n) {
  std::mt19937_64 gen(0x5eed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec v(n);
  for (Index i = 0; i < n; ++i) v(i) = cd(u(gen), u(gen));
  return v;
}

void project_out(Vec& w, const Mat* basis) {
  if (basis && basis->cols()) w -= *basis * (basis->adjoint() * w);
}

}  // namespace

Eigenpair lanczos_extremal(const SpMat& h, Which which, double tol, int max_iter,
                           const Vec* start, const Mat* deflate) {
  const Index n = h.rows();
  if (n < 2 || h.cols() != n) throw ContractViolation("lanczos_extremal: need square, dim >= 2");
  const double sgn = which == Which::lowest ? 1.0 : -1.0;
  const double hn = std::max(norm_estimate(h), 1e-300);
  const Index ndef = deflate ? deflate->cols() : 0;
  const Index m = std::min<Index>(n - ndef, 80);
  const Index keep = std::max<Index>(1, m / 2);

  // q holds an orthonormal Krylov basis, hq = sgn*P h P q, t = q^H hq.
  Mat q(n, m), hq(n, m);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  Index k = 0;
  int total = 0;
  Eigenpair out{0.0, Vec(), 0, std::numeric_limits<double>::infinity()};

  Vec v = start ? *start : seeded_vector(n);
  while (true) {
    project_out(v, deflate);
    for (int pass = 0; pass < 2 && k > 0; ++pass) v -= q.leftCols(k) * (q.leftCols(k).adjoint() * v);
    double vn = v.norm();
    if (vn <= 1e-12) {
      if (k == 0 && start) throw ContractViolation("lanczos_extremal: start vector vanishes");
      // Invariant subspace: continue with a fresh direction.
      v = seeded_vector(n) + Vec::Constant(n, cd(total, 0));
      project_out(v, deflate);
      for (int pass = 0; pass < 2 && k > 0; ++pass) v -= q.leftCols(k) * (q.leftCols(k).adjoint() * v);
      vn = v.norm();
      if (vn <= 1e-12) break;
    }
    q.col(k) = v / vn;
    Vec w = sgn * (h * q.col(k));
    project_out(w, deflate);
    hq.col(k) = w;
    const Vec col = q.leftCols(k + 1).adjoint() * w;
    for (Index i = 0; i <= k; ++i) t(i, k) = t(k, i) = col(i).real();
    ++k;
    ++total;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.topLeftCorner(k, k));
    const Vec u = es.eigenvectors().col(0).cast<cd>();
    Vec y = q.leftCols(k) * u;
    Vec r = hq.leftCols(k) * u - es.eigenvalues()(0) * y;
    const double res = r.norm();
    if (res < out.residual) out = {sgn * es.eigenvalues()(0), y, total, res};
    if (res <= tol * hn || k == n - ndef) break;
    if (total >= max_iter) throw IterationError("lanczos_extremal: no convergence", out.residual / hn);
    if (k == m) {
      // Thick restart on the lowest Ritz vectors.
      const Mat u_keep = es.eigenvectors().leftCols(keep).cast<cd>();
      q.leftCols(keep) = (q.leftCols(k) * u_keep).eval();
      hq.leftCols(keep) = (hq.leftCols(k) * u_keep).eval();
      t.setZero();
      for (Index i = 0; i < keep; ++i) t(i, i) = es.eigenvalues()(i);
      k = keep;
    }
    v = r;
  }
  Vec y = out.vector;
  y.normalize();
  const Vec hy = h * y;
  out.value = (y.adjoint() * hy)(0).real();
  out.vector = y;
  out.iterations = total;
  return out;
}

Vec krylov_expm_action(const SpMat& h, const Vec& v, double dt, double tol, int krylov_dim) {
  if (!std::isfinite(dt)) throw ContractViolation("krylov_expm_action: dt must be finite");
  const double hn = norm_estimate(h);
  const double vnorm = v.norm();
  if (dt == 0.0 || hn == 0.0 || vnorm == 0.0) return v;
  const Index n = h.rows();
  const Index m = std::min<Index>(krylov_dim, n);
  const double dir = dt < 0 ? -1.0 : 1.0;
  const double span = std::abs(dt);

  Vec w = v;
  double t = 0.0;
  double tau = span;
  int rejects = 0;
  while (t < span) {
    tau = std::min(tau, span - t);
    const double beta0 = w.norm();
    Mat q(n, m + 1);
    std::vector<double> alpha, beta;
    q.col(0) = w / beta0;
    Index k = 0;
    bool happy = false;
    for (Index j = 0; j < m; ++j) {
      Vec x = h * q.col(j);
      const double a = (q.col(j).adjoint() * x)(0).real();
      alpha.push_back(a);
      x -= a * q.col(j);
      if (j > 0) x -= beta[j - 1] * q.col(j - 1);
      for (int pass = 0; pass < 2; ++pass) x -= q.leftCols(j + 1) * (q.leftCols(j + 1).adjoint() * x);
      const double b = x.norm();
      beta.push_back(b);
      k = j + 1;
      if (b <= 1e-13 * hn) {
        happy = true;
        break;
      }
      q.col(j + 1) = x / b;
    }
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k, k);
    for (Index i = 0; i < k; ++i) tri(i, i) = alpha[i];
    for (Index i = 0; i + 1 < k; ++i) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    const Mat s = es.eigenvectors().cast<cd>();
    while (true) {
      Vec ph(k);
      for (Index i = 0; i < k; ++i) ph(i) = std::exp(-I1 * (dir * tau) * es.eigenvalues()(i));
      Vec c = s * ph.asDiagonal() * s.row(0).adjoint();
      const double err = happy ? 0.0 : beta0 * beta[k - 1] * std::abs(c(k - 1));
      if (err <= 0.5 * tol * vnorm * tau / span) {
        w = beta0 * (q.leftCols(k) * c);
        t += tau;
        if (!happy && err < 0.05 * tol * vnorm * tau / span) tau *= 2.0;
        break;
      }
      tau *= 0.5;
      if (++rejects > 2000 || tau < 1e-15 * span)
        throw IterationError("krylov_expm_action: step underflow", err);
    }
  }
  return w;
}

}  // namespace oqs
