#include "choidyn/matrix_ops.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace choidyn {

Mat partial_transpose(const Mat& m, const BipartiteDims& dims) {
  const int side = dims.total();
  if (m.rows() != side || m.cols() != side)
    throw std::invalid_argument("partial_transpose: matrix side does not match m*n");
  Mat out(side, side);
  for (int j = 0; j < dims.m; ++j)
    for (int k = 0; k < dims.m; ++k)
      out.block(j * dims.n, k * dims.n, dims.n, dims.n) =
          m.block(j * dims.n, k * dims.n, dims.n, dims.n).transpose();
  return out;
}

RealVec hermitian_eigenvalues(const Mat& m, double tol) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("hermitian_eigenvalues: matrix not square");
  const double dev = max_abs(m - m.adjoint());
  if (dev > tol * std::max(1.0, max_abs(m)))
    throw std::invalid_argument("hermitian_eigenvalues: matrix not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Mat> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eigenvalues: eigensolver failed to converge");
  return solver.eigenvalues();
}

double min_hermitian_eigenvalue(const Mat& m, double tol) {
  return hermitian_eigenvalues(m, tol)(0);
}

bool is_psd(const Mat& m, double tol) {
  return min_hermitian_eigenvalue(m) >= -tol * std::max(1.0, max_abs(m));
}

int numerical_rank(const Mat& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  const double cutoff = rel_tol * sv(0) * static_cast<double>(std::max(m.rows(), m.cols()));
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return rank;
}

Mat expm(const Mat& m, double t) {
  if (m.rows() != m.cols()) throw std::invalid_argument("expm: matrix not square");
  const Eigen::Index n = m.rows();
  Mat a = t * m;
  // Scale so the Taylor series converges at machine precision, square back.
  const double norm = max_abs(a) * static_cast<double>(n);
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    a /= std::pow(2.0, squarings);
  }
  Mat result = Mat::Identity(n, n);
  Mat term = Mat::Identity(n, n);
  for (int k = 1; k <= 24; ++k) {
    term = (term * a) / static_cast<double>(k);
    result += term;
    if (max_abs(term) < 1e-18 * std::max(1.0, max_abs(result))) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

}  // namespace choidyn
