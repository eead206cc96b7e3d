#ifndef CHOIDYN_MATRIX_OPS_HPP
#define CHOIDYN_MATRIX_OPS_HPP

#include <stdexcept>
#include <vector>

#include "choidyn/types.hpp"

namespace choidyn {

/// Largest entry modulus; 0 for an empty matrix.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Kronecker product: block (j,k) of the result is a(j,k) * b.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Out = Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  if (ra * rb > (Eigen::Index(1) << 24) || ca * cb > (Eigen::Index(1) << 24))
    throw std::invalid_argument("kron: result dimensions too large");
  Out out(ra * rb, ca * cb);
  for (Eigen::Index j = 0; j < ra; ++j)
    for (Eigen::Index k = 0; k < ca; ++k)
      out.block(j * rb, k * cb, rb, cb) = a(j, k) * b.derived();
  return out;
}

/// Transpose of the second tensor factor: each n x n block of the
/// m x m block structure is transposed in place.
Mat partial_transpose(const Mat& m, const BipartiteDims& dims);

/// Ascending eigenvalues of a Hermitian matrix. Throws if the input
/// deviates from Hermiticity by more than `tol` relative to its size.
RealVec hermitian_eigenvalues(const Mat& m, double tol = tol::hermitian);

/// Smallest eigenvalue of a Hermitian matrix.
double min_hermitian_eigenvalue(const Mat& m, double tol = tol::hermitian);

/// Positive semidefiniteness: min eigenvalue >= -tol * max(1, max-abs entry).
bool is_psd(const Mat& m, double tol = tol::psd);

/// Count of singular values above rel_tol * sigma_max * max(rows, cols).
int numerical_rank(const Mat& m, double rel_tol = tol::rank);

/// exp(t*M) by scaling and squaring of the Taylor series.
Mat expm(const Mat& m, double t = 1.0);

}  // namespace choidyn

#endif
