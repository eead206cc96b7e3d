#ifndef CHOIDYN_TYPES_HPP
#define CHOIDYN_TYPES_HPP

#include <Eigen/Dense>
#include <complex>

namespace choidyn {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;
using Mat3 = Eigen::Matrix3cd;

/// Dimensions of a bipartite space C^m (x) C^n; an associated matrix
/// must be square of side m*n.
struct BipartiteDims {
  int m = 3;
  int n = 3;
  int total() const { return m * n; }
};

namespace tol {
// Relative PSD tolerance against max(1, max-abs entry).
inline constexpr double psd = 1e-9;
// Relative singular-value cutoff for numerical rank.
inline constexpr double rank = 1e-10;
// Hermiticity slack for eigenvalue routines.
inline constexpr double hermitian = 1e-9;
}  // namespace tol

}  // namespace choidyn

#endif
