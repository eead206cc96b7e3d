#include "choidyn/rng.hpp"

#include <Eigen/QR>
#include <cmath>
#include <numbers>

namespace choidyn {

double gaussian(std::mt19937_64& rng) {
  // Box-Muller; the first uniform is kept away from zero.
  const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Mat random_complex_matrix(int rows, int cols, std::mt19937_64& rng) {
  Mat m(rows, cols);
  for (int j = 0; j < rows; ++j)
    for (int k = 0; k < cols; ++k) m(j, k) = Complex{gaussian(rng), gaussian(rng)};
  return m;
}

Mat random_hermitian(int n, std::mt19937_64& rng) {
  const Mat m = random_complex_matrix(n, n, rng);
  return 0.5 * (m + m.adjoint());
}

Mat random_unitary(int n, std::mt19937_64& rng) {
  const Mat m = random_complex_matrix(n, n, rng);
  Eigen::HouseholderQR<Mat> qr(m);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

}  // namespace choidyn
