#ifndef CHOIDYN_RNG_HPP
#define CHOIDYN_RNG_HPP

#include <random>

#include "choidyn/types.hpp"

namespace choidyn {

// Distributions below avoid std::*_distribution so that seeded output is
// identical across standard-library implementations.

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double gaussian(std::mt19937_64& rng);

Mat random_complex_matrix(int rows, int cols, std::mt19937_64& rng);

Mat random_hermitian(int n, std::mt19937_64& rng);

/// Haar-like unitary: QR of a complex Gaussian matrix with the R diagonal
/// phases folded into Q.
Mat random_unitary(int n, std::mt19937_64& rng);

}  // namespace choidyn

#endif
