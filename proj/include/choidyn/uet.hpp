#ifndef CHOIDYN_UET_HPP
#define CHOIDYN_UET_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "choidyn/matrix_ops.hpp"

namespace choidyn {

/// One off-diagonal sector of the canonical transpose-equivalence unitary:
/// contributes the block [0, lambda * X^t; X, 0]. Unitarity of the
/// assembled matrix forces |lambda| = 1 (validated on assembly).
struct OffPair {
  Complex lambda;
  Mat x;
};

/// Block data of a unitary Q with T Q = Q T^t solutions: a complex
/// symmetric unitary block, a skew-symmetric unitary block, and
/// off-diagonal pairs. Any block may be absent.
struct QStructure {
  std::optional<Mat> q_plus;
  std::optional<Mat> q_minus;
  std::vector<OffPair> off_pairs;

  int side() const;
};

/// Builds and validates the block-diagonal unitary. Throws
/// std::invalid_argument when a block violates its symmetry class,
/// unitarity, or the |lambda| = 1, lambda != +-1 constraints.
Mat assemble_Q(const QStructure& spec);

/// Whether T Q = Q T^t within tol (relative to the entry magnitudes).
bool is_uet_pair(const Mat& t, const Mat& q, double tol = 1e-10);

/// Symmetrization (M + Q M^t Q^*)/2 onto the sector of solutions of
/// T = Q T^t Q^*; Q must be a symmetric or skew-symmetric unitary block
/// (checked via Q conj(Q) = +-I) and the result is re-verified.
Mat project_T_sector(const Mat& m, const Mat& q_block);

/// Matrices sharing one witnessing unitary U with Y_j = U Y_j^t U^*.
struct CuetTuple {
  std::vector<Mat> matrices;
  Mat witness;
};

/// Seeded tuple generation: each matrix is built sector-by-sector from
/// the structure of Q; the first psd_prefix entries are Hermitized and
/// shifted to be positive semidefinite.
CuetTuple generate_cuet_tuple(const QStructure& spec, int count, std::uint64_t seed,
                              int psd_prefix = 0);

bool cuet_check(const CuetTuple& tuple, double tol = 1e-10);

/// Conjugates the assembled block matrix by blockdiag(U,...,U) and checks
/// that the result equals the blockwise transpose; throws when the blocks
/// are not collectively equivalent to their transposes under U.
Mat block_conjugation_transpose(const std::vector<std::vector<Mat>>& blocks, const Mat& u);

struct PptConstruction {
  Mat matrix;       // A = B + a I, PPT by construction
  double a0 = 0;    // smallest admissible shift, clamped at 0
  double shift = 0; // the applied shift a0 + margin
  Mat witness;      // the assembled Q
  std::vector<Mat> tuple;
  RealVec eigenvalues;
  RealVec pt_eigenvalues;
};

/// Builds the n(n+1)/2 CUET tuple, arranges it into a Hermitian block
/// matrix, shifts it positive and verifies that both the result and its
/// partial transpose are positive semidefinite.
PptConstruction construct_ppt(int n, const QStructure& q, std::uint64_t seed,
                              bool zero_tuple = false);

/// Reversal permutation, the canonical symmetric unitary making every
/// Toeplitz matrix unitarily equivalent to its transpose.
Mat reversal_permutation(int n);

}  // namespace choidyn

#endif
