#ifndef CHOIDYN_FOLIATED_HPP
#define CHOIDYN_FOLIATED_HPP

#include <tuple>
#include <variant>

#include "choidyn/types.hpp"

namespace choidyn {

/// Parameters (a,b,c) of the 3x3 circulant with rows (a,b,c),(c,a,b),(b,c,a).
struct CirculantParams {
  Complex a{0}, b{0}, c{0};
};

/// X -> a*X with a = a[1,b,c,d] family parameters, all real.
struct RhoSpec {
  double a = 0, b = 0, c = 0, d = 0;
};

struct TauSpec {
  double a = 0, b = 0, c = 0, d = 0;
};

/// Family with lambda1 = T(a,c1,c2,c3) and off-diagonal action fixed to -Id.
struct ThetaSpec {
  double a = 0, c1 = 0, c2 = 0, c3 = 0;
};

using MapSpec = std::variant<RhoSpec, TauSpec, ThetaSpec>;

/// A linear map on M_3 preserving the diagonal/off-diagonal split.
/// The diagonal coordinates transform by `lambda1` (columns are the
/// diagonal images of E_11, E_22, E_33); the off-diagonal part maps
/// X_off -> off_scale * X_off + off_transpose * X_off^t.
struct FoliatedMap {
  Mat3 lambda1 = Mat3::Identity();
  Complex off_scale{1.0};
  Complex off_transpose{0.0};

  static FoliatedMap identity() { return {}; }

  Mat3 apply(const Mat3& x) const;
};

Mat3 circulant_matrix(const CirculantParams& p);

/// Product law of the circulant semigroup: matches the matrix product
/// of the corresponding circulants entrywise.
CirculantParams circulant_mul(const CirculantParams& p, const CirculantParams& q);

/// Eigenvalues (a+b+c, a+b*w+c*w^2, a+b*w^2+c*w) with w = -1/2 + (sqrt(3)/2)i,
/// in that order.
std::tuple<Complex, Complex, Complex> circulant_eigentriple(const CirculantParams& p);

/// The 3-point DFT unitary W with W * Diag(eigentriple) * W^* = circulant.
Mat3 dft3_unitary();

FoliatedMap build_map(const RhoSpec& spec);
FoliatedMap build_map(const TauSpec& spec);
FoliatedMap build_map(const ThetaSpec& spec);
FoliatedMap build_map(const MapSpec& spec);

/// Composition f after g; diagonal blocks multiply, off-diagonal
/// coefficients follow (a1,b1)*(a2,b2) = (a1*a2 + b1*b2, a1*b2 + b1*a2).
FoliatedMap compose(const FoliatedMap& f, const FoliatedMap& g);

}  // namespace choidyn

#endif
