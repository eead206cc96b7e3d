#include "choidyn/foliated.hpp"

#include <cmath>

namespace choidyn {

namespace {
const Complex kOmega{-0.5, std::sqrt(3.0) / 2.0};
}

Mat3 circulant_matrix(const CirculantParams& p) {
  Mat3 m;
  m << p.a, p.b, p.c,  //
      p.c, p.a, p.b,   //
      p.b, p.c, p.a;
  return m;
}

CirculantParams circulant_mul(const CirculantParams& p, const CirculantParams& q) {
  return {p.a * q.a + p.b * q.c + p.c * q.b,  //
          p.c * q.c + p.a * q.b + p.b * q.a,  //
          p.b * q.b + p.c * q.a + p.a * q.c};
}

std::tuple<Complex, Complex, Complex> circulant_eigentriple(const CirculantParams& p) {
  const Complex w2 = kOmega * kOmega;
  return {p.a + p.b + p.c, p.a + p.b * kOmega + p.c * w2, p.a + p.b * w2 + p.c * kOmega};
}

Mat3 dft3_unitary() {
  const double s = 1.0 / std::sqrt(3.0);
  const Complex w2 = kOmega * kOmega;
  Mat3 w;
  w << Complex{1}, Complex{1}, Complex{1},  //
      Complex{1}, kOmega, w2,               //
      Complex{1}, w2, kOmega;
  return s * w;
}

FoliatedMap build_map(const RhoSpec& spec) {
  return {circulant_matrix({spec.a, spec.b, spec.c}), Complex{spec.d}, Complex{0}};
}

FoliatedMap build_map(const TauSpec& spec) {
  return {circulant_matrix({spec.a, spec.b, spec.c}), Complex{0}, Complex{spec.d}};
}

FoliatedMap build_map(const ThetaSpec& spec) {
  Mat3 t;
  t << Complex{spec.a}, Complex{0}, Complex{spec.c1},  //
      Complex{spec.c2}, Complex{spec.a}, Complex{0},   //
      Complex{0}, Complex{spec.c3}, Complex{spec.a};
  return {t, Complex{-1.0}, Complex{0}};
}

FoliatedMap build_map(const MapSpec& spec) {
  return std::visit([](const auto& s) { return build_map(s); }, spec);
}

Mat3 FoliatedMap::apply(const Mat3& x) const {
  const Eigen::Vector3cd diag_in(x(0, 0), x(1, 1), x(2, 2));
  const Eigen::Vector3cd diag_out = lambda1 * diag_in;
  Mat3 out = off_scale * x + off_transpose * x.transpose();
  for (int j = 0; j < 3; ++j) out(j, j) = diag_out(j);
  return out;
}

FoliatedMap compose(const FoliatedMap& f, const FoliatedMap& g) {
  return {f.lambda1 * g.lambda1,                                    //
          f.off_scale * g.off_scale + f.off_transpose * g.off_transpose,
          f.off_scale * g.off_transpose + f.off_transpose * g.off_scale};
}

}  // namespace choidyn
