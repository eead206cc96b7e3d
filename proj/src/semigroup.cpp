#include "choidyn/semigroup.hpp"

#include <cmath>
#include <stdexcept>

namespace choidyn {

namespace {
const double kSqrt3 = std::sqrt(3.0);
}

TrajectoryCoeffs abc_of_t(const GeneratorSpec& gen, double t) {
  const double u = gen.u(), v = gen.v();
  const double pre = std::exp(t * (gen.a - u)) / 3.0;
  const double grow = std::exp(3.0 * u * t);
  const double theta = kSqrt3 * v * t;
  const double cs = std::cos(theta), sn = std::sin(theta);
  // Expanded phase shifts of cos(theta -+ 2pi/3) keep b(0) = c(0) = 0 exact.
  return {pre * (grow + 2.0 * cs),          //
          pre * (grow - cs + kSqrt3 * sn),  //
          pre * (grow - cs - kSqrt3 * sn),  //
          std::exp(t * gen.d)};
}

double DerivativeResiduals::max_abs() const {
  return std::max({std::abs(da), std::abs(db), std::abs(dc), std::abs(dd)});
}

DerivativeResiduals derivative_check(const GeneratorSpec& gen, double step) {
  const TrajectoryCoeffs fwd = abc_of_t(gen, step);
  const TrajectoryCoeffs bwd = abc_of_t(gen, -step);
  const double inv = 0.5 / step;
  return {(fwd.at - bwd.at) * inv - gen.a, (fwd.bt - bwd.bt) * inv - gen.b,
          (fwd.ct - bwd.ct) * inv - gen.c, (fwd.dt - bwd.dt) * inv - gen.d};
}

FoliatedMap evolve(const GeneratorSpec& gen, double t) {
  const TrajectoryCoeffs k = abc_of_t(gen, t);
  const Mat3 lambda1 = circulant_matrix({k.at, k.bt, k.ct});
  if (gen.family == GeneratorFamily::Rho) return {lambda1, Complex{k.dt}, Complex{0}};
  const double td = t * gen.d;
  return {lambda1, Complex{std::cosh(td)}, Complex{std::sinh(td)}};
}

double semigroup_law_check(const GeneratorSpec& gen, double s, double t) {
  const FoliatedMap stepped = compose(evolve(gen, s), evolve(gen, t));
  const FoliatedMap direct = evolve(gen, s + t);
  double worst = 0;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      Mat3 e = Mat3::Zero();
      e(j, k) = 1.0;
      const Mat3 ref = direct.apply(e);
      const double dev = max_abs(stepped.apply(e) - ref) / std::max(1.0, max_abs(ref));
      worst = std::max(worst, dev);
    }
  return worst;
}

HEval h_of_t(const GeneratorSpec& gen, double t) {
  const TrajectoryCoeffs k = abc_of_t(gen, t);
  const double u = gen.u(), v = gen.v(), w = gen.w();
  const double theta = kSqrt3 * v * t;
  const double g = std::exp(4 * u * t) - std::exp(-2 * u * t) -
                   9 * std::exp(-2 * w * t) - 2 * std::exp(u * t) * std::cos(theta) +
                   2 * std::exp(-2 * u * t) * std::cos(2 * theta);
  const double h = k.bt * k.ct - k.dt * k.dt;
  const double factored = std::exp(2 * t * gen.a) / 9.0 * g;
  const double scale = std::max({1.0, std::abs(k.bt * k.ct), k.dt * k.dt});
  if (std::abs(h - factored) > 1e-10 * scale)
    throw std::runtime_error("h_of_t: factorization h = (1/9) e^{2ta} g failed");
  return {h, g};
}

namespace {

bool numeric_ppt(const FoliatedMap& map, double tol) {
  const Mat choi = choi_matrix(map).mat;
  return is_psd(choi, tol) && is_psd(partial_transpose(choi, {3, 3}), tol);
}

}  // namespace

double transition_time(const GeneratorSpec& gen) {
  if (gen.b < 0 || gen.c < 0)
    throw std::domain_error("transition_time: requires b >= 0 and c >= 0");
  if (gen.b == 0 && gen.c == 0)
    throw std::domain_error("transition_time: requires (b, c) != (0, 0)");
  if (gen.w() < 0) throw std::domain_error("transition_time: requires a - d >= 0");
  if (gen.u() < std::sqrt(2.0) * std::abs(gen.v()))
    throw std::domain_error("transition_time: requires b + c >= sqrt(2)|b - c|");

  const auto g = [&](double t) { return h_of_t(gen, t).g; };
  double hi = 1.0;
  while (g(hi) <= 0) {
    hi *= 2;
    if (hi > 1e6) throw std::runtime_error("transition_time: no sign change up to t = 1e6");
  }
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0 ? lo : hi) = mid;
  }
  const double t0 = 0.5 * (lo + hi);

  if (numeric_ppt(evolve(gen, t0 * (1 - 1e-3)), tol::psd) ||
      !numeric_ppt(evolve(gen, t0 * (1 + 1e-3)), tol::psd))
    throw std::runtime_error("transition_time: PPT verdict does not flip across the root");
  return t0;
}

namespace {

bool schmidt_le(const GeneratorSpec& gen, double t, int r, double tol) {
  const TrajectoryCoeffs k = abc_of_t(gen, t);
  const Mat choi = choi_matrix(evolve(gen, t)).mat;
  if (!is_psd(choi, tol)) return false;  // not a density after normalization
  int schmidt = 3;
  if (gen.family == GeneratorFamily::Rho &&
      std::abs(k.at + 2 * k.dt) <= tol * std::max(1.0, k.at))
    schmidt = 2;
  return schmidt <= r;
}

bool property_at(const GeneratorSpec& gen, const ScanProperty& prop, double t, double tol) {
  switch (prop.kind) {
    case ScanProperty::Kind::Cp:
      return is_psd(choi_matrix(evolve(gen, t)).mat, tol);
    case ScanProperty::Kind::Ppt:
      return numeric_ppt(evolve(gen, t), tol);
    case ScanProperty::Kind::SchmidtLe:
      return schmidt_le(gen, t, prop.r, tol);
    case ScanProperty::Kind::SeparableProxy: {
      if (gen.family != GeneratorFamily::Rho)
        throw std::domain_error("trichotomy_scan: separable-proxy needs a rho generator");
      if (!numeric_ppt(evolve(gen, t), tol)) return false;
      const TrajectoryCoeffs k = abc_of_t(gen, t);
      return !(k.at + k.bt < 2 * k.dt || k.at + k.ct < 2 * k.dt);
    }
  }
  return false;
}

}  // namespace

TrichotomyResult trichotomy_scan(const GeneratorSpec& gen, ScanProperty property,
                                 double t_max, int steps, double tol) {
  if (steps < 2) throw std::invalid_argument("trichotomy_scan: needs steps >= 2");
  if (t_max <= 0) throw std::invalid_argument("trichotomy_scan: needs t_max > 0");

  TrichotomyResult result;
  result.property = property;
  result.scan_grid.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    const double t = t_max * double(i) / double(steps - 1);
    result.scan_grid.emplace_back(t, property_at(gen, property, t, tol));
  }
  int flips = 0;
  for (int i = 0; i + 1 < steps; ++i) {
    if (result.scan_grid[i].second && !result.scan_grid[i + 1].second)
      throw std::runtime_error("trichotomy_scan: property true-set is not a right half-line");
    if (result.scan_grid[i].second != result.scan_grid[i + 1].second) ++flips;
  }
  if (flips == 0) {
    result.outcome = result.scan_grid.front().second ? TrichotomyResult::Outcome::AlwaysHolds
                                                     : TrichotomyResult::Outcome::NeverHolds;
    return result;
  }

  result.outcome = TrichotomyResult::Outcome::TransitionAt;
  int first_true = 0;
  while (!result.scan_grid[first_true].second) ++first_true;
  double lo = result.scan_grid[first_true - 1].first;
  double hi = result.scan_grid[first_true].first;

  if (property.kind == ScanProperty::Kind::Ppt && gen.family == GeneratorFamily::Rho &&
      gen.b >= 0 && gen.c >= 0 && (gen.b != 0 || gen.c != 0) && gen.w() >= 0 &&
      gen.u() >= std::sqrt(2.0) * std::abs(gen.v())) {
    const double t0 = transition_time(gen);
    if (t0 < lo || t0 > hi)
      throw std::runtime_error("trichotomy_scan: closed-form root misses the grid bracket");
    result.t0 = t0;
    return result;
  }
  for (int i = 0; i < 120 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    (property_at(gen, property, mid, tol) ? hi : lo) = mid;
  }
  result.t0 = 0.5 * (lo + hi);
  return result;
}

TauPositivity tau_positivity_predicate(const GeneratorSpec& gen, double t) {
  const TrajectoryCoeffs k = abc_of_t(gen, t);
  const double td = t * gen.d;
  const double sh = std::sinh(td);
  return {k.at >= std::cosh(td), k.bt >= 0, k.ct >= 0, k.bt * k.ct >= sh * sh};
}

ChoiMatrix tau_choi(const GeneratorSpec& gen, double t) {
  if (gen.family != GeneratorFamily::Tau)
    throw std::domain_error("tau_choi: requires a tau generator");
  if (t < 0) throw std::domain_error("tau_choi: requires t >= 0");
  return choi_matrix(evolve(gen, t));
}

Mat example_51_semigroup(Example51 variant, double t, double u) {
  if (t < 0) throw std::domain_error("example_51_semigroup: requires t >= 0");
  Mat m = Mat::Zero(4, 4);
  if (variant == Example51::FoliatedM2) {
    const double decay = std::exp(-t), off = std::exp(-0.5 * t);
    m(0, 0) = 1.0;
    m(1, 1) = off;
    m(2, 2) = off;
    m(3, 0) = 1.0 - decay;
    m(3, 3) = decay;
    return m;
  }
  if (!(u > 0 && u <= 1))
    throw std::domain_error("example_51_semigroup: requires u in (0, 1]");
  m(0, 0) = 1.0;
  m(0, 3) = std::sqrt(1.0 - u * u);
  m(1, 1) = std::pow(u, t);
  if (variant == Example51::PauliT) m *= std::pow(0.5, t);
  return m;
}

}  // namespace choidyn
