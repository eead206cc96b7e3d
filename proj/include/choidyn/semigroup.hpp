#ifndef CHOIDYN_SEMIGROUP_HPP
#define CHOIDYN_SEMIGROUP_HPP

#include <utility>
#include <vector>

#include "choidyn/choi.hpp"
#include "choidyn/foliated.hpp"

namespace choidyn {

enum class GeneratorFamily { Rho, Tau };

/// Semigroup generator: rho[a,b,c,d] or tau[a,b,c,d] as the infinitesimal
/// generator of t -> exp(t * generator).
struct GeneratorSpec {
  GeneratorFamily family = GeneratorFamily::Rho;
  double a = 0, b = 0, c = 0, d = 0;

  double u() const { return 0.5 * (b + c); }
  double v() const { return 0.5 * (b - c); }
  double w() const { return a - d; }
};

/// Closed-form circulant coefficients of exp(t * D(a,b,c)) and e^{td}.
struct TrajectoryCoeffs {
  double at = 1, bt = 0, ct = 0, dt = 1;
};

TrajectoryCoeffs abc_of_t(const GeneratorSpec& gen, double t);

/// Central-difference derivatives of the trajectory coefficients at t = 0
/// minus (a,b,c,d); all four residuals are O(step^2).
struct DerivativeResiduals {
  double da = 0, db = 0, dc = 0, dd = 0;
  double max_abs() const;
};

DerivativeResiduals derivative_check(const GeneratorSpec& gen, double step = 1e-5);

/// exp(t * generator) as a foliated map; negative t yields the group inverse.
FoliatedMap evolve(const GeneratorSpec& gen, double t);

/// Max deviation of evolve(s) o evolve(t) from evolve(s+t) over the matrix
/// unit basis, scaled by max(1, magnitude of the reference image).
double semigroup_law_check(const GeneratorSpec& gen, double s, double t);

/// h(t) = b(t)c(t) - d(t)^2 together with its factor g in
/// h = (1/9) e^{2ta} g; the factorization is asserted on every call.
struct HEval {
  double h = 0;
  double g = 0;
};

HEval h_of_t(const GeneratorSpec& gen, double t);

/// The unique root of h on (0, inf) for rho generators with b,c >= 0 not
/// both zero, a >= d and b+c >= sqrt(2)|b-c|; this is the time where the
/// trajectory turns PPT.
double transition_time(const GeneratorSpec& gen);

struct ScanProperty {
  enum class Kind { SeparableProxy, Ppt, SchmidtLe, Cp };
  Kind kind = Kind::Ppt;
  int r = 0;  // bound for SchmidtLe

  static ScanProperty ppt() { return {Kind::Ppt, 0}; }
  static ScanProperty cp() { return {Kind::Cp, 0}; }
  static ScanProperty schmidt_le(int r) { return {Kind::SchmidtLe, r}; }
  static ScanProperty separable_proxy() { return {Kind::SeparableProxy, 0}; }
};

struct TrichotomyResult {
  enum class Outcome { AlwaysHolds, TransitionAt, NeverHolds };
  ScanProperty property;
  Outcome outcome = Outcome::AlwaysHolds;
  std::optional<double> t0;
  std::vector<std::pair<double, bool>> scan_grid;
};

/// Evaluates the property on an even grid over [0, t_max] and classifies
/// the true-set as empty, full, or a right half-line. A non-monotone
/// true-set raises an error rather than being repaired.
TrichotomyResult trichotomy_scan(const GeneratorSpec& gen, ScanProperty property,
                                 double t_max, int steps, double tol = tol::psd);

/// Conjunction of the closed-form positivity conditions for the evolved
/// tau-semigroup Choi matrix at time t > 0.
struct TauPositivity {
  bool at_ge_cosh = false;
  bool bt_nonneg = false;
  bool ct_nonneg = false;
  bool btct_ge_sinh_sq = false;
  bool value() const { return at_ge_cosh && bt_nonneg && ct_nonneg && btct_ge_sinh_sq; }
};

TauPositivity tau_positivity_predicate(const GeneratorSpec& gen, double t);

/// Choi matrix of exp(t * tau[a,b,c,d]), with cosh(td)/sinh(td) in the
/// off-diagonal blocks. Requires a tau generator and t >= 0.
ChoiMatrix tau_choi(const GeneratorSpec& gen, double t);

enum class Example51 { FoliatedM2, PauliT, PauliS };

/// Small closed-form semigroups on M_2: the foliated variant returns the
/// 4x4 superoperator in the column-major vec basis, the Pauli variants
/// the 4x4 matrix of the map in the sigma_0..sigma_3 basis.
Mat example_51_semigroup(Example51 variant, double t, double u = 1.0);

}  // namespace choidyn

#endif
