#include "choidyn/choi.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace choidyn {

ChoiMatrix choi_matrix(const FoliatedMap& map, std::optional<MapSpec> source) {
  Mat c = Mat::Zero(9, 9);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      Mat3 e = Mat3::Zero();
      e(j, k) = 1.0;
      c.block(3 * j, 3 * k, 3, 3) = map.apply(e);
    }
  return {std::move(c), {3, 3}, std::move(source)};
}

namespace {

// F(r) - 1 where F(r) = sum_p r_p / ((lambda1 r)_p + r_p). The map
// lambda1 (+) (-Id) sends vv^* to diag((lambda1 + I) r) - vv^* with
// r the moduli of v, so it is positive exactly when sup F <= 1.
double excess_at(const Mat3& lam, double r0, double r1, double r2) {
  const double r[3] = {r0, r1, r2};
  double f = 0;
  for (int p = 0; p < 3; ++p) {
    if (r[p] <= 0) continue;
    double dp = r[p];
    for (int q = 0; q < 3; ++q) dp += lam(p, q).real() * r[q];
    if (dp <= 0) return std::numeric_limits<double>::infinity();
    f += r[p] / dp;
  }
  return f - 1.0;
}

// Pattern search in barycentric coordinates from a starting point.
double refine_excess(const Mat3& lam, double x, double y, double best) {
  double step = 0.02;
  for (int round = 0; round < 48; ++round) {
    bool moved = false;
    for (const auto& [dx, dy] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step},
                                 {0.0, -step}, {step, step}, {-step, -step},
                                 {step, -step}, {-step, step}}) {
      const double nx = std::clamp(x + dx, 0.0, 1.0);
      const double ny = std::clamp(y + dy, 0.0, 1.0 - nx);
      const double val = excess_at(lam, nx, ny, 1.0 - nx - ny);
      if (val > best) {
        best = val;
        x = nx;
        y = ny;
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
    if (step < 1e-12) break;
  }
  return best;
}

}  // namespace

double positivity_excess(const Mat3& lambda1) {
  constexpr int kGrid = 48;
  double best = -1.0;
  double bx[3] = {1.0 / 3, 1, 0}, by[3] = {1.0 / 3, 0, 1};
  for (int i = 0; i <= kGrid; ++i)
    for (int j = 0; j <= kGrid - i; ++j) {
      const double x = double(i) / kGrid, y = double(j) / kGrid;
      const double val = excess_at(lambda1, x, y, 1.0 - x - y);
      if (val > best) {
        best = val;
        bx[0] = x;
        by[0] = y;
      }
    }
  double overall = best;
  for (int s = 0; s < 3; ++s)
    overall = std::max(overall, refine_excess(lambda1, bx[s], by[s], overall));
  return overall;
}

namespace {

std::optional<int> rank_analytic_rho(double a, double b, double c, double d) {
  if (a == 0 || b == 0 || c == 0) return std::nullopt;
  if (a == d) return 7;
  if (a == -2 * d) return 8;
  return 9;
}

std::optional<int> rank_analytic_tau(double a, double b, double c, double d) {
  if (a == 0) return std::nullopt;
  if (b * c - d * d != 0) return 9;
  if (d != 0) return 6;
  if (b * b + c * c != 0) return 6;
  return 3;
}

std::optional<int> rank_analytic_theta(double a, double c1, double c2, double c3) {
  if (c1 == 0 || c2 == 0 || c3 == 0) return std::nullopt;
  if (a == 2) return 5;
  if (a != -1) return 6;
  return std::nullopt;
}

// Eigenvalues of [a d d; d a d; d d a] are a+2d, a-d, a-d; checked
// numerically before any Schmidt-number conclusion rests on them.
void check_central_block(double a, double d) {
  Mat block(3, 3);
  block << a, d, d, d, a, d, d, d, a;
  const RealVec eig = hermitian_eigenvalues(block);
  RealVec expect(3);
  expect << a + 2 * d, a - d, a - d;
  std::sort(expect.begin(), expect.end());
  const double scale = std::max(1.0, std::abs(a) + 2 * std::abs(d));
  if ((eig - expect).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::runtime_error("central block spectrum deviates from {a+2d, a-d, a-d}");
}

constexpr double kEqTol = 1e-12;

void require(bool cond, const char* what) {
  if (!cond) throw std::domain_error(std::string("schmidt_number_structured: requires ") + what);
}

}  // namespace

std::optional<int> choi_rank_analytic(const MapSpec& spec) {
  if (const auto* r = std::get_if<RhoSpec>(&spec))
    return rank_analytic_rho(r->a, r->b, r->c, r->d);
  if (const auto* t = std::get_if<TauSpec>(&spec))
    return rank_analytic_tau(t->a, t->b, t->c, t->d);
  const auto& th = std::get<ThetaSpec>(spec);
  return rank_analytic_theta(th.a, th.c1, th.c2, th.c3);
}

int schmidt_number_structured(const MapSpec& spec) {
  if (const auto* r = std::get_if<RhoSpec>(&spec)) {
    require(r->a >= 0 && r->b >= 0 && r->c >= 0, "a, b, c >= 0");
    require(std::abs(r->a + r->b + r->c - 1.0 / 3.0) <= kEqTol, "a + b + c = 1/3");
    require(std::abs(r->d) > kEqTol, "d != 0");
    require(r->a >= std::max(r->d, -2 * r->d) - kEqTol, "a >= max(d, -2d)");
    check_central_block(r->a, r->d);
    return std::abs(r->a + 2 * r->d) <= kEqTol ? 2 : 3;
  }
  if (const auto* t = std::get_if<TauSpec>(&spec)) {
    require(t->a >= 0 && t->b >= 0 && t->c >= 0, "a, b, c >= 0");
    require(std::abs(t->a + t->b + t->c - 1.0 / 3.0) <= kEqTol, "a + b + c = 1/3");
    require(std::abs(t->d) > kEqTol, "d != 0");
    require(t->b * t->c >= t->d * t->d - kEqTol, "bc >= d^2");
    check_central_block(t->a, 0.0);
    return 2;
  }
  const auto& th = std::get<ThetaSpec>(spec);
  require(th.a >= 2 - kEqTol, "a >= 2");
  check_central_block(th.a, -1.0);
  return std::abs(th.a - 2) <= kEqTol ? 2 : 3;
}

std::optional<RhoSpec> pptes_witness(const RhoSpec& spec) {
  if (!(spec.d > 0))
    throw std::domain_error("pptes_witness: requires d > 0");
  if (!(spec.a >= spec.d))
    throw std::domain_error("pptes_witness: requires a >= d");
  if (!(spec.b * spec.c >= spec.d * spec.d))
    throw std::domain_error("pptes_witness: requires bc >= d^2");
  if (spec.a + spec.b < 2 * spec.d) return RhoSpec{1, 0, 1, -1};
  if (spec.a + spec.c < 2 * spec.d) return RhoSpec{1, 1, 0, -1};
  return std::nullopt;
}

double witness_composition_min_eig(const RhoSpec& witness, const MapSpec& spec) {
  const FoliatedMap composed = compose(build_map(witness), build_map(spec));
  return min_hermitian_eigenvalue(choi_matrix(composed).mat);
}

namespace {

void attach_separability(ClassificationReport& r, const RhoSpec& s) {
  if (s.d == 0.0) {
    r.separable = Separability::DecidedYes;
    r.separability_basis = "zero off-diagonal part";
    return;
  }
  if (!r.ppt.value()) {
    r.separable = Separability::DecidedNo;
    r.separability_basis = "not PPT";
    return;
  }
  if (s.d > 0 && s.a >= s.d && s.b * s.c >= s.d * s.d) {
    if (auto w = pptes_witness(s)) {
      r.witness = w;
      r.separable = Separability::DecidedNo;
      r.separability_basis = "positive-map witness";
      return;
    }
  }
  r.separable = Separability::Undecidable;
}

void attach_schmidt_if_density(ClassificationReport& r, const MapSpec& spec) {
  try {
    r.schmidt_number = schmidt_number_structured(spec);
  } catch (const std::domain_error&) {
    // Not one of the structured densities; field stays empty.
  }
}

}  // namespace

ClassificationReport classify_rho(const RhoSpec& s, double tol) {
  if (s.a < 0 || s.b < 0 || s.c < 0)
    throw std::domain_error("classify_rho: requires a, b, c >= 0");
  const FoliatedMap map = build_map(s);
  const Mat choi = choi_matrix(map).mat;
  const Mat pt = partial_transpose(choi, {3, 3});

  ClassificationReport r;
  r.completely_positive = {s.a >= s.d && s.a >= -2 * s.d, is_psd(choi, tol)};
  r.completely_copositive = {s.b * s.c >= s.d * s.d, is_psd(pt, tol)};
  r.ppt = {*r.completely_positive.analytic && *r.completely_copositive.analytic,
           *r.completely_positive.numerical && *r.completely_copositive.numerical};
  if (s.d == -1.0) {
    const bool pos = s.a + s.b + s.c >= 2.0 &&
                     (s.a <= 1.0 ? s.b * s.c >= (1.0 - s.a) * (1.0 - s.a) : true);
    r.positive = {pos, positivity_excess(map.lambda1) <= tol};
    if (s.a < 2.0)
      r.decomposable = {s.b * s.c >= (1.0 - s.a / 2) * (1.0 - s.a / 2), std::nullopt};
  }
  r.choi_rank_analytic = rank_analytic_rho(s.a, s.b, s.c, s.d);
  r.choi_rank_numerical = numerical_rank(choi);
  attach_schmidt_if_density(r, s);
  attach_separability(r, s);
  return r;
}

ClassificationReport classify_tau(const TauSpec& s, double tol) {
  if (s.a < 0 || s.b < 0 || s.c < 0)
    throw std::domain_error("classify_tau: requires a, b, c >= 0");
  const FoliatedMap map = build_map(s);
  const Mat choi = choi_matrix(map).mat;
  const Mat pt = partial_transpose(choi, {3, 3});

  ClassificationReport r;
  r.completely_positive = {s.b * s.c >= s.d * s.d, is_psd(choi, tol)};
  r.completely_copositive = {s.a >= s.d && s.a >= -2 * s.d, is_psd(pt, tol)};
  r.ppt = {*r.completely_positive.analytic && *r.completely_copositive.analytic,
           *r.completely_positive.numerical && *r.completely_copositive.numerical};
  if (s.d == -1.0) {
    // tau[a,b,c,d] = rho[a,b,c,d] composed with the transpose, which is
    // positive exactly when rho[a,b,c,d] is.
    const bool pos = s.a + s.b + s.c >= 2.0 &&
                     (s.a <= 1.0 ? s.b * s.c >= (1.0 - s.a) * (1.0 - s.a) : true);
    r.positive = {pos, positivity_excess(map.lambda1) <= tol};
    if (s.a < 2.0)
      r.decomposable = {s.b * s.c >= (1.0 - s.a / 2) * (1.0 - s.a / 2), std::nullopt};
  }
  r.choi_rank_analytic = rank_analytic_tau(s.a, s.b, s.c, s.d);
  r.choi_rank_numerical = numerical_rank(choi);
  attach_schmidt_if_density(r, s);
  attach_separability(r, RhoSpec{s.a, s.b, s.c, s.d});
  return r;
}

ClassificationReport classify_theta(const ThetaSpec& s, double tol) {
  if (s.a < 0 || s.c1 < 0 || s.c2 < 0 || s.c3 < 0)
    throw std::domain_error("classify_theta: requires a, c1, c2, c3 >= 0");
  const FoliatedMap map = build_map(s);
  const Mat choi = choi_matrix(map).mat;
  const Mat pt = partial_transpose(choi, {3, 3});

  const double gap = 2.0 - s.a;
  ClassificationReport r;
  r.positive = {s.a >= 1.0 && s.c1 * s.c2 * s.c3 >= gap * gap * gap,
                positivity_excess(map.lambda1) <= tol};
  r.completely_positive = {s.a >= 2.0, is_psd(choi, tol)};
  r.completely_copositive = {std::nullopt, is_psd(pt, tol)};
  r.ppt = {std::nullopt,
           *r.completely_positive.numerical && *r.completely_copositive.numerical};
  r.atomic = {s.a >= 1.0 && s.a <= 2.0 && s.c1 * s.c2 * s.c3 >= gap * gap * gap,
              std::nullopt};
  r.choi_rank_analytic = rank_analytic_theta(s.a, s.c1, s.c2, s.c3);
  r.choi_rank_numerical = numerical_rank(choi);
  if (s.a >= 2 - kEqTol) attach_schmidt_if_density(r, s);
  return r;
}

ClassificationReport classify(const MapSpec& spec, double tol) {
  if (const auto* r = std::get_if<RhoSpec>(&spec)) return classify_rho(*r, tol);
  if (const auto* t = std::get_if<TauSpec>(&spec)) return classify_tau(*t, tol);
  return classify_theta(std::get<ThetaSpec>(spec), tol);
}

StateReport classify_state(const MapSpec& spec, bool normalize, double tol) {
  if (std::holds_alternative<ThetaSpec>(spec))
    throw std::domain_error("classify_state: supported for the rho and tau families");

  auto params = [&]() -> RhoSpec {
    if (const auto* r = std::get_if<RhoSpec>(&spec)) return *r;
    const auto& t = std::get<TauSpec>(spec);
    return {t.a, t.b, t.c, t.d};
  }();
  const bool is_tau = std::holds_alternative<TauSpec>(spec);

  if (normalize) {
    const double s = params.a + params.b + params.c;
    if (s <= 0) throw std::domain_error("classify_state: a + b + c must be positive");
    const double f = 1.0 / (3.0 * s);
    params = {params.a * f, params.b * f, params.c * f, params.d * f};
  }
  if (std::abs(params.a + params.b + params.c - 1.0 / 3.0) > 1e-9)
    throw std::domain_error("classify_state: requires a + b + c = 1/3");

  const MapSpec normalized =
      is_tau ? MapSpec{TauSpec{params.a, params.b, params.c, params.d}} : MapSpec{params};

  StateReport report;
  report.map_report = classify(normalized, tol);
  report.trace = 3 * (params.a + params.b + params.c);
  report.density = report.map_report.completely_positive.value() &&
                   std::abs(report.trace - 1.0) <= 1e-9;
  report.pptes = report.map_report.ppt.value() &&
                 report.map_report.separable == Separability::DecidedNo;
  if (!is_tau && params.d < params.a && params.a < 2 * params.d &&
      2 * (params.b + params.c) < 2 * params.d - params.a)
    report.schmidt_exceeds_two_flag = true;
  return report;
}

}  // namespace choidyn
