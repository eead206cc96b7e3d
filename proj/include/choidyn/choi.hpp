#ifndef CHOIDYN_CHOI_HPP
#define CHOIDYN_CHOI_HPP

#include <optional>
#include <string>

#include "choidyn/foliated.hpp"
#include "choidyn/matrix_ops.hpp"

namespace choidyn {

/// 9x9 block matrix [map(E_jk)] over the lexicographic product basis
/// e_p (x) e_q of C^3 (x) C^3.
struct ChoiMatrix {
  Mat mat;
  BipartiteDims dims{3, 3};
  std::optional<MapSpec> source;
};

ChoiMatrix choi_matrix(const FoliatedMap& map, std::optional<MapSpec> source = {});

/// A property checked along two routes. `agree` is false only when both
/// routes produced a value and they differ.
struct Verdict {
  std::optional<bool> analytic;
  std::optional<bool> numerical;

  bool agree() const {
    return !(analytic && numerical && *analytic != *numerical);
  }
  bool value() const { return analytic ? *analytic : numerical.value(); }
  bool populated() const { return analytic || numerical; }
};

enum class Separability { DecidedYes, DecidedNo, Undecidable };

struct ClassificationReport {
  Verdict positive;
  Verdict completely_positive;
  Verdict completely_copositive;
  Verdict ppt;
  Verdict decomposable;
  Verdict atomic;
  std::optional<Separability> separable;
  std::optional<std::string> separability_basis;
  std::optional<int> choi_rank_analytic;
  int choi_rank_numerical = 0;
  std::optional<int> schmidt_number;
  std::optional<RhoSpec> witness;

  bool all_agree() const {
    for (const Verdict* v : {&positive, &completely_positive, &completely_copositive,
                             &ppt, &decomposable, &atomic})
      if (!v->agree()) return false;
    return true;
  }
};

ClassificationReport classify_rho(const RhoSpec& spec, double tol = tol::psd);
ClassificationReport classify_tau(const TauSpec& spec, double tol = tol::psd);
ClassificationReport classify_theta(const ThetaSpec& spec, double tol = tol::psd);
ClassificationReport classify(const MapSpec& spec, double tol = tol::psd);

/// Rank of the Choi matrix where the closed-form case table applies;
/// nullopt for parameter combinations outside the table.
std::optional<int> choi_rank_analytic(const MapSpec& spec);

/// Schmidt number of the structured density generated by `spec`.
/// Throws std::domain_error naming the violated precondition when the
/// parameters do not describe one of the supported densities.
int schmidt_number_structured(const MapSpec& spec);

/// Positive map certifying that a PPT rho-family map is entangled:
/// composing the returned map fails complete positivity. Requires
/// d > 0, a >= d and bc >= d^2; absent when neither a+b < 2d nor
/// a+c < 2d holds.
std::optional<RhoSpec> pptes_witness(const RhoSpec& spec);

/// Smallest eigenvalue of the Choi matrix of witness-composed-with-spec;
/// certification succeeds when this is genuinely negative.
double witness_composition_min_eig(const RhoSpec& witness, const MapSpec& spec);

struct StateReport {
  ClassificationReport map_report;
  double trace = 0;
  bool density = false;
  bool pptes = false;
  std::optional<bool> schmidt_exceeds_two_flag;
};

/// State-level classification of the Choi matrix under the a+b+c = 1/3
/// normalization. With `normalize` set, parameters are rescaled to meet
/// the normalization first.
StateReport classify_state(const MapSpec& spec, bool normalize = false,
                           double tol = tol::psd);

/// max over moduli vectors r of sum_p r_p / ((lambda1 + I) r)_p, minus 1.
/// Nonpositive exactly when the map lambda1 (+) (-Id on off-diagonals)
/// is positive; exposed for cross-validation of positivity criteria.
double positivity_excess(const Mat3& lambda1);

}  // namespace choidyn

#endif
