#include "choidyn/serialize.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace choidyn {

std::string format_real(double x) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) throw std::runtime_error("format_real: conversion failed");
  return std::string(buf.data(), end);
}

std::string format_real15(double x) {
  std::array<char, 64> buf{};
  const int len = std::snprintf(buf.data(), buf.size(), "%.15g", x);
  return std::string(buf.data(), len);
}

namespace {

double parse_real(const Json& j, const char* field) {
  const Json& v = j.at(field);
  if (v.is_number()) return v.get<double>();
  const std::string s = v.get<std::string>();
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw std::runtime_error(std::string("invalid real in field '") + field + "': " + s);
  }
}

}  // namespace

Json matrix_to_json(const Mat& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

Mat matrix_from_json(const Json& j) {
  const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (rows <= 0 || cols <= 0 || Eigen::Index(re.size()) != rows * cols ||
      Eigen::Index(im.size()) != rows * cols)
    throw std::runtime_error("matrix JSON: entry count does not match rows*cols");
  Mat m(rows, cols);
  Eigen::Index i = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c, ++i)
      m(r, c) = Complex{re[i].get<double>(), im[i].get<double>()};
  if (!m.allFinite()) throw std::runtime_error("matrix JSON: non-finite entries");
  return m;
}

std::string family_name(const MapSpec& spec) {
  if (std::holds_alternative<RhoSpec>(spec)) return "rho";
  if (std::holds_alternative<TauSpec>(spec)) return "tau";
  return "theta";
}

Json spec_to_json(const MapSpec& spec) {
  Json j;
  j["family"] = family_name(spec);
  if (const auto* r = std::get_if<RhoSpec>(&spec)) {
    j["a"] = format_real(r->a);
    j["b"] = format_real(r->b);
    j["c"] = format_real(r->c);
    j["d"] = format_real(r->d);
  } else if (const auto* t = std::get_if<TauSpec>(&spec)) {
    j["a"] = format_real(t->a);
    j["b"] = format_real(t->b);
    j["c"] = format_real(t->c);
    j["d"] = format_real(t->d);
  } else {
    const auto& th = std::get<ThetaSpec>(spec);
    j["a"] = format_real(th.a);
    j["c1"] = format_real(th.c1);
    j["c2"] = format_real(th.c2);
    j["c3"] = format_real(th.c3);
  }
  return j;
}

MapSpec spec_from_json(const Json& j) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "rho")
    return RhoSpec{parse_real(j, "a"), parse_real(j, "b"), parse_real(j, "c"),
                   parse_real(j, "d")};
  if (family == "tau")
    return TauSpec{parse_real(j, "a"), parse_real(j, "b"), parse_real(j, "c"),
                   parse_real(j, "d")};
  if (family == "theta")
    return ThetaSpec{parse_real(j, "a"), parse_real(j, "c1"), parse_real(j, "c2"),
                     parse_real(j, "c3")};
  throw std::runtime_error("unknown family: " + family);
}

Json verdict_to_json(const Verdict& v) {
  Json j;
  j["analytic"] = v.analytic ? Json(*v.analytic) : Json(nullptr);
  j["numerical"] = v.numerical ? Json(*v.numerical) : Json(nullptr);
  j["agree"] = v.agree();
  return j;
}

namespace {

Json optional_verdict(const Verdict& v) {
  return v.populated() ? verdict_to_json(v) : Json(nullptr);
}

const char* separability_name(Separability s) {
  switch (s) {
    case Separability::DecidedYes: return "yes";
    case Separability::DecidedNo: return "no";
    case Separability::Undecidable: return "undecidable";
  }
  return "undecidable";
}

}  // namespace

Json report_to_json(const ClassificationReport& r) {
  Json j;
  j["positive"] = optional_verdict(r.positive);
  j["completely_positive"] = verdict_to_json(r.completely_positive);
  j["completely_copositive"] = verdict_to_json(r.completely_copositive);
  j["ppt"] = verdict_to_json(r.ppt);
  j["decomposable"] = optional_verdict(r.decomposable);
  j["atomic"] = optional_verdict(r.atomic);
  j["separable"] = r.separable ? Json(separability_name(*r.separable)) : Json(nullptr);
  j["separability_basis"] =
      r.separability_basis ? Json(*r.separability_basis) : Json(nullptr);
  j["rank_analytic"] = r.choi_rank_analytic ? Json(*r.choi_rank_analytic) : Json(nullptr);
  j["rank_numerical"] = r.choi_rank_numerical;
  j["schmidt_number"] = r.schmidt_number ? Json(*r.schmidt_number) : Json(nullptr);
  j["witness"] = r.witness ? spec_to_json(*r.witness) : Json(nullptr);
  j["all_agree"] = r.all_agree();
  return j;
}

Json state_report_to_json(const StateReport& r) {
  Json j;
  j["trace"] = format_real(r.trace);
  j["density"] = r.density;
  j["pptes"] = r.pptes;
  j["schmidt_exceeds_two_flag"] =
      r.schmidt_exceeds_two_flag ? Json(*r.schmidt_exceeds_two_flag) : Json(nullptr);
  j["map_report"] = report_to_json(r.map_report);
  return j;
}

Json trichotomy_to_json(const TrichotomyResult& r) {
  Json j;
  switch (r.property.kind) {
    case ScanProperty::Kind::Ppt: j["property"] = "ppt"; break;
    case ScanProperty::Kind::Cp: j["property"] = "cp"; break;
    case ScanProperty::Kind::SchmidtLe:
      j["property"] = "schmidt_le";
      j["r"] = r.property.r;
      break;
    case ScanProperty::Kind::SeparableProxy: j["property"] = "separable_proxy"; break;
  }
  switch (r.outcome) {
    case TrichotomyResult::Outcome::AlwaysHolds: j["verdict"] = "always_holds"; break;
    case TrichotomyResult::Outcome::TransitionAt: j["verdict"] = "transition_at"; break;
    case TrichotomyResult::Outcome::NeverHolds: j["verdict"] = "never_holds"; break;
  }
  j["t0"] = r.t0 ? Json(format_real15(*r.t0)) : Json(nullptr);
  Json grid = Json::array();
  for (const auto& [t, value] : r.scan_grid) grid.push_back(Json::array({format_real15(t), value}));
  j["scan_grid"] = std::move(grid);
  return j;
}

Json qstructure_to_json(const QStructure& q) {
  Json j;
  j["q_plus"] = q.q_plus ? matrix_to_json(*q.q_plus) : Json(nullptr);
  j["q_minus"] = q.q_minus ? matrix_to_json(*q.q_minus) : Json(nullptr);
  Json pairs = Json::array();
  for (const auto& [lambda, x] : q.off_pairs) {
    Json p;
    p["lambda"] = Json{{"re", lambda.real()}, {"im", lambda.imag()}};
    p["x"] = matrix_to_json(x);
    pairs.push_back(std::move(p));
  }
  j["off_pairs"] = std::move(pairs);
  return j;
}

QStructure qstructure_from_json(const Json& j) {
  QStructure q;
  if (j.contains("q_plus") && !j.at("q_plus").is_null())
    q.q_plus = matrix_from_json(j.at("q_plus"));
  if (j.contains("q_minus") && !j.at("q_minus").is_null())
    q.q_minus = matrix_from_json(j.at("q_minus"));
  if (j.contains("off_pairs"))
    for (const auto& p : j.at("off_pairs")) {
      const auto& l = p.at("lambda");
      q.off_pairs.push_back(
          {Complex{l.at("re").get<double>(), l.at("im").get<double>()},
           matrix_from_json(p.at("x"))});
    }
  return q;
}

Json ppt_construction_to_json(const PptConstruction& c) {
  Json j;
  j["a0"] = format_real(c.a0);
  j["shift"] = format_real(c.shift);
  j["matrix"] = matrix_to_json(c.matrix);
  j["witness"] = matrix_to_json(c.witness);
  Json eigs = Json::array(), pt_eigs = Json::array();
  for (Eigen::Index i = 0; i < c.eigenvalues.size(); ++i)
    eigs.push_back(format_real(c.eigenvalues(i)));
  for (Eigen::Index i = 0; i < c.pt_eigenvalues.size(); ++i)
    pt_eigs.push_back(format_real(c.pt_eigenvalues(i)));
  j["eigenvalues"] = std::move(eigs);
  j["pt_eigenvalues"] = std::move(pt_eigs);
  return j;
}

namespace {

std::string csv_bool(const std::optional<bool>& v) {
  return v ? (*v ? "1" : "0") : "na";
}

}  // namespace

std::string csv_header(const MapSpec& probe) {
  const bool theta = std::holds_alternative<ThetaSpec>(probe);
  std::string h = theta ? "family,a,c1,c2,c3" : "family,a,b,c,d";
  return h +
         ",positive_a,positive_n,cp_a,cp_n,cocp_a,cocp_n,ppt,decomposable,atomic,"
         "separable,rank_a,rank_n,schmidt";
}

std::string csv_row(const MapSpec& spec, const ClassificationReport& r) {
  std::string row = family_name(spec);
  const auto push = [&row](const std::string& s) {
    row += ',';
    row += s;
  };
  std::visit(
      [&](const auto& s) {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, ThetaSpec>) {
          push(format_real(s.a));
          push(format_real(s.c1));
          push(format_real(s.c2));
          push(format_real(s.c3));
        } else {
          push(format_real(s.a));
          push(format_real(s.b));
          push(format_real(s.c));
          push(format_real(s.d));
        }
      },
      spec);
  push(csv_bool(r.positive.analytic));
  push(csv_bool(r.positive.numerical));
  push(csv_bool(r.completely_positive.analytic));
  push(csv_bool(r.completely_positive.numerical));
  push(csv_bool(r.completely_copositive.analytic));
  push(csv_bool(r.completely_copositive.numerical));
  push(r.ppt.populated() ? (r.ppt.value() ? "1" : "0") : "na");
  push(csv_bool(r.decomposable.analytic));
  push(csv_bool(r.atomic.analytic));
  push(r.separable ? separability_name(*r.separable) : "na");
  push(r.choi_rank_analytic ? std::to_string(*r.choi_rank_analytic) : "na");
  push(std::to_string(r.choi_rank_numerical));
  push(r.schmidt_number ? std::to_string(*r.schmidt_number) : "na");
  return row;
}

}  // namespace choidyn
