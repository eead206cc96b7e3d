#ifndef CHOIDYN_SERIALIZE_HPP
#define CHOIDYN_SERIALIZE_HPP

#include <string>

#include <json.hpp>

#include "choidyn/choi.hpp"
#include "choidyn/semigroup.hpp"
#include "choidyn/uet.hpp"

namespace choidyn {

using Json = nlohmann::ordered_json;

/// Shortest decimal string that parses back to exactly the same double.
std::string format_real(double x);

/// Decimal string with 15 significant digits.
std::string format_real15(double x);

Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j);

Json spec_to_json(const MapSpec& spec);
MapSpec spec_from_json(const Json& j);

Json verdict_to_json(const Verdict& v);
Json report_to_json(const ClassificationReport& r);
Json state_report_to_json(const StateReport& r);
Json trichotomy_to_json(const TrichotomyResult& r);

Json qstructure_to_json(const QStructure& q);
QStructure qstructure_from_json(const Json& j);

Json ppt_construction_to_json(const PptConstruction& c);

std::string family_name(const MapSpec& spec);

/// Column names for the sweep CSV of one family.
std::string csv_header(const MapSpec& probe);
std::string csv_row(const MapSpec& spec, const ClassificationReport& r);

}  // namespace choidyn

#endif
