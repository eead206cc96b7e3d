// End-to-end checks of the command-line surface: exit codes, determinism
// and schema round-trips. The binary path comes from the build system.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "choidyn/semigroup.hpp"
#include "choidyn/serialize.hpp"

using namespace choidyn;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(CHOIDYN_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) result.out.append(buf, n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> lines;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) fields.push_back(f);
  return fields;
}

}  // namespace

TEST_CASE("classification round-trips through the json schema") {
  const RunResult r = run_cli("classify rho 1 0.5 2 1");
  CHECK(r.exit_code == 0);
  const Json j = Json::parse(r.out);
  const auto& spec = std::get<RhoSpec>(spec_from_json(j.at("spec")));
  CHECK(spec.a == 1.0);
  CHECK(spec.b == 0.5);
  CHECK(spec.c == 2.0);
  CHECK(spec.d == 1.0);
  CHECK(j.at("report").at("ppt").at("numerical") == true);
  CHECK(j.at("report").at("separable") == "no");
}

TEST_CASE("identical invocations produce byte-identical output") {
  for (const std::string args :
       {std::string("classify theta 1 1 1 1"), std::string("construct-ppt 2 --seed 42"),
        std::string("evolve rho 1 1 1 1 --trajectory 2 50"),
        std::string("sweep rho --a 0:1:0.25 --b 1 --c 1 --d -1:1:0.5")}) {
    const RunResult first = run_cli(args);
    const RunResult second = run_cli(args);
    CHECK(first.exit_code == second.exit_code);
    CHECK(first.out == second.out);
  }
}

TEST_CASE("parallel sweeps emit rows in the same order") {
  const std::string args = "sweep rho --a 0:2:0.5 --b 0:2:1 --c 0:1:0.5 --d -1:1:0.5";
  const RunResult serial = run_cli(args + " --jobs 1");
  const RunResult parallel = run_cli(args + " --jobs 4");
  CHECK(serial.exit_code == 0);
  CHECK(serial.out == parallel.out);
  // 5 * 3 * 3 * 5 grid points plus the header line.
  CHECK(lines_of(serial.out).size() == 226);
}

TEST_CASE("sweep rows can be parsed back and re-verified") {
  const RunResult r = run_cli("sweep rho --a 1 --b 0.5 --c 2 --d 0:1:0.5");
  REQUIRE(r.exit_code == 0);
  const auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(split_csv(rows[0]).size() == 18);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto fields = split_csv(rows[i]);
    REQUIRE(fields.size() == 18);
    const RhoSpec spec{std::stod(fields[1]), std::stod(fields[2]), std::stod(fields[3]),
                       std::stod(fields[4])};
    const ClassificationReport fresh = classify_rho(spec);
    CHECK(fields[0] == "rho");
    CHECK(fields[7] == (*fresh.completely_positive.analytic ? "1" : "0"));
    CHECK(fields[11] == (fresh.ppt.value() ? "1" : "0"));
  }
}

TEST_CASE("usage and domain errors exit with code 1") {
  CHECK(run_cli("classify rho 1 -0.5 0 0").exit_code == 1);
  CHECK(run_cli("classify sigma 1 1 1 1").exit_code == 1);
  CHECK(run_cli("classify rho 1 1").exit_code == 1);
  CHECK(run_cli("schmidt rho 1 1 1 1").exit_code == 1);
  CHECK(run_cli("transition 0.5 1 1 1").exit_code == 1);
  CHECK(run_cli("evolve rho 1 1 1 1 --t -1").exit_code == 1);
  CHECK(run_cli("nonsense").exit_code == 1);
}

TEST_CASE("transition matches the library to full precision") {
  const RunResult r = run_cli("transition 1 1 1 1");
  REQUIRE(r.exit_code == 0);
  const double t0 = std::stod(r.out);
  CHECK(t0 == doctest::Approx(transition_time({GeneratorFamily::Rho, 1, 1, 1, 1}))
                  .epsilon(1e-14));
}

TEST_CASE("trajectory output flips ppt exactly once for the symmetric generator") {
  const RunResult r = run_cli("evolve rho 1 1 1 1 --trajectory 3 300");
  REQUIRE(r.exit_code == 0);
  const auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 301);
  int flips = 0;
  std::string last;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto fields = split_csv(rows[i]);
    REQUIRE(fields.size() == 9);
    if (i > 1 && fields[8] != last) ++flips;
    last = fields[8];
  }
  CHECK(flips == 1);
}

TEST_CASE("scan reports the quoted trichotomy outcomes") {
  {
    const RunResult r = run_cli("scan rho 1 0 0 1 --property ppt --t-max 10 --steps 40");
    REQUIRE(r.exit_code == 0);
    CHECK(Json::parse(r.out).at("verdict") == "never_holds");
  }
  {
    const RunResult r = run_cli("scan rho 1 0 0 0.5 --property cp --t-max 5 --steps 40");
    REQUIRE(r.exit_code == 0);
    CHECK(Json::parse(r.out).at("verdict") == "always_holds");
  }
  {
    const RunResult r = run_cli("scan rho 1 1 1 1 --property ppt --t-max 2 --steps 60");
    REQUIRE(r.exit_code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j.at("verdict") == "transition_at");
    CHECK(std::stod(j.at("t0").get<std::string>()) ==
          doctest::Approx(0.630944724202046).epsilon(1e-12));
  }
}

TEST_CASE("construct-ppt emits a verified bundle and honors exit codes") {
  const RunResult r = run_cli("construct-ppt 3 --seed 11");
  REQUIRE(r.exit_code == 0);
  const Json j = Json::parse(r.out);
  const Mat a = matrix_from_json(j.at("construction").at("matrix"));
  CHECK(a.rows() == 9);
  const double scale = std::max(1.0, max_abs(a));
  CHECK(std::stod(j.at("construction").at("eigenvalues")[0].get<std::string>()) >=
        -1e-10 * scale);
  CHECK(std::stod(j.at("construction").at("pt_eigenvalues")[0].get<std::string>()) >=
        -1e-10 * scale);
  CHECK(is_psd(a));
  CHECK(is_psd(partial_transpose(a, {3, 3})));

  // Invalid Q structure files are usage errors.
  const std::string path = "/tmp/choidyn_bad_q.json";
  {
    std::ofstream out(path);
    Json bad;
    bad["q_plus"] = matrix_to_json(2.0 * Mat::Identity(3, 3));
    out << bad.dump();
  }
  CHECK(run_cli("construct-ppt 3 --q-file " + path).exit_code == 1);
  std::remove(path.c_str());
}

TEST_CASE("state classification through the cli") {
  const RunResult r = run_cli("classify rho 1 1 1 0 --state --normalize");
  REQUIRE(r.exit_code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j.at("state").at("density") == true);
  CHECK(j.at("state").at("map_report").at("separable") == "yes");
}

TEST_CASE("tolerance can come from the environment") {
  const RunResult strict = run_cli("--tol 1e-9 classify rho 1 0 0 1");
  const std::string cmd = std::string("CHOI_DYNAMICS_TOL=1e-9 ") + CHOIDYN_CLI_PATH +
                          " classify rho 1 0 0 1 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
  pclose(pipe);
  CHECK(out == strict.out);
}
