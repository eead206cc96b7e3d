// Command-line front end: classification, evolution, transition times,
// trichotomy scans, parameter sweeps and PPT construction.
//
// Exit codes: 0 success, 1 usage or domain error, 2 analytic/numerical
// disagreement (or a failed trichotomy monotonicity check), 3 construction
// failure.

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>

#include "choidyn/serialize.hpp"

namespace {

using namespace choidyn;

constexpr int kExitUsage = 1;
constexpr int kExitDisagreement = 2;
constexpr int kExitConstruction = 3;

struct Range {
  double start = 0, stop = 0, step = 1;

  std::vector<double> points() const {
    std::vector<double> out;
    const long long count =
        step > 0 ? static_cast<long long>((stop - start) / step + 1e-9) + 1 : 0;
    for (long long i = 0; i < count; ++i) out.push_back(start + double(i) * step);
    return out;
  }
};

Range parse_range(const std::string& text) {
  Range r;
  const auto first = text.find(':');
  if (first == std::string::npos) {
    r.start = r.stop = std::stod(text);
    return r;
  }
  const auto second = text.find(':', first + 1);
  if (second == std::string::npos)
    throw CLI::ValidationError("range", "expected start:stop:step, got '" + text + "'");
  r.start = std::stod(text.substr(0, first));
  r.stop = std::stod(text.substr(first + 1, second - first - 1));
  r.step = std::stod(text.substr(second + 1));
  if (r.step <= 0) throw CLI::ValidationError("range", "step must be positive");
  if (r.start > r.stop) throw CLI::ValidationError("range", "start must not exceed stop");
  return r;
}

MapSpec make_spec(const std::string& family, const std::vector<double>& p) {
  if (family == "rho") return RhoSpec{p[0], p[1], p[2], p[3]};
  if (family == "tau") return TauSpec{p[0], p[1], p[2], p[3]};
  if (family == "theta") return ThetaSpec{p[0], p[1], p[2], p[3]};
  throw CLI::ValidationError("family", "expected rho, tau or theta");
}

GeneratorSpec make_generator(const std::string& family, const std::vector<double>& p) {
  if (family == "rho") return {GeneratorFamily::Rho, p[0], p[1], p[2], p[3]};
  if (family == "tau") return {GeneratorFamily::Tau, p[0], p[1], p[2], p[3]};
  throw CLI::ValidationError("family", "generators come from the rho or tau family");
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

int run_classify(const std::string& family, const std::vector<double>& params,
                 bool state, bool normalize, double tol, const std::string& format) {
  const MapSpec spec = make_spec(family, params);
  if (state) {
    const StateReport report = classify_state(spec, normalize, tol);
    Json j;
    j["spec"] = spec_to_json(spec);
    j["state"] = state_report_to_json(report);
    emit(j);
    return report.map_report.all_agree() ? 0 : kExitDisagreement;
  }
  const ClassificationReport report = classify(spec, tol);
  if (format == "csv") {
    std::cout << csv_header(spec) << "\n" << csv_row(spec, report) << "\n";
  } else {
    Json j;
    j["spec"] = spec_to_json(spec);
    j["report"] = report_to_json(report);
    emit(j);
  }
  return report.all_agree() ? 0 : kExitDisagreement;
}

int run_rank(const std::string& family, const std::vector<double>& params, double tol) {
  const MapSpec spec = make_spec(family, params);
  const std::optional<int> analytic = choi_rank_analytic(spec);
  const int numerical = numerical_rank(choi_matrix(build_map(spec)).mat, tol);
  Json j;
  j["spec"] = spec_to_json(spec);
  j["rank_analytic"] = analytic ? Json(*analytic) : Json("unlisted");
  j["rank_numerical"] = numerical;
  j["match"] = analytic ? Json(*analytic == numerical) : Json(nullptr);
  emit(j);
  return (!analytic || *analytic == numerical) ? 0 : kExitDisagreement;
}

int run_schmidt(const std::string& family, const std::vector<double>& params) {
  const MapSpec spec = make_spec(family, params);
  Json j;
  j["spec"] = spec_to_json(spec);
  j["schmidt_number"] = schmidt_number_structured(spec);
  emit(j);
  return 0;
}

struct PointRow {
  double t = 0;
  TrajectoryCoeffs k;
  double min_eig = 0, min_eig_pt = 0;
  bool cp = false, ppt = false;
};

PointRow evaluate_point(const GeneratorSpec& gen, double t, double tol) {
  PointRow row;
  row.t = t;
  row.k = abc_of_t(gen, t);
  const Mat choi = choi_matrix(evolve(gen, t)).mat;
  const Mat pt = partial_transpose(choi, {3, 3});
  row.min_eig = min_hermitian_eigenvalue(choi);
  row.min_eig_pt = min_hermitian_eigenvalue(pt);
  const double scale = tol * std::max(1.0, max_abs(choi));
  row.cp = row.min_eig >= -scale;
  row.ppt = row.cp && row.min_eig_pt >= -tol * std::max(1.0, max_abs(pt));
  return row;
}

std::string trajectory_row(const PointRow& r) {
  std::string out = format_real15(r.t);
  for (double v : {r.k.at, r.k.bt, r.k.ct, r.k.dt, r.min_eig, r.min_eig_pt}) {
    out += ',';
    out += format_real15(v);
  }
  out += r.cp ? ",1" : ",0";
  out += r.ppt ? ",1" : ",0";
  return out;
}

int run_evolve(const std::string& family, const std::vector<double>& params,
               std::optional<double> t, const std::vector<double>& trajectory,
               bool allow_negative, double tol) {
  const GeneratorSpec gen = make_generator(family, params);
  if (!trajectory.empty()) {
    const double t_max = trajectory[0];
    const int steps = int(trajectory[1]);
    if (steps < 2 || t_max <= 0)
      throw CLI::ValidationError("--trajectory", "needs t_max > 0 and steps >= 2");
    std::cout << "t,at,bt,ct,dt,min_eig_choi,min_eig_pt_choi,cp,ppt\n";
    for (int i = 0; i < steps; ++i) {
      const double ti = t_max * double(i) / double(steps - 1);
      std::cout << trajectory_row(evaluate_point(gen, ti, tol)) << "\n";
    }
    return 0;
  }
  const double at_time = t.value_or(0.0);
  if (at_time < 0 && !allow_negative)
    throw std::domain_error("evolve: negative t needs --allow-negative");
  const PointRow row = evaluate_point(gen, at_time, tol);
  Json j;
  j["t"] = format_real15(row.t);
  j["at"] = format_real(row.k.at);
  j["bt"] = format_real(row.k.bt);
  j["ct"] = format_real(row.k.ct);
  j["dt"] = format_real(row.k.dt);
  j["min_eig_choi"] = format_real(row.min_eig);
  j["min_eig_pt_choi"] = format_real(row.min_eig_pt);
  j["cp"] = row.cp;
  j["ppt"] = row.ppt;
  if (gen.family == GeneratorFamily::Rho && at_time >= 0) {
    const ClassificationReport report =
        classify_rho({row.k.at, row.k.bt, row.k.ct, row.k.dt}, tol);
    j["report"] = report_to_json(report);
  } else if (gen.family == GeneratorFamily::Tau && at_time >= 0) {
    const TauPositivity pred = tau_positivity_predicate(gen, at_time);
    j["tau_positivity_predicate"] =
        Json{{"at_ge_cosh", pred.at_ge_cosh},
             {"bt_nonneg", pred.bt_nonneg},
             {"ct_nonneg", pred.ct_nonneg},
             {"btct_ge_sinh_sq", pred.btct_ge_sinh_sq},
             {"value", pred.value()}};
  }
  emit(j);
  return 0;
}

int run_transition(const std::vector<double>& params) {
  const GeneratorSpec gen{GeneratorFamily::Rho, params[0], params[1], params[2], params[3]};
  std::cout << format_real15(transition_time(gen)) << "\n";
  return 0;
}

int run_scan(const std::string& family, const std::vector<double>& params,
             const std::string& property, int r, double t_max, int steps, double tol) {
  const GeneratorSpec gen = make_generator(family, params);
  ScanProperty prop;
  if (property == "ppt")
    prop = ScanProperty::ppt();
  else if (property == "cp")
    prop = ScanProperty::cp();
  else if (property == "schmidt-le")
    prop = ScanProperty::schmidt_le(r);
  else if (property == "separable-proxy")
    prop = ScanProperty::separable_proxy();
  else
    throw CLI::ValidationError("--property", "expected ppt, cp, schmidt-le or separable-proxy");
  emit(trichotomy_to_json(trichotomy_scan(gen, prop, t_max, steps, tol)));
  return 0;
}

int run_sweep(const std::string& family, const std::array<Range, 4>& ranges, double tol,
              const std::string& format, int jobs) {
  const std::array<std::vector<double>, 4> axes = {ranges[0].points(), ranges[1].points(),
                                                   ranges[2].points(), ranges[3].points()};
  const std::size_t total =
      axes[0].size() * axes[1].size() * axes[2].size() * axes[3].size();
  if (total > 10'000'000) throw CLI::ValidationError("sweep", "grid exceeds 1e7 points");

  std::vector<MapSpec> grid;
  grid.reserve(total);
  for (double p0 : axes[0])
    for (double p1 : axes[1])
      for (double p2 : axes[2])
        for (double p3 : axes[3]) grid.push_back(make_spec(family, {p0, p1, p2, p3}));

  const MapSpec probe = make_spec(family, {0, 0, 0, 0});
  const bool csv = format == "csv";
  if (csv)
    std::cout << csv_header(probe) << "\n";
  else
    std::cout << "[\n";

  std::atomic<bool> disagreement{false};
  std::mutex mu;
  std::condition_variable cv;
  std::string error;

  const std::size_t chunk_size = 512;
  const std::size_t chunks = grid.empty() ? 0 : (grid.size() + chunk_size - 1) / chunk_size;
  std::vector<std::string> results(chunks);
  std::vector<char> ready(chunks, 0);
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= chunks) return;
      std::string buf;
      try {
        const std::size_t begin = k * chunk_size;
        const std::size_t end = std::min(grid.size(), begin + chunk_size);
        for (std::size_t i = begin; i < end; ++i) {
          const ClassificationReport report = classify(grid[i], tol);
          if (!report.all_agree()) disagreement = true;
          if (csv) {
            buf += csv_row(grid[i], report);
            buf += '\n';
          } else {
            Json j;
            j["spec"] = spec_to_json(grid[i]);
            j["report"] = report_to_json(report);
            buf += (i ? ",\n" : "") + j.dump();
          }
        }
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        if (error.empty()) error = e.what();
      }
      {
        std::lock_guard lock(mu);
        results[k] = std::move(buf);
        ready[k] = 1;
      }
      cv.notify_all();
    }
  };

  const int nthreads = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);

  for (std::size_t k = 0; k < chunks; ++k) {
    std::unique_lock lock(mu);
    cv.wait(lock, [&] { return ready[k] != 0; });
    std::cout << results[k];
    results[k].clear();
  }
  for (auto& t : pool) t.join();
  if (!csv) std::cout << "\n]\n";
  if (!error.empty()) throw std::domain_error(error);
  return disagreement ? kExitDisagreement : 0;
}

int run_construct_ppt(int n, const std::string& q_file, std::uint64_t seed,
                      bool zero_tuple) {
  QStructure q;
  if (q_file.empty()) {
    q.q_plus = reversal_permutation(n);
  } else {
    std::ifstream in(q_file);
    if (!in) throw std::domain_error("construct-ppt: cannot open " + q_file);
    Json parsed;
    in >> parsed;
    q = qstructure_from_json(parsed);
  }
  // Validation failures (bad Q) are usage errors, not construction failures.
  assemble_Q(q);
  try {
    const PptConstruction out = construct_ppt(n, q, seed, zero_tuple);
    Json j;
    j["n"] = n;
    j["seed"] = seed;
    j["q_structure"] = qstructure_to_json(q);
    j["construction"] = ppt_construction_to_json(out);
    emit(j);
    return 0;
  } catch (const std::runtime_error& e) {
    std::cerr << "construction failed: " << e.what() << "\n";
    return kExitConstruction;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized Choi maps: classification, semigroup evolution, PPT construction"};
  app.require_subcommand(1);
  app.fallthrough();

  double tol = tol::psd;
  if (const char* env = std::getenv("CHOI_DYNAMICS_TOL")) tol = std::atof(env);
  std::string format = "json";
  std::uint64_t seed = 0;
  int jobs = 1;
  app.add_option("--tol", tol, "relative tolerance for spectral verdicts");
  app.add_option("--format", format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", seed, "seed for randomized constructions");
  app.add_option("--jobs", jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);

  std::string family;
  std::vector<double> params;
  bool state = false, normalize = false;

  auto* classify_cmd = app.add_subcommand("classify", "classify a map or state");
  classify_cmd->add_option("family", family, "rho, tau or theta")->required();
  classify_cmd->add_option("params", params, "a b c d (rho/tau) or a c1 c2 c3 (theta)")
      ->expected(4);
  classify_cmd->add_flag("--state", state, "classify the Choi matrix as a state");
  classify_cmd->add_flag("--normalize", normalize, "rescale parameters to a+b+c = 1/3");

  auto* rank_cmd = app.add_subcommand("rank", "choi rank, analytic table vs numerical");
  rank_cmd->add_option("family", family)->required();
  rank_cmd->add_option("params", params)->expected(4);

  auto* schmidt_cmd = app.add_subcommand("schmidt", "schmidt number of a structured density");
  schmidt_cmd->add_option("family", family)->required();
  schmidt_cmd->add_option("params", params)->expected(4);

  std::optional<double> at_time;
  std::vector<double> trajectory;
  bool allow_negative = false;
  auto* evolve_cmd = app.add_subcommand("evolve", "evaluate exp(t * generator)");
  evolve_cmd->add_option("family", family, "rho or tau")->required();
  evolve_cmd->add_option("params", params, "generator a b c d")->expected(4);
  evolve_cmd->add_option("--t", at_time, "evaluation time");
  evolve_cmd->add_option("--trajectory", trajectory, "t_max steps: emit a CSV trajectory")
      ->expected(2);
  evolve_cmd->add_flag("--allow-negative", allow_negative, "permit t < 0 (group extension)");

  auto* transition_cmd =
      app.add_subcommand("transition", "PPT transition time of a rho generator");
  transition_cmd->add_option("params", params, "generator a b c d")->expected(4);

  std::string property = "ppt";
  int schmidt_bound = 2;
  double t_max = 10;
  int steps = 200;
  auto* scan_cmd = app.add_subcommand("scan", "trichotomy scan of a property along t");
  scan_cmd->add_option("family", family, "rho or tau")->required();
  scan_cmd->add_option("params", params, "generator a b c d")->expected(4);
  scan_cmd->add_option("--property", property, "ppt, cp, schmidt-le or separable-proxy");
  scan_cmd->add_option("--r", schmidt_bound, "bound for schmidt-le");
  scan_cmd->add_option("--t-max", t_max, "scan horizon");
  scan_cmd->add_option("--steps", steps, "grid points");

  std::array<std::string, 4> range_text{"0", "0", "0", "0"};
  auto* sweep_cmd = app.add_subcommand("sweep", "classification sweep over a parameter grid");
  sweep_cmd->add_option("family", family)->required();
  sweep_cmd->add_option("--a", range_text[0], "range start:stop:step (or a single value)");
  sweep_cmd->add_option("--b", range_text[1], "second parameter range (c1 for theta)");
  sweep_cmd->add_option("--c", range_text[2], "third parameter range (c2 for theta)");
  sweep_cmd->add_option("--d", range_text[3], "fourth parameter range (c3 for theta)");

  int n = 2;
  std::string q_file;
  bool zero_tuple = false;
  auto* construct_cmd =
      app.add_subcommand("construct-ppt", "build a PPT matrix from a CUET tuple");
  construct_cmd->add_option("n", n, "block grid size")->check(CLI::Range(2, 16));
  construct_cmd->add_option("--q-file", q_file, "Q structure JSON (default: reversal permutation)");
  construct_cmd->add_flag("--zero-tuple", zero_tuple, "use the all-zero tuple");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*classify_cmd) return run_classify(family, params, state, normalize, tol, format);
    if (*rank_cmd) return run_rank(family, params, tol::rank);
    if (*schmidt_cmd) return run_schmidt(family, params);
    if (*evolve_cmd)
      return run_evolve(family, params, at_time, trajectory, allow_negative, tol);
    if (*transition_cmd) return run_transition(params);
    if (*scan_cmd)
      return run_scan(family, params, property, schmidt_bound, t_max, steps, tol);
    if (*sweep_cmd) {
      std::array<Range, 4> ranges;
      for (int i = 0; i < 4; ++i) ranges[i] = parse_range(range_text[i]);
      // Sweeps stream CSV unless JSON is requested explicitly.
      const std::string sweep_format = app.count("--format") ? format : "csv";
      return run_sweep(family, ranges, tol, sweep_format, jobs);
    }
    if (*construct_cmd) return run_construct_ppt(n, q_file, seed, zero_tuple);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return kExitDisagreement;
  }
  return 0;
}
