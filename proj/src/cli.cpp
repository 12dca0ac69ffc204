#include "qlearn/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <regex>
#include <sstream>

#include "qlearn/oracle.hpp"
#include "qlearn/povm.hpp"

namespace qlearn::cli {

namespace {

using nlohmann::ordered_json;

struct ScenarioArgs {
  std::string name = "fixed-purity";
  double r1 = 1.0;
  double r2 = 1.0;
  std::string theta = "pi/3";
  int d = 2;
};

struct CommonArgs {
  std::string format = "csv";
  std::string output;
  int threads = 0;
};

void add_scenario_options(CLI::App* cmd, ScenarioArgs& args, bool allow_all) {
  std::vector<std::string> names = {"fixed-purity", "hard-sphere", "fixed-overlap",
                                    "fixed-overlap-dim"};
  if (allow_all) names.push_back("all");
  cmd->add_option("--scenario", args.name, "Prior scenario")
      ->check(CLI::IsMember(names))
      ->capture_default_str();
  cmd->add_option("--r1", args.r1, "Bloch length of the first template")->capture_default_str();
  cmd->add_option("--r2", args.r2, "Bloch length of the second template")->capture_default_str();
  cmd->add_option("--theta", args.theta, "Template angle, e.g. pi/3")->capture_default_str();
  cmd->add_option("--d", args.d, "Hilbert-space dimension")->capture_default_str();
}

void add_common_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--format", args.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("-o,--output", args.output, "Output file (default: standard output)");
  cmd->add_option("--threads", args.threads, "Worker threads (default: QLEARN_THREADS or 1)");
}

PriorScenario make_scenario(const ScenarioArgs& args) {
  PriorScenario s;
  if (args.name == "fixed-purity") {
    s = FixedPurities{args.r1, args.r2};
  } else if (args.name == "hard-sphere") {
    s = HardSphere{};
  } else if (args.name == "fixed-overlap") {
    s = FixedOverlap{parse_angle(args.theta)};
  } else if (args.name == "fixed-overlap-dim") {
    s = FixedOverlapDim{parse_angle(args.theta), args.d};
  } else {
    throw UsageError("unknown scenario " + args.name);
  }
  try {
    validate(s);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return s;
}

// Writes to the output file or to `out`; LF line endings in either case.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot open output file " + path);
  file << text;
}

double rounded(double v) {
  if (!std::isfinite(v)) return v;
  return std::stod(format_number(v));
}

ordered_json scenario_json(const PriorScenario& scenario) {
  ordered_json j;
  std::visit(
      [&j](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FixedPurities>) {
          j = {{"kind", "fixed-purity"}, {"r1", s.r1}, {"r2", s.r2}};
        } else if constexpr (std::is_same_v<T, HardSphere>) {
          j = {{"kind", "hard-sphere"}};
        } else if constexpr (std::is_same_v<T, FixedOverlap>) {
          j = {{"kind", "fixed-overlap"}, {"theta", rounded(s.theta)}};
        } else {
          j = {{"kind", "fixed-overlap-dim"}, {"theta", rounded(s.theta)}, {"d", s.d}};
        }
      },
      scenario);
  return j;
}

ordered_json report_json(const ErrorReport& r) {
  ordered_json j;
  j["n"] = r.n;
  j["scenario"] = scenario_json(r.scenario);
  j["p_exact"] = rounded(r.p_exact);
  j["p_asymptotic"] = r.p_asymptotic ? ordered_json(rounded(*r.p_asymptotic)) : ordered_json();
  j["helstrom"] = rounded(r.helstrom);
  j["excess_risk"] = rounded(r.excess_risk);
  return j;
}

int cmd_perr(const ScenarioArgs& sargs, const CommonArgs& common, const std::string& n_text,
             bool truncate, std::ostream& out) {
  const PriorScenario scenario = make_scenario(sargs);
  const NRange range = parse_n_range(n_text);
  EngineOptions options;
  options.truncate = truncate;
  options.threads = common.threads;
  std::vector<ErrorReport> rows;
  for (int n : range.values()) rows.push_back(p_err_min(n, scenario, options));
  if (common.format == "json") {
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) arr.push_back(report_json(r));
    emit(common.output, arr.dump(2) + "\n", out);
  } else {
    emit(common.output, perr_csv(rows), out);
  }
  return kExitOk;
}

struct OracleRow {
  int n;
  PriorScenario scenario;
  double engine;
  double oracle;
};

int cmd_oracle(const ScenarioArgs& sargs, const CommonArgs& common, const std::string& n_text,
               double tolerance, std::ostream& out, std::ostream& err) {
  const NRange range = parse_n_range(n_text);
  if (range.end > 2) throw UsageError("the dense oracle supports n <= 2 only");
  std::vector<PriorScenario> scenarios;
  if (sargs.name == "all") {
    constexpr double pi = std::numbers::pi;
    scenarios = {FixedPurities{0.75, 0.5}, FixedPurities{0.9, 0.9}, FixedPurities{1.0, 1.0},
                 HardSphere{},             FixedOverlap{pi / 6},    FixedOverlap{pi / 3},
                 FixedOverlap{pi / 2}};
  } else {
    scenarios = {make_scenario(sargs)};
  }
  std::vector<OracleRow> rows;
  for (const auto& s : scenarios) {
    for (int n : range.values()) rows.push_back({n, s, p_err_exact(n, s), p_err_oracle(n, s)});
  }
  bool ok = true;
  std::ostringstream text;
  if (common.format == "json") {
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
      const double diff = std::abs(r.engine - r.oracle);
      ok = ok && diff <= tolerance;
      arr.push_back({{"n", r.n},
                     {"scenario", scenario_json(r.scenario)},
                     {"p_engine", rounded(r.engine)},
                     {"p_oracle", rounded(r.oracle)},
                     {"abs_diff", rounded(diff)},
                     {"pass", diff <= tolerance}});
    }
    text << arr.dump(2) << "\n";
  } else {
    text << "n,scenario,p_engine,p_oracle,abs_diff\n";
    for (const auto& r : rows) {
      const double diff = std::abs(r.engine - r.oracle);
      ok = ok && diff <= tolerance;
      text << r.n << ",\"" << describe(r.scenario) << "\"," << format_number(r.engine) << ","
           << format_number(r.oracle) << "," << format_number(diff) << "\n";
    }
  }
  emit(common.output, text.str(), out);
  if (!ok) {
    err << "oracle disagreement above " << format_number(tolerance) << "\n";
    return kExitVerificationFailed;
  }
  return kExitOk;
}

struct SimulateArgs {
  std::string noise = "none";
  std::vector<double> p_depol = {0.0};
  std::vector<double> t_values;
  double t1 = 0.0;
  double t2 = 0.0;
  double duration_1q = 200.0;
  double duration_2q = 800.0;
  int layers = 43;
  int theta_points = 25;
  std::int64_t shots = 256;
  std::uint64_t seed = 1;
};

std::string simulate_table(const SimulateArgs& args, const NoiseModel& noise,
                           const CommonArgs& common) {
  std::vector<std::pair<double, SimulationResult>> rows;
  for (int k = 0; k < args.theta_points; ++k) {
    const double theta =
        args.theta_points == 1 ? 0.0 : std::numbers::pi * k / (args.theta_points - 1);
    rows.emplace_back(theta,
                      simulate_misclassification(theta, args.shots, noise, args.seed,
                                                 common.threads));
  }
  std::ostringstream text;
  if (common.format == "json") {
    ordered_json arr = ordered_json::array();
    for (const auto& [theta, r] : rows) {
      arr.push_back({{"theta", rounded(theta)},
                     {"frequency", rounded(r.frequency)},
                     {"stderr", rounded(r.stderr_)},
                     {"p_closed_form", rounded(p_err_n1_closed_form(theta))}});
    }
    text << arr.dump(2) << "\n";
  } else {
    text << "theta,frequency,stderr,p_closed_form\n";
    for (const auto& [theta, r] : rows) {
      text << format_number(theta) << "," << format_number(r.frequency) << ","
           << format_number(r.stderr_) << "," << format_number(p_err_n1_closed_form(theta))
           << "\n";
    }
  }
  return text.str();
}

std::string sweep_path(const std::string& path, const std::string& key, double value) {
  const std::filesystem::path p(path);
  std::string tag = format_number(value);
  for (char& c : tag) {
    if (c == '-') c = 'm';
  }
  const std::string name = p.stem().string() + "_" + key + tag + p.extension().string();
  return (p.parent_path() / name).string();
}

int cmd_simulate(const SimulateArgs& args, const CommonArgs& common, std::ostream& out) {
  if (args.shots < 1) throw UsageError("--shots must be positive");
  if (args.theta_points < 1) throw UsageError("--theta-points must be positive");
  NoiseModel base;
  base.duration_1q = args.duration_1q;
  base.duration_2q = args.duration_2q;
  base.layer_count = args.layers;

  // (sweep key, value, model) per output table.
  std::vector<std::tuple<std::string, double, NoiseModel>> runs;
  if (args.noise == "none") {
    runs.emplace_back("", 0.0, base);
  } else if (args.noise == "depolarizing") {
    for (double p : args.p_depol) {
      NoiseModel m = base;
      m.kind = NoiseKind::Depolarizing;
      m.p_depol = p;
      runs.emplace_back("p", p, m);
    }
  } else {
    if (!args.t_values.empty()) {
      for (double t : args.t_values) {
        NoiseModel m = base;
        m.kind = NoiseKind::Thermal;
        m.t1 = t;
        m.t2 = t;
        runs.emplace_back("T", t, m);
      }
    } else {
      NoiseModel m = base;
      m.kind = NoiseKind::Thermal;
      m.t1 = args.t1;
      m.t2 = args.t2;
      runs.emplace_back("T", args.t1, m);
    }
  }
  for (const auto& r : runs) {
    try {
      std::get<2>(r).validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (runs.size() > 1 && common.output.empty()) {
    throw UsageError("a noise sweep writes one file per value; pass --output");
  }
  for (const auto& [key, value, model] : runs) {
    const std::string path =
        runs.size() > 1 ? sweep_path(common.output, key, value) : common.output;
    emit(path, simulate_table(args, model, common), out);
  }
  return kExitOk;
}

int cmd_spectrum(const ScenarioArgs& sargs, const CommonArgs& common, int n, std::ostream& out,
                 std::ostream& err) {
  if (n < 1 || n > kSpectrumCommandCap) {
    throw UsageError("spectrum needs 1 <= n <= " + std::to_string(kSpectrumCommandCap));
  }
  const PriorScenario scenario = make_scenario(sargs);
  const std::vector<SpectrumEntry> entries = spectrum_report(n, scenario);
  std::vector<double> weighted;
  BigCount total = 0;
  for (const auto& e : entries) {
    weighted.push_back(e.weighted());
    total += e.multiplicity;
  }
  const double trace_sum = stable_sum(weighted);
  std::ostringstream text;
  if (common.format == "json") {
    ordered_json j;
    j["n"] = n;
    j["scenario"] = scenario_json(scenario);
    j["total_multiplicity"] = to_string(total);
    j["trace_sum"] = rounded(trace_sum);
    ordered_json arr = ordered_json::array();
    for (const auto& e : entries) {
      arr.push_back({{"s", e.sector.s.str()},
                     {"t", e.sector.t.str()},
                     {"q", e.sector.q.str()},
                     {"case", to_string(e.sector.case_tag)},
                     {"branch", to_string(e.branch)},
                     {"eigenvalue", rounded(e.eigenvalue)},
                     {"multiplicity", to_string(e.multiplicity)},
                     {"scale", rounded(e.scale.value())},
                     {"weighted", rounded(e.weighted())}});
    }
    j["entries"] = std::move(arr);
    text << j.dump(2) << "\n";
  } else {
    text << "s,t,q,case,branch,eigenvalue,multiplicity,scale,weighted\n";
    for (const auto& e : entries) {
      text << e.sector.s.str() << "," << e.sector.t.str() << "," << e.sector.q.str() << ","
           << to_string(e.sector.case_tag) << "," << to_string(e.branch) << ","
           << format_number(e.eigenvalue) << "," << to_string(e.multiplicity) << ","
           << format_number(e.scale.value()) << "," << format_number(e.weighted()) << "\n";
    }
    err << "total_multiplicity=" << to_string(total)
        << " trace_sum=" << format_number(trace_sum) << "\n";
  }
  emit(common.output, text.str(), out);
  return kExitOk;
}

}  // namespace

std::vector<int> NRange::values() const {
  std::vector<int> v;
  for (int n = start; n <= end; n += step) v.push_back(n);
  return v;
}

NRange parse_n_range(const std::string& text) {
  static const std::regex re(R"(^\s*(\d+)(?::(\d+)(?::(\d+))?)?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw UsageError("invalid n range: " + text);
  NRange r;
  try {
    r.start = std::stoi(m[1]);
    r.end = m[2].matched ? std::stoi(m[2]) : r.start;
    r.step = m[3].matched ? std::stoi(m[3]) : 1;
  } catch (const std::exception&) {
    throw UsageError("invalid n range: " + text);
  }
  if (r.start < 1 || r.end < r.start || r.step < 1) throw UsageError("empty n range: " + text);
  return r;
}

double parse_angle(const std::string& text) {
  static const std::regex pi_re(
      R"(^\s*([+-]?)\s*(\d+(?:\.\d*)?|\.\d+)?\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, pi_re)) {
    long double num = m[2].matched ? std::stold(m[2]) : 1.0L;
    const long double den = m[3].matched ? std::stold(m[3]) : 1.0L;
    if (den == 0.0L) throw UsageError("invalid angle: " + text);
    if (m[1] == "-") num = -num;
    return static_cast<double>(num * std::numbers::pi_v<long double> / den);
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (text.find_first_not_of(" \t", used) != std::string::npos) throw UsageError("");
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid angle: " + text);
  }
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string perr_csv(const std::vector<ErrorReport>& rows) {
  std::ostringstream text;
  text << "n,p_exact,p_asymptotic,helstrom,excess_risk\n";
  for (const auto& r : rows) {
    text << r.n << "," << format_number(r.p_exact) << ","
         << (r.p_asymptotic ? format_number(*r.p_asymptotic) : std::string()) << ","
         << format_number(r.helstrom) << "," << format_number(r.excess_risk) << "\n";
  }
  return text.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimal error of optimal quantum learning machines for two qubit templates"};
  app.require_subcommand(1);

  ScenarioArgs sargs;
  CommonArgs common;

  auto* perr = app.add_subcommand("perr", "Exact, asymptotic and Helstrom error over an n range");
  std::string n_text = "1:30";
  bool truncate = false;
  add_scenario_options(perr, sargs, false);
  add_common_options(perr, common);
  perr->add_option("--n", n_text, "n range a:b[:step]")->capture_default_str();
  perr->add_flag("--truncate", truncate, "Drop negligible sectors for n above 200");

  auto* oracle = app.add_subcommand("oracle", "Compare the engine with the dense oracle");
  std::string oracle_n = "1:2";
  double tolerance = 1e-8;
  add_scenario_options(oracle, sargs, true);
  add_common_options(oracle, common);
  oracle->add_option("--n", oracle_n, "n range within 1:2")->capture_default_str();
  oracle->add_option("--tolerance", tolerance, "Allowed |difference|")->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Shot simulation of the n = 1 measurement");
  SimulateArgs sim;
  add_common_options(simulate, common);
  simulate->add_option("--noise", sim.noise, "Noise model")
      ->check(CLI::IsMember({"none", "depolarizing", "thermal"}))
      ->capture_default_str();
  simulate->add_option("--p-depol", sim.p_depol, "Depolarizing probabilities per layer")
      ->delimiter(',');
  simulate->add_option("--t", sim.t_values, "Relaxation times with T1 = T2 = T")->delimiter(',');
  simulate->add_option("--t1", sim.t1, "T1");
  simulate->add_option("--t2", sim.t2, "T2");
  simulate->add_option("--duration-1q", sim.duration_1q, "One-qubit gate time")
      ->capture_default_str();
  simulate->add_option("--duration-2q", sim.duration_2q, "Two-qubit gate time (one layer)")
      ->capture_default_str();
  simulate->add_option("--layers", sim.layers, "Noise layers")->capture_default_str();
  simulate->add_option("--theta-points", sim.theta_points, "Points on [0, pi]")
      ->capture_default_str();
  simulate->add_option("--shots", sim.shots, "Shots per angle")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();

  auto* spectrum = app.add_subcommand("spectrum", "Dump every block eigenvalue");
  int spectrum_n = 1;
  add_scenario_options(spectrum, sargs, false);
  add_common_options(spectrum, common);
  spectrum->add_option("--n", spectrum_n, "Training-set size")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*perr) return cmd_perr(sargs, common, n_text, truncate, out);
    if (*oracle) return cmd_oracle(sargs, common, oracle_n, tolerance, out, err);
    if (*simulate) return cmd_simulate(sim, common, out);
    if (*spectrum) return cmd_spectrum(sargs, common, spectrum_n, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace qlearn::cli
