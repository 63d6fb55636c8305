#include "echoverse/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "echoverse/esn.hpp"
#include "echoverse/lab.hpp"
#include "echoverse/lsm.hpp"
#include "echoverse/qrc.hpp"
#include "echoverse/signals.hpp"

namespace echoverse::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open file `" + path + "`");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot write file `" + path.string() + "`");
  }
  out << content;
}

/// Parse a config file, rewriting json parse errors into `file:line: ...`.
json parse_config(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') ++line;
    }
    throw ConfigError(path + ":" + std::to_string(line) + ": " + e.what());
  }
}

int thread_cap() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  int cap = static_cast<int>(hw);
  if (const char* env = std::getenv("ECHOVERSE_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed >= 1) cap = std::min(cap, parsed);
  }
  return cap;
}

struct CommonOptions {
  std::string config;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_given = false;
  double tolerance = 1e-9;
  bool quiet = false;
};

int do_run(const CommonOptions& opt, std::ostream& out) {
  const json config = parse_config(opt.config);
  if (!config.contains("experiment")) {
    throw ConfigError(opt.config + ": missing `experiment` object");
  }
  lab::ExperimentSpec spec;
  try {
    spec = lab::ExperimentSpec::from_json(config.at("experiment"));
  } catch (const json::exception& e) {
    throw ConfigError(opt.config + ": experiment: " + e.what());
  } catch (const ValidationError& e) {
    throw ConfigError(opt.config + ": experiment: " + e.what());
  }
  if (opt.seed_given) spec.seed = opt.seed;

  const auto reports = lab::approximation_experiment(spec, thread_cap());
  const auto medians = lab::median_test_nrmse(spec, reports);

  json summary;
  summary["experiment"] = spec.to_json();
  summary["median_test_nrmse"] = medians;
  summary["runs"] = reports.size();
  write_file(fs::path(opt.out_dir) / "reports.csv", lab::reports_to_csv(reports));
  write_file(fs::path(opt.out_dir) / "summary.json", summary.dump(2) + "\n");

  if (!opt.quiet) {
    for (std::size_t i = 0; i < spec.ladder.size(); ++i) {
      out << "capacity=" << spec.ladder[i]
          << " median_test_nrmse=" << format("%.6g", medians[i]) << "\n";
    }
    out << "wrote " << (fs::path(opt.out_dir) / "reports.csv").string() << "\n";
  }
  return kExitOk;
}

class Report {
 public:
  Report(std::ostream& out, bool quiet) : out_(out), quiet_(quiet) {}

  void line(const std::string& name, bool pass, const std::string& detail = "") {
    all_pass_ = all_pass_ && pass;
    if (!quiet_) {
      out_ << name << ": " << (pass ? "pass" : "fail");
      if (!detail.empty()) out_ << " " << detail;
      out_ << "\n";
    }
  }

  void note(const std::string& name, const std::string& detail) {
    if (!quiet_) out_ << name << ": " << detail << "\n";
  }

  int exit_code() const { return all_pass_ ? kExitOk : kExitFailure; }

 private:
  std::ostream& out_;
  bool quiet_;
  bool all_pass_ = true;
};

int validate_esn(const json& j, const CommonOptions& opt, std::ostream& out) {
  Report report(out, opt.quiet);
  esn::EsnSystem sys;
  try {
    sys = esn::EsnSystem::from_json(j);
  } catch (const Error& e) {
    report.line("shapes", false, std::string("(") + e.what() + ")");
    return report.exit_code();
  }
  report.line("shapes", true,
              "(N=" + std::to_string(sys.reservoir_size()) +
                  ", n=" + std::to_string(sys.input_dim()) + ")");
  const esn::EspMargins margins = esn::esp_margins(sys);
  report.line("ESP condition (L*rho(A) < 1)", margins.spectral < 1.0,
              "(" + format("%.6g", margins.spectral) + ")");
  if (margins.spectral < 1.0 && margins.operator_nrm >= 1.0) {
    report.note("one-step contraction (L*||A|| < 1)",
                "warn (" + format("%.6g", margins.operator_nrm) +
                    ") paper-criterion pass, one-step contraction fail");
  } else {
    report.line("one-step contraction (L*||A|| < 1)", margins.operator_nrm < 1.0,
                "(" + format("%.6g", margins.operator_nrm) + ")");
  }
  return report.exit_code();
}

int validate_qrc(const json& j, const CommonOptions& opt, std::ostream& out) {
  Report report(out, opt.quiet);
  qrc::QrcSystem sys;
  try {
    sys = qrc::QrcSystem::from_json(j);
  } catch (const Error& e) {
    report.line("shapes", false, std::string("(") + e.what() + ")");
    return report.exit_code();
  }
  report.line("shapes", true, "(N=" + std::to_string(sys.n_qubits) + ")");
  const Eigen::MatrixXcd h = sys.hamiltonian.matrix();
  const double herm = (h - h.adjoint()).cwiseAbs().maxCoeff();
  report.line("hamiltonian hermiticity", herm <= opt.tolerance,
              "(residual " + format("%.3g", herm) + ")");
  const Eigen::MatrixXd& u = sys.channel;
  const double ortho = (u.transpose() * u -
                        Eigen::MatrixXd::Identity(u.rows(), u.cols()))
                           .cwiseAbs()
                           .maxCoeff();
  report.line("channel orthogonality", ortho <= opt.tolerance,
              "(residual " + format("%.3g", ortho) + ")");
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(u.rows());
  e0(0) = 1.0;
  const double fixed = (u * e0 - e0).cwiseAbs().maxCoeff();
  report.line("trace row fixed", fixed <= opt.tolerance,
              "(residual " + format("%.3g", fixed) + ")");
  return report.exit_code();
}

int validate_qrc_state(const json& j, const CommonOptions& opt, std::ostream& out) {
  Report report(out, opt.quiet);
  const int n = j.at("n_qubits").get<int>();
  const auto values = j.at("r").get<std::vector<double>>();
  if (static_cast<int>(values.size()) != qrc::pauli_dim(n)) {
    report.line("length", false,
                "(expected " + std::to_string(qrc::pauli_dim(n)) + " components)");
    return report.exit_code();
  }
  report.line("length", true);
  const Eigen::VectorXd r =
      Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  const qrc::StateDiagnostics d = qrc::validate_state(r, n);
  report.line("trace", d.trace_ok(opt.tolerance),
              "(expected " + format("%.6g", d.expected_trace) + ", got " +
                  format("%.6g", d.trace_component) + ")");
  report.line("hermiticity", d.hermiticity_residual <= opt.tolerance,
              "(residual " + format("%.3g", d.hermiticity_residual) + ")");
  report.line("positivity", d.positive_ok(opt.tolerance),
              "(min eigenvalue " + format("%.6g", d.min_eigenvalue) + ")");
  return report.exit_code();
}

int validate_spikes(const std::string& text, const CommonOptions& opt, std::ostream& out) {
  Report report(out, opt.quiet);
  double delta = 0.0, horizon = 0.0;
  if (std::sscanf(text.c_str(), "# delta=%lf horizon=%lf", &delta, &horizon) != 2) {
    throw ConfigError("spike file: missing `# delta=<D> horizon=<T>` header");
  }
  std::vector<double> times;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    char* end = nullptr;
    const double t = std::strtod(line.c_str(), &end);
    if (end == line.c_str()) {
      throw ConfigError("spike file: bad spike time `" + line + "`");
    }
    times.push_back(t);
  }
  bool ordered = true, refractory_ok = true, in_horizon = true;
  std::string pair_detail, horizon_detail;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] > 0.0 || times[i] < -horizon) {
      in_horizon = false;
      horizon_detail = "(" + format("%g", times[i]) + ")";
    }
    if (i > 0) {
      if (times[i] <= times[i - 1]) ordered = false;
      if (times[i] - times[i - 1] <= delta && pair_detail.empty()) {
        refractory_ok = false;
        pair_detail =
            "(pair " + format("%g", times[i - 1]) + ", " + format("%g", times[i]) + ")";
      }
    }
  }
  report.line("ordering", ordered);
  report.line("refractory", refractory_ok, pair_detail);
  report.line("horizon", in_horizon, horizon_detail);
  return report.exit_code();
}

int validate_orbit_csv(const std::string& text, const CommonOptions& opt,
                       std::ostream& out) {
  Report report(out, opt.quiet);
  try {
    const Orbit orbit = Orbit::from_csv(text);
    report.line("shape", true,
                "(dim " + std::to_string(orbit.dim()) + ", length " +
                    std::to_string(orbit.length()) + ", bound " +
                    format("%.6g", orbit.bound()) + ")");
  } catch (const Error& e) {
    report.line("shape", false, std::string("(") + e.what() + ")");
  }
  return report.exit_code();
}

int do_validate(const std::string& subject, const CommonOptions& opt, std::ostream& out) {
  const std::string text = read_file(subject);
  if (text.rfind("# delta=", 0) == 0) {
    return validate_spikes(text, opt, out);
  }
  if (text.rfind("t,", 0) == 0) {
    return validate_orbit_csv(text, opt, out);
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(subject + ": not a spike file, orbit csv, or json document (" +
                      e.what() + ")");
  }
  const std::string type = j.value("type", "");
  if (type == "esn") return validate_esn(j, opt, out);
  if (type == "qrc") return validate_qrc(j, opt, out);
  if (type == "qrc_state") return validate_qrc_state(j, opt, out);
  throw ConfigError(subject + ": unknown subject type `" + type + "`");
}

int do_probe(const CommonOptions& opt, std::ostream& out) {
  const json config = parse_config(opt.config);
  if (!config.contains("probe")) {
    throw ConfigError(opt.config + ": missing `probe` object");
  }
  const json& p = config.at("probe");
  const std::string kind = p.value("kind", "");
  const std::uint64_t seed = opt.seed_given ? opt.seed : p.value("seed", 0ULL);

  if (kind == "separation") {
    const lab::Family family = lab::family_from_string(p.value("family", "esn"));
    const int npairs = p.value("pairs", 10);
    const int instances = p.value("instances", 8);
    const int length = p.value("length", 40);
    std::vector<std::pair<Orbit, Orbit>> pairs;
    for (int i = 0; i < npairs; ++i) {
      Rng rng(Rng::derive(seed, {0x70616972, static_cast<std::uint64_t>(i)}));
      if (family == lab::Family::Qrc) {
        pairs.emplace_back(random_scalar_orbit(rng, length, 0.0, 1.0),
                           random_scalar_orbit(rng, length, 0.0, 1.0));
      } else {
        pairs.emplace_back(random_orbit(rng, 1, length, 1.0),
                           random_orbit(rng, 1, length, 1.0));
      }
    }
    const auto gaps = lab::separation_probe(family, pairs, instances, seed);
    std::string csv = "pair,max_gap,witness_instance\n";
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      csv += std::to_string(i) + "," + format("%.17g", gaps[i].max_gap) + "," +
             std::to_string(gaps[i].witness_instance) + "\n";
    }
    write_file(fs::path(opt.out_dir) / "separation.csv", csv);
    if (!opt.quiet) out << "wrote separation.csv (" << gaps.size() << " pairs)\n";
    return kExitOk;
  }

  if (kind == "fading") {
    const FadingFunction omega = p.contains("omega")
                                     ? FadingFunction::from_json(p.at("omega"))
                                     : FadingFunction::exponential(0.1);
    const int samples = p.value("samples", 200);
    const int length = p.value("length", 64);
    const std::string which = p.value("functional", "last");
    Functional h;
    if (which == "last") {
      h.name = "last";
      h.eval = [](const Orbit& u) { return u.scalar_at(0); };
    } else if (which == "sum") {
      h.name = "sum";
      h.eval = [](const Orbit& u) { return u.values().row(0).sum(); };
    } else if (which == "delayed") {
      const int delay = p.value("delay", 20);
      h.name = "delayed";
      h.eval = [delay](const Orbit& u) {
        return -delay >= -(u.length() - 1) ? u.scalar_at(-delay) : 0.0;
      };
    } else {
      throw ConfigError("probe: unknown functional `" + which + "`");
    }
    const auto table = estimate_fading_modulus(h, omega, samples, seed, length);
    std::string csv = "distance,gap\n";
    for (const auto& s : table) {
      csv += format("%.17g", s.distance) + "," + format("%.17g", s.gap) + "\n";
    }
    write_file(fs::path(opt.out_dir) / "fading.csv", csv);
    if (!opt.quiet) out << "wrote fading.csv (" << table.size() << " samples)\n";
    return kExitOk;
  }

  if (kind == "esp") {
    const int size = p.value("size", 10);
    const double rho = p.value("spectral_radius", 0.8);
    const int steps = p.value("steps", 60);
    Rng rng(Rng::derive(seed, {0x657370}));
    esn::EsnDraw draw;
    draw.spectral_radius = rho;
    const esn::EsnSystem sys = esn::make_random_esn(size, 1, rng, draw);
    const Orbit input = random_orbit(rng, 1, steps, 1.0);
    Eigen::VectorXd x0a(size), x0b(size);
    for (int i = 0; i < size; ++i) {
      x0a(i) = rng.uniform(-1.0, 1.0);
      x0b(i) = rng.uniform(-1.0, 1.0);
    }
    const auto distances = esn::esp_convergence_test(sys, input, x0a, x0b);
    std::string csv = "step,distance\n";
    for (std::size_t i = 0; i < distances.size(); ++i) {
      csv += std::to_string(i) + "," + format("%.17g", distances[i]) + "\n";
    }
    write_file(fs::path(opt.out_dir) / "esp.csv", csv);
    const esn::EspMargins margins = esn::esp_margins(sys);
    if (!opt.quiet) {
      out << "L*rho(A)=" << format("%.6g", margins.spectral)
          << " L*||A||=" << format("%.6g", margins.operator_nrm) << "\n";
      out << "wrote esp.csv (" << distances.size() << " steps)\n";
    }
    return kExitOk;
  }

  throw ConfigError(opt.config + ": unknown probe kind `" + kind + "`");
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"echoverse: reservoir-computing simulation bench"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string subject;

  CLI::App* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("--config", opt.config, "experiment config (json)")->required();
  run->add_option("--out", opt.out_dir, "output directory");
  run->add_option("--seed", opt.seed, "override the config seed");
  run->add_option("--tolerance", opt.tolerance, "tolerance override");
  run->add_flag("--quiet", opt.quiet, "suppress progress lines");

  CLI::App* validate = app.add_subcommand("validate", "check a serialized subject");
  validate->add_option("subject", subject, "system / state / spike / orbit file")->required();
  validate->add_option("--tolerance", opt.tolerance, "residual tolerance");
  validate->add_flag("--quiet", opt.quiet, "suppress per-invariant lines");

  CLI::App* probe = app.add_subcommand("probe", "run a diagnostic probe config");
  probe->add_option("--config", opt.config, "probe config (json)")->required();
  probe->add_option("--out", opt.out_dir, "output directory");
  probe->add_option("--seed", opt.seed, "override the config seed");
  probe->add_flag("--quiet", opt.quiet, "suppress progress lines");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  opt.seed_given = run->count("--seed") > 0 || probe->count("--seed") > 0;

  try {
    if (app.got_subcommand(run)) return do_run(opt, out);
    if (app.got_subcommand(validate)) return do_validate(subject, opt, out);
    if (app.got_subcommand(probe)) return do_probe(opt, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace echoverse::cli
