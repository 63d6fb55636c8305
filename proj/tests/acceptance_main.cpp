// Acceptance suite: runs every project acceptance criterion end to end and
// prints one pass/fail line per criterion. Exit code 0 iff all selected
// criteria pass. Usage: echoverse_acceptance [criterion-number]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "echoverse/cli.hpp"
#include "echoverse/esn.hpp"
#include "echoverse/lab.hpp"
#include "echoverse/lsm.hpp"
#include "echoverse/qrc.hpp"
#include "echoverse/signals.hpp"
#include "oracles.hpp"

using namespace echoverse;

namespace {

struct AcceptanceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& detail) {
  if (!condition) throw AcceptanceFailure(detail);
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. metric axioms for d_w (exact sums) and d^c_w (quadrature)
// ---------------------------------------------------------------------------
void criterion_1() {
  const FadingFunction omega = FadingFunction::exponential(0.1);
  for (int i = 0; i < 1000; ++i) {
    Rng rng(Rng::derive(101, {static_cast<std::uint64_t>(i)}));
    const Orbit u = random_orbit(rng, 2, 32, 1.0);
    const Orbit v = random_orbit(rng, 2, 32, 1.0);
    const Orbit z = random_orbit(rng, 2, 32, 1.0);
    const double duv = fading_distance(u, v, omega);
    require(duv >= 0.0, "d_w negativity");
    require(duv > 0.0, "d_w zero on distinct orbits");
    require(fading_distance(u, u, omega) == 0.0, "d_w identity");
    require(duv == fading_distance(v, u, omega), "d_w symmetry");
    require(fading_distance(u, z, omega) <=
                duv + fading_distance(v, z, omega) + 1e-12,
            "d_w triangle inequality");
  }

  const FadingFunction spike_omega = FadingFunction::exponential(1.0);
  for (int i = 0; i < 1000; ++i) {
    Rng rng(Rng::derive(102, {static_cast<std::uint64_t>(i)}));
    const lsm::SpikeTrain u = lsm::random_spike_train(rng, 0.5, 15.0, 1.0);
    const lsm::SpikeTrain v = lsm::random_spike_train(rng, 0.5, 15.0, 1.0);
    const lsm::SpikeTrain z = lsm::random_spike_train(rng, 0.5, 15.0, 1.0);
    const double duv = lsm::spike_distance(u, v, spike_omega);
    require(duv >= 0.0, "d^c_w negativity");
    require(u.times == v.times || duv > 0.0, "d^c_w zero on distinct trains");
    require(lsm::spike_distance(u, u, spike_omega) == 0.0, "d^c_w identity");
    require(duv == lsm::spike_distance(v, u, spike_omega), "d^c_w symmetry");
    require(lsm::spike_distance(u, z, spike_omega) <=
                duv + lsm::spike_distance(v, z, spike_omega) + 1e-9,
            "d^c_w triangle inequality");
  }
}

// ---------------------------------------------------------------------------
// 2. filter/functional duality round trips
// ---------------------------------------------------------------------------
void criterion_2() {
  for (const Filter& b : builtin_filters()) {
    const Functional h = filter_to_functional(b);
    const Filter filter_round = functional_to_filter(h);
    const Functional functional_round = filter_to_functional(filter_round);
    for (int i = 0; i < 100; ++i) {
      Rng rng(Rng::derive(201, {static_cast<std::uint64_t>(i)}));
      const Orbit u = random_orbit(rng, 1, 1 + (i % 32), 1.5);
      require(b.eval(u) == filter_round.eval(u),
              "B == B_{H_B} failed for " + b.name);
      require(h.eval(u) == functional_round.eval(u),
              "H == H_{B_H} failed for " + b.name);
    }
  }
}

// ---------------------------------------------------------------------------
// 3. ESN polynomial-algebra closure under direct sums
// ---------------------------------------------------------------------------
void criterion_3() {
  for (int trial = 0; trial < 50; ++trial) {
    Rng rng(Rng::derive(301, {static_cast<std::uint64_t>(trial)}));
    esn::EsnDraw draw;
    draw.spectral_radius = rng.uniform(0.3, 0.9);
    esn::EsnSystem s1 = esn::make_random_esn(rng.uniform_int(1, 5), 1, rng, draw);
    draw.spectral_radius = rng.uniform(0.3, 0.9);
    esn::EsnSystem s2 = esn::make_random_esn(rng.uniform_int(1, 5), 1, rng, draw);
    s1.readout = Polynomial::random(s1.reservoir_size(), 2, 4, rng);
    s2.readout = Polynomial::random(s2.reservoir_size(), 2, 4, rng);
    const double lambda = rng.uniform(-2.0, 2.0);
    const Orbit u = random_orbit(rng, 1, 60, 1.0);

    const auto r1 = esn::run_esn(s1, u, 10);
    const auto r2 = esn::run_esn(s2, u, 10);
    const auto sum = esn::run_esn(esn::esn_sum(s1, s2, lambda), u, 10);
    const auto prod = esn::run_esn(esn::esn_product(s1, s2), u, 10);

    const double sum_err =
        (sum.outputs.values() - (r1.outputs.values() + lambda * r2.outputs.values()))
            .cwiseAbs()
            .maxCoeff();
    const double prod_err =
        (prod.outputs.values() - r1.outputs.values().cwiseProduct(r2.outputs.values()))
            .cwiseAbs()
            .maxCoeff();
    require(sum_err <= 1e-12, "sum closure error " + fmt(sum_err));
    require(prod_err <= 1e-12, "product closure error " + fmt(prod_err));

    const double rho_combined =
        esn::spectral_radius(esn::esn_product(s1, s2).reservoir);
    const double rho_max = std::max(esn::spectral_radius(s1.reservoir),
                                    esn::spectral_radius(s2.reservoir));
    require(std::abs(rho_combined - rho_max) <= 1e-10,
            "direct-sum spectral radius " + fmt(rho_combined) + " vs " + fmt(rho_max));
  }
}

// ---------------------------------------------------------------------------
// 4. guaranteed two-trajectory decay under operator-norm contraction
// ---------------------------------------------------------------------------
void criterion_4() {
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(Rng::derive(401, {static_cast<std::uint64_t>(trial)}));
    const int n = rng.uniform_int(2, 10);
    esn::EsnSystem sys = esn::make_random_esn(n, 1, rng);
    sys.reservoir *= 0.8 / esn::operator_norm(sys.reservoir);
    require(esn::esp_margins(sys).operator_nrm <= 0.8 + 1e-12, "rescaling failed");

    Eigen::VectorXd x0a(n), x0b(n);
    for (int i = 0; i < n; ++i) {
      x0a(i) = rng.uniform(-1.0, 1.0);
      x0b(i) = rng.uniform(-1.0, 1.0);
    }
    const Orbit u = random_orbit(rng, 1, 60, 1.0);
    const auto distances = esn::esp_convergence_test(sys, u, x0a, x0b);
    const double bound = std::pow(0.8, 60) * distances.front() + 1e-12;
    require(distances.back() <= bound,
            "decay " + fmt(distances.back()) + " above " + fmt(bound));
  }
}

// ---------------------------------------------------------------------------
// 5. quantum master oracle: Pauli vectors vs dense density matrices
// ---------------------------------------------------------------------------
void criterion_5() {
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      Rng rng(Rng::derive(501, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial)}));
      const qrc::QrcSystem sys = qrc::make_random_qrc(n, rng, rng.uniform(0.5, 1.5));

      const Eigen::MatrixXd& u = sys.channel;
      const double ortho =
          (u.transpose() * u - Eigen::MatrixXd::Identity(u.rows(), u.cols()))
              .cwiseAbs()
              .maxCoeff();
      require(ortho <= 1e-10, "channel orthogonality residual " + fmt(ortho));

      std::vector<double> inputs(50);
      for (double& x : inputs) x = rng.uniform(0.0, 1.0);

      const auto oracle = oracles::density_trajectory(sys.hamiltonian.matrix(),
                                                      sys.hamiltonian.tau, inputs);
      Eigen::VectorXd r = qrc::initial_state(n);
      for (std::size_t t = 0; t < inputs.size(); ++t) {
        r = qrc::qrc_step(r, inputs[t], sys);
        const Eigen::VectorXd expected = oracles::density_to_pauli_vector(oracle[t], n);
        const double err = (r - expected).cwiseAbs().maxCoeff();
        require(err <= 1e-10,
                "trajectory deviation " + fmt(err) + " at N=" + std::to_string(n));
        const double min_eig = qrc::validate_state(r, n).min_eigenvalue;
        require(min_eig >= -1e-10, "negative eigenvalue " + fmt(min_eig));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// 6. multiplexing closure
// ---------------------------------------------------------------------------
void criterion_6() {
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(Rng::derive(601, {static_cast<std::uint64_t>(trial)}));
    const qrc::QrcSystem q1 = qrc::make_random_qrc(2, rng);
    const qrc::QrcSystem q2 = qrc::make_random_qrc(1, rng);
    const double lambda = rng.uniform(-2.0, 2.0);
    const Orbit input = random_scalar_orbit(rng, 40, 0.0, 1.0);

    const auto y1 = qrc::run_qrc(q1, input, 5);
    const auto y2 = qrc::run_qrc(q2, input, 5);
    const auto prod = qrc::run_multiplexed(qrc::multiplex_product(q1, q2), input, 5);
    const auto sum = qrc::run_multiplexed(qrc::multiplex_sum(q1, q2, lambda), input, 5);

    const double prod_err =
        (prod.outputs.values() - y1.outputs.values().cwiseProduct(y2.outputs.values()))
            .cwiseAbs()
            .maxCoeff();
    const double sum_err =
        (sum.outputs.values() - (y1.outputs.values() + lambda * y2.outputs.values()))
            .cwiseAbs()
            .maxCoeff();
    require(prod_err <= 1e-12, "product closure error " + fmt(prod_err));
    require(sum_err <= 1e-12, "sum closure error " + fmt(sum_err));
  }
}

// ---------------------------------------------------------------------------
// 7. universality ladder, ESN family
// ---------------------------------------------------------------------------
void criterion_7() {
  lab::ExperimentSpec spec;
  spec.family = lab::Family::Esn;
  spec.ladder = {10, 20, 40, 80};
  spec.degree = 2;
  spec.seeds = 5;
  spec.seed = 42;
  spec.ridge = 1e-6;
  spec.target = lab::TargetFilter::volterra2(0.7, 1.0, 1.0, 30);
  spec.esn_draw.spectral_radius = 0.9;
  spec.esn_draw.input_scale = 0.25;
  spec.esn_draw.bias_scale = 0.1;

  const auto reports = lab::approximation_experiment(spec, 4);
  const auto medians = lab::median_test_nrmse(spec, reports);
  for (std::size_t i = 0; i + 1 < medians.size(); ++i) {
    require(medians[i + 1] <= medians[i],
            "median NRMSE not non-increasing: " + fmt(medians[i]) + " -> " +
                fmt(medians[i + 1]) + " at N=" + std::to_string(spec.ladder[i + 1]));
  }
  require(medians.back() <= 0.2, "median NRMSE at N=80 is " + fmt(medians.back()));

  // constants and self-realizable targets are exactly representable
  spec.seeds = 2;
  spec.ridge = 0.0;
  for (const auto& target :
       {lab::TargetFilter::constant(0.7), lab::TargetFilter::self_readout()}) {
    spec.target = target;
    for (const auto& report : lab::approximation_experiment(spec, 4)) {
      require(report.test_nrmse <= 1e-8,
              "realizable target NRMSE " + fmt(report.test_nrmse) + " at N=" +
                  std::to_string(report.capacity));
    }
  }
}

// ---------------------------------------------------------------------------
// 8. QRC ladder by spatial multiplexing
// ---------------------------------------------------------------------------
void criterion_8() {
  lab::ExperimentSpec spec;
  spec.family = lab::Family::Qrc;
  spec.ladder = {1, 2, 3};
  spec.degree = 1;
  spec.seeds = 5;
  spec.seed = 42;
  spec.ridge = 1e-6;
  spec.target = lab::TargetFilter::delay_product({0, 2});

  const auto reports = lab::approximation_experiment(spec, 4);
  const auto medians = lab::median_test_nrmse(spec, reports);
  for (std::size_t i = 0; i + 1 < medians.size(); ++i) {
    require(medians[i + 1] <= medians[i],
            "median NRMSE not non-increasing: " + fmt(medians[i]) + " -> " +
                fmt(medians[i + 1]) + " at " + std::to_string(spec.ladder[i + 1]) +
                " copies");
  }
}

// ---------------------------------------------------------------------------
// 9. LSM filter properties
// ---------------------------------------------------------------------------
void criterion_9() {
  // spike times on the 2^-16 grid so the integer shift is exact in binary
  const auto snap = [](double x) { return std::round(x * 65536.0) / 65536.0; };
  const auto dyadic_train = [&](Rng& rng, double horizon) {
    std::vector<double> reversed;
    double t = -snap(rng.uniform(0.0, 1.0));
    while (t >= -horizon) {
      reversed.push_back(t);
      t -= 0.5 + snap(rng.uniform(0.05, 0.8)) + 1.0 / 65536.0;
    }
    std::reverse(reversed.begin(), reversed.end());
    return lsm::validate_spike_train(std::move(reversed), 0.5, horizon);
  };

  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(Rng::derive(901, {static_cast<std::uint64_t>(trial)}));
    const lsm::SpikeTrain u = dyadic_train(rng, 20.0);
    const lsm::DecayFilter kernels[] = {
        lsm::DecayFilter::constant(rng.uniform(0.5, 1.5)),
        lsm::DecayFilter::cosine(rng.uniform(0.5, 3.0)),
        lsm::DecayFilter::table({0.0, 0.7, 2.5}, {1.0, 0.4, 0.0})};

    // time invariance: shift train and evaluation time by -1
    std::vector<double> shifted = u.times;
    for (double& s : shifted) s -= 1.0;
    const lsm::SpikeTrain v = lsm::validate_spike_train(shifted, 0.5, 25.0);
    const double t = -snap(rng.uniform(0.0, 2.0));
    for (const auto& b : kernels) {
      require(lsm::decay_filter_eval(u, b, t) == lsm::decay_filter_eval(v, b, t - 1.0),
              "time invariance violated");
    }

    // causality: spikes after t do not matter
    std::vector<double> recent_only;
    for (double s : u.times) {
      if (s <= -3.0) recent_only.push_back(s);
    }
    const lsm::SpikeTrain w = lsm::validate_spike_train(recent_only, 0.5, 20.0);
    for (const auto& b : kernels) {
      require(lsm::decay_filter_eval(u, b, -3.0) == lsm::decay_filter_eval(w, b, -3.0),
              "causality violated");
    }
  }

  // fading bound: trains identical on [-T, 0], arbitrary before
  const double delta = 0.5, horizon = 50.0, norm = 1.3;
  const lsm::DecayFilter b = lsm::DecayFilter::constant(norm);
  for (double T : {5.0, 10.0, 20.0}) {
    for (int trial = 0; trial < 40; ++trial) {
      Rng rng(Rng::derive(902, {static_cast<std::uint64_t>(T),
                                static_cast<std::uint64_t>(trial)}));
      std::vector<double> shared;
      double t = -rng.uniform(0.0, 1.0);
      while (t >= -T) {
        shared.push_back(t);
        t -= delta + rng.uniform(0.1, 1.0);
      }
      std::reverse(shared.begin(), shared.end());
      const double oldest = shared.front();
      const auto clutter = [&](Rng& r) {
        double s = std::min(oldest, -T) - delta - r.uniform(0.01, 1.0);
        std::vector<double> past;
        while (s >= -horizon) {
          past.push_back(s);
          s -= delta + r.uniform(0.001, 0.4);
        }
        std::reverse(past.begin(), past.end());
        past.insert(past.end(), shared.begin(), shared.end());
        return lsm::validate_spike_train(std::move(past), delta, horizon);
      };
      const double gap = std::abs(lsm::decay_filter_eval(clutter(rng), b, 0.0) -
                                  lsm::decay_filter_eval(clutter(rng), b, 0.0));
      require(gap <= norm * std::exp(-T) * (horizon / delta + 1.0),
              "fading bound violated at T=" + fmt(T));
    }
  }
}

// ---------------------------------------------------------------------------
// 10. artifact determinism of the CLI runner
// ---------------------------------------------------------------------------
std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void criterion_10() {
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / ("echoverse_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path cfg = dir / "cfg.json";
  {
    std::ofstream out(cfg);
    out << R"({"experiment":{"family":"qrc","ladder":[1,2],"degree":1,"seeds":2,
      "seed":11,"ridge":1e-6,"target":{"kind":"delay_product","lags":[0,2]},
      "data":{"train":400,"test":150,"washout":50,"bound":1.0}}})";
  }
  std::ostringstream out, err;
  const int code_a = cli::cli_main({"run", "--config", cfg.string(), "--out",
                                    (dir / "a").string(), "--quiet"},
                                   out, err);
  const int code_b = cli::cli_main({"run", "--config", cfg.string(), "--out",
                                    (dir / "b").string(), "--quiet"},
                                   out, err);
  require(code_a == 0 && code_b == 0, "runner exited nonzero: " + err.str());
  require(slurp(dir / "a" / "reports.csv") == slurp(dir / "b" / "reports.csv"),
          "reports.csv differs between identical runs");
  require(slurp(dir / "a" / "summary.json") == slurp(dir / "b" / "summary.json"),
          "summary.json differs between identical runs");
  std::error_code ec;
  fs::remove_all(dir, ec);
}

struct Criterion {
  int number;
  const char* name;
  double time_limit_seconds;
  std::function<void()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "metric axioms for d_w (1e-12) and d^c_w (1e-9), 1000 triples each", 10.0, criterion_1},
      {2, "duality round trips B == B_{H_B}, H == H_{B_H}, 100 orbits x 5 filters", 5.0, criterion_2},
      {3, "ESN algebra closure on 50 triples, 1e-12; direct-sum radius 1e-10", 30.0, criterion_3},
      {4, "ESP decay <= 0.8^60 for 20 operator-norm-contractive systems", 10.0, criterion_4},
      {5, "quantum master oracle, N in {1,2,3} x 10 systems x 50 steps, 1e-10", 120.0, criterion_5},
      {6, "multiplexing closure on 20 seeded cases, 1e-12", 60.0, criterion_6},
      {7, "ESN universality ladder: monotone medians, <= 0.2 at N=80, realizables <= 1e-8", 300.0, criterion_7},
      {8, "QRC multiplexing ladder: monotone medians over register copies", 300.0, criterion_8},
      {9, "LSM filter properties: exact time invariance/causality, fading bound", 30.0, criterion_9},
      {10, "CLI determinism: identical config and seed give identical artifacts", 600.0, criterion_10},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  int selected = 0;
  if (argc > 1) {
    selected = std::atoi(argv[1]);
    if (selected < 1 || selected > 10) {
      std::cerr << "usage: " << argv[0] << " [1-10]\n";
      return 2;
    }
  }

  bool all_pass = true;
  for (const Criterion& c : criteria()) {
    if (selected != 0 && c.number != selected) continue;
    const auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
      c.run();
    } catch (const std::exception& e) {
      failure = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (failure.empty() && elapsed > c.time_limit_seconds) {
      failure = "runtime " + fmt(elapsed) + "s exceeds " + fmt(c.time_limit_seconds) + "s";
    }
    if (failure.empty()) {
      std::printf("[PASS] criterion %2d: %s (%.1fs)\n", c.number, c.name, elapsed);
    } else {
      std::printf("[FAIL] criterion %2d: %s (%.1fs) -- %s\n", c.number, c.name, elapsed,
                  failure.c_str());
      all_pass = false;
    }
  }
  return all_pass ? 0 : 1;
}
