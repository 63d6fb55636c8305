#include "echoverse/lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <thread>

#include "echoverse/esn.hpp"
#include "echoverse/lsm.hpp"
#include "echoverse/polynomial.hpp"
#include "echoverse/qrc.hpp"

namespace echoverse::lab {

// ---------------------------------------------------------------------------
// Target filters
// ---------------------------------------------------------------------------

TargetFilter TargetFilter::volterra2(double decay, double linear, double quadratic,
                                     int memory) {
  TargetFilter f;
  f.kind = Kind::Volterra2;
  f.decay = decay;
  f.linear = linear;
  f.quadratic = quadratic;
  f.memory = memory;
  return f;
}

TargetFilter TargetFilter::narma(int order) {
  TargetFilter f;
  f.kind = Kind::Narma;
  f.order = order;
  return f;
}

TargetFilter TargetFilter::delay_product(std::vector<int> lags) {
  TargetFilter f;
  f.kind = Kind::DelayProduct;
  f.lags = std::move(lags);
  return f;
}

TargetFilter TargetFilter::constant(double value) {
  TargetFilter f;
  f.kind = Kind::Constant;
  f.value = value;
  return f;
}

TargetFilter TargetFilter::self_readout() {
  TargetFilter f;
  f.kind = Kind::SelfReadout;
  return f;
}

namespace {

std::vector<double> eval_volterra2(const TargetFilter& f, const Orbit& u) {
  const int len = u.length();
  std::vector<double> out(static_cast<std::size_t>(len));
  std::vector<double> decay_pow(static_cast<std::size_t>(f.memory) + 1);
  decay_pow[0] = 1.0;
  for (int k = 1; k <= f.memory; ++k) decay_pow[static_cast<std::size_t>(k)] = decay_pow[static_cast<std::size_t>(k - 1)] * f.decay;
  for (int t = 0; t < len; ++t) {
    double lin = 0.0;
    const int kmax = std::min(f.memory, t);
    for (int k = 0; k <= kmax; ++k) {
      lin += decay_pow[static_cast<std::size_t>(k)] * u.values()(0, t - k);
    }
    double quad = 0.0;
    for (int k = 0; k <= kmax; ++k) {
      const double uk = decay_pow[static_cast<std::size_t>(k)] * u.values()(0, t - k);
      for (int l = 0; l <= kmax; ++l) {
        quad += uk * decay_pow[static_cast<std::size_t>(l)] * u.values()(0, t - l);
      }
    }
    out[static_cast<std::size_t>(t)] = f.linear * lin + f.quadratic * quad;
  }
  return out;
}

std::vector<double> eval_narma(const TargetFilter& f, const Orbit& u) {
  if (f.order < 1) throw ValidationError("narma: order must be >= 1");
  const int len = u.length();
  const double bound = u.bound();
  // affine rescale into the recurrence's stability range [0, 0.5]
  const auto v = [&](int t) { return 0.25 * (u.values()(0, t) / bound + 1.0); };
  std::vector<double> y(static_cast<std::size_t>(len), 0.0);
  for (int t = 0; t + 1 < len; ++t) {
    double window = 0.0;
    for (int i = 0; i < f.order; ++i) {
      window += t - i >= 0 ? y[static_cast<std::size_t>(t - i)] : 0.0;
    }
    const double u_old = t - (f.order - 1) >= 0 ? v(t - (f.order - 1)) : 0.0;
    const double next = 0.3 * y[static_cast<std::size_t>(t)] +
                        0.05 * y[static_cast<std::size_t>(t)] * window +
                        1.5 * u_old * v(t) + 0.1;
    if (!std::isfinite(next) || std::abs(next) > 10.0) {
      throw NumericalError("narma: recurrence diverged (|y| > 10)");
    }
    y[static_cast<std::size_t>(t + 1)] = next;
  }
  return y;
}

std::vector<double> eval_delay_product(const TargetFilter& f, const Orbit& u) {
  if (f.lags.empty()) throw ValidationError("delay_product: needs at least one lag");
  const int len = u.length();
  std::vector<double> out(static_cast<std::size_t>(len));
  for (int t = 0; t < len; ++t) {
    double prod = 1.0;
    for (int lag : f.lags) {
      if (lag < 0) throw ValidationError("delay_product: lags must be >= 0");
      prod *= t - lag >= 0 ? u.values()(0, t - lag) : 0.0;
    }
    out[static_cast<std::size_t>(t)] = prod;
  }
  return out;
}

}  // namespace

std::vector<double> target_eval(const TargetFilter& f, const Orbit& u) {
  if (u.dim() != 1) throw DimensionError("target_eval: orbit must be scalar");
  switch (f.kind) {
    case TargetFilter::Kind::Volterra2:
      return eval_volterra2(f, u);
    case TargetFilter::Kind::Narma:
      return eval_narma(f, u);
    case TargetFilter::Kind::DelayProduct:
      return eval_delay_product(f, u);
    case TargetFilter::Kind::Constant:
      return std::vector<double>(static_cast<std::size_t>(u.length()), f.value);
    case TargetFilter::Kind::SelfReadout:
      throw ValidationError("target_eval: self_readout is resolved inside the experiment");
  }
  return {};
}

nlohmann::json TargetFilter::to_json() const {
  switch (kind) {
    case Kind::Volterra2:
      return {{"kind", "volterra2"}, {"decay", decay},     {"linear", linear},
              {"quadratic", quadratic}, {"memory", memory}};
    case Kind::Narma:
      return {{"kind", "narma"}, {"order", order}};
    case Kind::DelayProduct:
      return {{"kind", "delay_product"}, {"lags", lags}};
    case Kind::Constant:
      return {{"kind", "constant"}, {"value", value}};
    case Kind::SelfReadout:
      return {{"kind", "self"}};
  }
  return {};
}

TargetFilter TargetFilter::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "volterra2") {
    return volterra2(j.value("decay", 0.5), j.value("linear", 1.0),
                     j.value("quadratic", 1.0), j.value("memory", 30));
  }
  if (kind == "narma") return narma(j.at("order").get<int>());
  if (kind == "delay_product") {
    return delay_product(j.at("lags").get<std::vector<int>>());
  }
  if (kind == "constant") return constant(j.at("value").get<double>());
  if (kind == "self") return self_readout();
  throw ValidationError("target filter: unknown kind `" + kind + "`");
}

// ---------------------------------------------------------------------------
// Features and ridge regression
// ---------------------------------------------------------------------------

long feature_count(int nvars, int degree) {
  if (nvars < 1 || degree < 0) {
    throw DimensionError("feature_count: need nvars >= 1 and degree >= 0");
  }
  long long count = 1;
  for (int i = 1; i <= degree; ++i) {
    count = count * (nvars + i) / i;  // running value is C(nvars + i, i)
    if (count > 1000000) {
      throw ValidationError("feature_count: C(nvars+degree, degree) exceeds 1e6");
    }
  }
  return static_cast<long>(count);
}

Eigen::VectorXd polynomial_features(const Eigen::VectorXd& x, int degree) {
  const int n = static_cast<int>(x.size());
  const long count = feature_count(n, degree);
  Eigen::VectorXd out(count);
  long pos = 0;
  // graded order; within one degree the leading variables take the largest
  // exponents first: (1, a, b, a^2, ab, b^2, ...)
  std::function<void(int, int, double)> rec = [&](int var, int deg, double acc) {
    if (var == n - 1) {
      out(pos++) = acc * ipow(x(var), deg);
      return;
    }
    for (int e = deg; e >= 0; --e) rec(var + 1, deg - e, acc * ipow(x(var), e));
  };
  for (int g = 0; g <= degree; ++g) rec(0, g, 1.0);
  return out;
}

RidgeFit ridge_train(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                     double regularization) {
  const Eigen::Index rows = features.rows();
  const Eigen::Index cols = features.cols();
  if (rows < 1 || cols < 1) {
    throw DimensionError("ridge_train: empty design matrix");
  }
  if (targets.size() != rows) {
    throw DimensionError("ridge_train: target length does not match rows");
  }
  if (regularization < 0.0) {
    throw ValidationError("ridge_train: regularization must be >= 0");
  }

  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(cols, cols);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(features.transpose());
  gram = gram.selfadjointView<Eigen::Lower>();
  gram.diagonal().array() += regularization;
  const Eigen::VectorXd rhs = features.transpose() * targets;

  RidgeFit fit;
  const auto ldlt = gram.ldlt();
  fit.weights = ldlt.solve(rhs);
  bool bad = !fit.weights.allFinite();
  if (!bad && regularization == 0.0) {
    // rank-deficient gram: vanishing pivots, or an inconsistent solve
    const Eigen::VectorXd d = ldlt.vectorD();
    bad = d.minCoeff() <= 1e-12 * std::max(1.0, d.maxCoeff()) ||
          (gram * fit.weights - rhs).norm() > 1e-8 * std::max(1.0, rhs.norm());
  }
  if (bad) {
    if (regularization > 0.0) {
      throw NumericalError("ridge_train: normal-equation solve failed");
    }
    // singular unregularized system: minimum-norm least squares
    fit.weights = features.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(targets);
    fit.pseudoinverse_fallback = true;
  }
  return fit;
}

double nrmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& actual) {
  if (predicted.size() != actual.size() || predicted.size() == 0) {
    throw DimensionError("nrmse: length mismatch");
  }
  const double n = static_cast<double>(actual.size());
  const double rmse = std::sqrt((predicted - actual).squaredNorm() / n);
  const double mean = actual.mean();
  const double sd = std::sqrt((actual.array() - mean).square().sum() / n);
  if (sd < 1e-15 * std::max(1.0, std::abs(mean))) {
    return rmse;  // constant target: plain RMSE
  }
  return rmse / sd;
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

Family family_from_string(const std::string& name) {
  if (name == "esn") return Family::Esn;
  if (name == "qrc") return Family::Qrc;
  if (name == "lsm") return Family::Lsm;
  throw ValidationError("unknown reservoir family `" + name + "`");
}

std::string family_to_string(Family family) {
  switch (family) {
    case Family::Esn: return "esn";
    case Family::Qrc: return "qrc";
    case Family::Lsm: return "lsm";
  }
  return "esn";
}

nlohmann::json ExperimentSpec::to_json() const {
  return {{"family", family_to_string(family)},
          {"ladder", ladder},
          {"degree", degree},
          {"seeds", seeds},
          {"seed", seed},
          {"ridge", ridge},
          {"target", target.to_json()},
          {"data",
           {{"train", data.train_length},
            {"test", data.test_length},
            {"washout", data.washout},
            {"bound", data.bound}}},
          {"esn_draw",
           {{"spectral_radius", esn_draw.spectral_radius},
            {"input_scale", esn_draw.input_scale},
            {"bias_scale", esn_draw.bias_scale}}}};
}

ExperimentSpec ExperimentSpec::from_json(const nlohmann::json& j) {
  ExperimentSpec spec;
  spec.family = family_from_string(j.at("family").get<std::string>());
  spec.ladder = j.at("ladder").get<std::vector<int>>();
  if (spec.ladder.empty()) {
    throw ValidationError("experiment: ladder must be non-empty");
  }
  for (std::size_t i = 0; i < spec.ladder.size(); ++i) {
    if (spec.ladder[i] < 1 || (i > 0 && spec.ladder[i] <= spec.ladder[i - 1])) {
      throw ValidationError("experiment: ladder must be positive and increasing");
    }
  }
  spec.degree = j.value("degree", 2);
  spec.seeds = j.value("seeds", 5);
  spec.seed = j.value("seed", static_cast<std::uint64_t>(0));
  spec.ridge = j.value("ridge", 1e-6);
  spec.target = TargetFilter::from_json(j.at("target"));
  if (j.contains("data")) {
    const auto& d = j.at("data");
    spec.data.train_length = d.value("train", 2000);
    spec.data.test_length = d.value("test", 500);
    spec.data.washout = d.value("washout", 100);
    spec.data.bound = d.value("bound", 1.0);
  }
  if (j.contains("esn_draw")) {
    const auto& d = j.at("esn_draw");
    spec.esn_draw.spectral_radius = d.value("spectral_radius", 0.9);
    spec.esn_draw.input_scale = d.value("input_scale", 1.0);
    spec.esn_draw.bias_scale = d.value("bias_scale", 0.2);
  }
  if (spec.seeds < 1 || spec.degree < 0) {
    throw ValidationError("experiment: seeds must be >= 1 and degree >= 0");
  }
  if (spec.data.washout >= std::min(spec.data.train_length, spec.data.test_length)) {
    throw ValidationError("experiment: washout must be smaller than both splits");
  }
  return spec;
}

namespace {

// family-reservoir states for one data split: rows = kept steps after
// washout, cols = state variables; plus the scalar input sequence the
// targets see (post-washout aligned with the rows).
struct SplitStates {
  Eigen::MatrixXd states;
  Orbit input;  // full-length input orbit (pre-washout)
};

SplitStates esn_states(const esn::EsnSystem& sys, const DataSpec& data, int length,
                       Rng& rng) {
  const Orbit input = random_scalar_orbit(rng, length, -data.bound, data.bound);
  const esn::EsnRun run = esn::run_esn(sys, input, data.washout);
  return {run.states.values().transpose(), input};
}

SplitStates qrc_states(const std::vector<qrc::QrcSystem>& registers,
                       const DataSpec& data, int length, Rng& rng) {
  const Orbit input = random_scalar_orbit(rng, length, 0.0, 1.0);
  const Orbit nodes = qrc::run_parallel_true_nodes(registers, input, data.washout);
  return {nodes.values().transpose(), input};
}

struct LsmBench {
  lsm::SpikeTrain train;
  std::vector<double> grid;       // sample times, last at 0
  Orbit smoothed;                 // discretized f_u on the grid (the target input)
};

LsmBench lsm_bench(int length, Rng& rng) {
  const double refractory = 0.5;
  const double sample_step = 0.025;
  const double horizon = static_cast<double>(length) * sample_step + 1.0;
  LsmBench bench{lsm::random_spike_train(rng, refractory, horizon, 0.6), {}, Orbit::zeros(1, 1)};
  bench.grid.resize(static_cast<std::size_t>(length));
  Eigen::MatrixXd smoothed(1, length);
  for (int k = 0; k < length; ++k) {
    bench.grid[static_cast<std::size_t>(k)] = -static_cast<double>(length - 1 - k) * sample_step;
  }
  const lsm::SampledFunction f = lsm::smooth_spike_train(bench.train, sample_step / 2.0);
  for (int k = 0; k < length; ++k) {
    const double t = bench.grid[static_cast<std::size_t>(k)];
    const auto idx = static_cast<std::size_t>(std::lround((t - f.t0) / f.dt));
    smoothed(0, k) = f.values[std::min(idx, f.values.size() - 1)];
  }
  bench.smoothed = Orbit(smoothed, std::max(smoothed.cwiseAbs().maxCoeff(), 1.0));
  return bench;
}

SplitStates lsm_states(const lsm::LsmSystem& sys, const DataSpec& data, int length,
                       Rng& rng) {
  LsmBench bench = lsm_bench(length, rng);
  Eigen::MatrixXd states(length, sys.size());
  for (int k = 0; k < length; ++k) {
    for (int i = 0; i < sys.size(); ++i) {
      states(k, i) = lsm::decay_filter_eval(bench.train, sys.filters[static_cast<std::size_t>(i)],
                                            bench.grid[static_cast<std::size_t>(k)]);
    }
  }
  return {states.bottomRows(length - data.washout), bench.smoothed};
}

Eigen::MatrixXd feature_matrix(const Eigen::MatrixXd& states, int degree) {
  const long f = feature_count(static_cast<int>(states.cols()), degree);
  Eigen::MatrixXd phi(states.rows(), f);
  for (Eigen::Index r = 0; r < states.rows(); ++r) {
    phi.row(r) = polynomial_features(states.row(r).transpose(), degree).transpose();
  }
  return phi;
}

Eigen::VectorXd target_tail(const TargetFilter& target, const Orbit& input, int washout) {
  const std::vector<double> full = target_eval(target, input);
  const Eigen::Index kept = static_cast<Eigen::Index>(full.size()) - washout;
  Eigen::VectorXd out(kept);
  for (Eigen::Index i = 0; i < kept; ++i) out(i) = full[static_cast<std::size_t>(i + washout)];
  return out;
}

TrainReport run_one(const ExperimentSpec& spec, int ladder_index, int seed_index) {
  const int capacity = spec.ladder[static_cast<std::size_t>(ladder_index)];
  const auto fam = static_cast<std::uint64_t>(spec.family);
  const auto cap = static_cast<std::uint64_t>(capacity);
  const auto sdx = static_cast<std::uint64_t>(seed_index);
  Rng sys_rng(Rng::derive(spec.seed, {fam, cap, sdx, 0}));
  // common random numbers: every ladder point and draw sees the same
  // train/test orbits, so capacity comparisons are paired and reservoir-draw
  // variance is the only noise the median has to absorb
  Rng train_rng(Rng::derive(spec.seed, {fam, 1}));
  Rng test_rng(Rng::derive(spec.seed, {fam, 2}));

  std::function<SplitStates(int, Rng&)> drive;
  switch (spec.family) {
    case Family::Esn: {
      const esn::EsnSystem sys = esn::make_random_esn(capacity, 1, sys_rng, spec.esn_draw);
      drive = [sys, &spec](int length, Rng& rng) {
        return esn_states(sys, spec.data, length, rng);
      };
      break;
    }
    case Family::Qrc: {
      std::vector<qrc::QrcSystem> registers;
      registers.reserve(static_cast<std::size_t>(capacity));
      for (int k = 0; k < capacity; ++k) {
        registers.push_back(qrc::make_random_qrc(2, sys_rng));
      }
      drive = [registers, &spec](int length, Rng& rng) {
        return qrc_states(registers, spec.data, length, rng);
      };
      break;
    }
    case Family::Lsm: {
      lsm::LsmSystem sys;
      for (int i = 0; i < capacity; ++i) {
        if (i % 2 == 0) {
          sys.filters.push_back(lsm::DecayFilter::cosine(sys_rng.uniform(0.3, 3.0)));
        } else {
          sys.filters.push_back(lsm::DecayFilter::constant(sys_rng.uniform(0.5, 1.5)));
        }
      }
      drive = [sys, &spec](int length, Rng& rng) {
        return lsm_states(sys, spec.data, length, rng);
      };
      break;
    }
  }
  const SplitStates train = drive(spec.data.train_length, train_rng);
  const SplitStates test = drive(spec.data.test_length, test_rng);

  Eigen::VectorXd y_train, y_test;
  if (spec.target.kind == TargetFilter::Kind::SelfReadout) {
    Rng readout_rng(Rng::derive(spec.seed, {fam, cap, sdx, 3}));
    const Polynomial p = Polynomial::random(static_cast<int>(train.states.cols()),
                                            spec.degree, 5, readout_rng);
    y_train.resize(train.states.rows());
    for (Eigen::Index r = 0; r < train.states.rows(); ++r) {
      y_train(r) = p.eval(train.states.row(r).transpose());
    }
    y_test.resize(test.states.rows());
    for (Eigen::Index r = 0; r < test.states.rows(); ++r) {
      y_test(r) = p.eval(test.states.row(r).transpose());
    }
  } else {
    y_train = target_tail(spec.target, train.input, spec.data.washout);
    y_test = target_tail(spec.target, test.input, spec.data.washout);
  }

  const Eigen::MatrixXd phi_train = feature_matrix(train.states, spec.degree);
  const Eigen::MatrixXd phi_test = feature_matrix(test.states, spec.degree);
  const RidgeFit fit = ridge_train(phi_train, y_train, spec.ridge);

  TrainReport report;
  report.capacity = capacity;
  report.degree = spec.degree;
  report.seed = static_cast<std::uint64_t>(seed_index);
  report.train_nrmse = nrmse(phi_train * fit.weights, y_train);
  report.test_nrmse = nrmse(phi_test * fit.weights, y_test);
  report.weight_norm = fit.weights.norm();
  return report;
}

void parallel_for(int count, int max_threads, const std::function<void(int)>& body) {
  max_threads = std::max(1, std::min(max_threads, count));
  if (max_threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(max_threads));
  for (int w = 0; w < max_threads; ++w) {
    workers.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::vector<TrainReport> approximation_experiment(const ExperimentSpec& spec,
                                                  int max_threads) {
  if (spec.ladder.empty()) {
    throw ValidationError("experiment: ladder must be non-empty");
  }
  const int runs = static_cast<int>(spec.ladder.size()) * spec.seeds;
  std::vector<TrainReport> reports(static_cast<std::size_t>(runs));
  parallel_for(runs, max_threads, [&](int i) {
    const int ladder_index = i / spec.seeds;
    const int seed_index = i % spec.seeds;
    reports[static_cast<std::size_t>(i)] = run_one(spec, ladder_index, seed_index);
  });
  return reports;
}

std::vector<double> median_test_nrmse(const ExperimentSpec& spec,
                                      const std::vector<TrainReport>& reports) {
  std::vector<double> medians;
  medians.reserve(spec.ladder.size());
  for (std::size_t level = 0; level < spec.ladder.size(); ++level) {
    std::vector<double> values;
    for (const TrainReport& r : reports) {
      if (r.capacity == spec.ladder[level]) values.push_back(r.test_nrmse);
    }
    if (values.empty()) {
      throw DimensionError("median_test_nrmse: no reports for a ladder point");
    }
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    medians.push_back(n % 2 == 1 ? values[n / 2]
                                 : 0.5 * (values[n / 2 - 1] + values[n / 2]));
  }
  return medians;
}

std::string reports_to_csv(const std::vector<TrainReport>& reports) {
  std::string out = "capacity,degree,seed,train_nrmse,test_nrmse,weight_norm\n";
  char buf[160];
  for (const TrainReport& r : reports) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%llu,%.17g,%.17g,%.17g\n", r.capacity,
                  r.degree, static_cast<unsigned long long>(r.seed), r.train_nrmse,
                  r.test_nrmse, r.weight_norm);
    out += buf;
  }
  return out;
}

std::vector<SeparationReport> separation_probe(
    Family family, const std::vector<std::pair<Orbit, Orbit>>& pairs, int instances,
    std::uint64_t seed) {
  if (instances < 1) {
    throw ValidationError("separation_probe: need at least one instance");
  }
  if (family == Family::Lsm) {
    throw ValidationError(
        "separation_probe: spike-train inputs use the spiking witness kernel");
  }
  std::vector<SeparationReport> out(pairs.size());
  for (int k = 0; k < instances; ++k) {
    Rng rng(Rng::derive(seed, {0x736570, static_cast<std::uint64_t>(k)}));
    std::function<double(const Orbit&)> functional;
    if (family == Family::Esn) {
      esn::EsnSystem sys = esn::make_random_esn(8, 1, rng);
      sys.readout = Polynomial::random(8, 2, 6, rng);
      functional = [sys](const Orbit& u) {
        return esn::run_esn(sys, u, 0).outputs.scalar_at(0);
      };
    } else {
      const qrc::QrcSystem sys = qrc::make_random_qrc(2, rng);
      functional = [sys](const Orbit& u) {
        return qrc::run_qrc(sys, u, 0).outputs.scalar_at(0);
      };
    }
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const double gap = std::abs(functional(pairs[p].first) - functional(pairs[p].second));
      if (out[p].witness_instance < 0 || gap > out[p].max_gap) {
        out[p].max_gap = gap;
        out[p].witness_instance = k;
      }
    }
  }
  return out;
}

}  // namespace echoverse::lab
