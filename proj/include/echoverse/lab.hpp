#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "echoverse/esn.hpp"
#include "echoverse/orbit.hpp"
#include "echoverse/rng.hpp"

namespace echoverse::lab {

// ---------------------------------------------------------------------------
// Target filters
// ---------------------------------------------------------------------------

/// Causal fading-memory target families for the approximation bench.
///
///   volterra2:      y_t = c1 * sum_k a^k u_{t-k}
///                       + c2 * sum_{k,l} a^{k+l} u_{t-k} u_{t-l},
///                   k, l truncated at `memory`.
///   narma:          the standard order-m recurrence, inputs affinely
///                   rescaled from [-K, K] to its stability range [0, 0.5];
///                   evaluation throws NumericalError once |y| > 10.
///   delay_product:  y_t = prod_j u_{t - lag_j}, zero before the window.
///   constant:       y_t = value.
///   self_readout:   resolved inside the experiment: the target is the
///                   output of the freshly drawn reservoir itself, so it is
///                   realizable by construction. target_eval rejects it.
struct TargetFilter {
  enum class Kind { Volterra2, Narma, DelayProduct, Constant, SelfReadout };

  Kind kind = Kind::Volterra2;
  double decay = 0.5;       // volterra2 kernel decay a
  double linear = 1.0;      // volterra2 c1
  double quadratic = 1.0;   // volterra2 c2
  int memory = 30;          // volterra2 truncation
  int order = 10;           // narma order m
  std::vector<int> lags;    // delay_product
  double value = 0.0;       // constant

  static TargetFilter volterra2(double decay, double linear = 1.0,
                                double quadratic = 1.0, int memory = 30);
  static TargetFilter narma(int order);
  static TargetFilter delay_product(std::vector<int> lags);
  static TargetFilter constant(double value);
  static TargetFilter self_readout();

  nlohmann::json to_json() const;
  static TargetFilter from_json(const nlohmann::json& j);
};

/// Causal evaluation over a scalar orbit; output length equals the orbit
/// length.
std::vector<double> target_eval(const TargetFilter& f, const Orbit& u);

// ---------------------------------------------------------------------------
// Polynomial feature map and ridge readout
// ---------------------------------------------------------------------------

/// C(nvars + degree, degree), the length of the feature vector. Throws
/// ValidationError when it exceeds 1e6.
long feature_count(int nvars, int degree);

/// All monomials of total degree <= degree in graded order, ties broken by
/// descending leading exponents: for (a, b) and degree 2 the order is
/// (1, a, b, a^2, ab, b^2).
Eigen::VectorXd polynomial_features(const Eigen::VectorXd& x, int degree);

struct RidgeFit {
  Eigen::VectorXd weights;
  /// Set when the unregularized normal equations were singular and the
  /// minimum-norm least-squares fallback produced the weights.
  bool pseudoinverse_fallback = false;
};

/// Minimize ||F w - y||^2 + reg * ||w||^2 by a symmetric positive-definite
/// solve of the normal equations; deterministic.
RidgeFit ridge_train(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                     double regularization);

/// RMSE normalized by the standard deviation of `actual`; falls back to the
/// plain RMSE when the target is (numerically) constant.
double nrmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& actual);

// ---------------------------------------------------------------------------
// Approximation experiments
// ---------------------------------------------------------------------------

enum class Family { Esn, Qrc, Lsm };

Family family_from_string(const std::string& name);
std::string family_to_string(Family family);

struct DataSpec {
  int train_length = 2000;
  int test_length = 500;
  int washout = 100;
  double bound = 1.0;  // input bound K (ESN/LSM); QRC inputs live in [0, 1]
};

struct ExperimentSpec {
  Family family = Family::Esn;
  std::vector<int> ladder;  // reservoir sizes / register copies / filter counts
  int degree = 2;           // readout feature degree
  int seeds = 5;            // independent draws per ladder point
  std::uint64_t seed = 0;   // master seed
  double ridge = 1e-6;
  TargetFilter target;
  DataSpec data;
  esn::EsnDraw esn_draw;  // reservoir generation knobs (ESN family)

  nlohmann::json to_json() const;
  static ExperimentSpec from_json(const nlohmann::json& j);
};

struct TrainReport {
  int capacity = 0;
  int degree = 0;
  std::uint64_t seed = 0;  // the derived per-run seed index
  double train_nrmse = 0.0;
  double test_nrmse = 0.0;
  double weight_norm = 0.0;
};

/// One trained readout per (ladder point, seed): generate the seeded
/// reservoir(s), drive them with the training orbit, fit the readout on
/// post-washout states, and evaluate on an independent held-out orbit.
/// Reports are ordered by (ladder index, seed index) and reproducible given
/// the spec. max_threads caps parallel evaluation (1 = serial); results do
/// not depend on the thread count.
std::vector<TrainReport> approximation_experiment(const ExperimentSpec& spec,
                                                  int max_threads = 1);

/// Median test NRMSE per ladder point, ladder order preserved.
std::vector<double> median_test_nrmse(const ExperimentSpec& spec,
                                      const std::vector<TrainReport>& reports);

std::string reports_to_csv(const std::vector<TrainReport>& reports);

// ---------------------------------------------------------------------------
// Separation diagnostics
// ---------------------------------------------------------------------------

struct SeparationReport {
  double max_gap = 0.0;       // best |H(u) - H(v)| over the probed instances
  int witness_instance = -1;  // index of the instance attaining it
};

/// For each orbit pair, probe `instances` seeded reservoir functionals
/// (value = last output of a washout-free run) and report the best gap. A
/// zero gap is a finding, not an error: separation on sampled pairs is a
/// diagnostic, not a certificate.
std::vector<SeparationReport> separation_probe(
    Family family, const std::vector<std::pair<Orbit, Orbit>>& pairs,
    int instances, std::uint64_t seed);

}  // namespace echoverse::lab
