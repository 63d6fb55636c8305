#pragma once

#include <Eigen/Dense>
#include <json.hpp>
#include <vector>

#include "echoverse/orbit.hpp"
#include "echoverse/polynomial.hpp"
#include "echoverse/rng.hpp"

namespace echoverse::esn {

enum class Squashing { Tanh, ClippedLinear };

/// Discrete-time echo state network
///
///   x_{t+1} = sigma(A x_t + B u_{t+1} + xi),   y_{t+1} = p(x_{t+1})
///
/// with componentwise squashing sigma mapping into [-1, 1]. Reservoir and
/// input weights are fixed at construction; only the readout polynomial is
/// ever trained.
struct EsnSystem {
  Eigen::MatrixXd reservoir;  // A, N x N
  Eigen::MatrixXd input;      // B, N x n
  Eigen::VectorXd bias;       // xi, N
  Squashing squashing = Squashing::Tanh;
  double lipschitz = 1.0;  // Lipschitz constant of sigma
  Polynomial readout;      // p, over the N state variables

  int reservoir_size() const { return static_cast<int>(reservoir.rows()); }
  int input_dim() const { return static_cast<int>(input.cols()); }

  nlohmann::json to_json() const;
  static EsnSystem from_json(const nlohmann::json& j);
};

/// max |eigenvalue|. Throws DimensionError for non-square input.
double spectral_radius(const Eigen::MatrixXd& a);

/// Largest singular value (induced 2-norm).
double operator_norm(const Eigen::MatrixXd& a);

/// Both contraction certificates. The spectral-radius form is the stated
/// criterion; it bounds the one-step contraction only for normal A, so the
/// operator-norm form is what guaranteed-decay tests use.
struct EspMargins {
  double spectral;      // L * rho(A)
  double operator_nrm;  // L * ||A||_2
};
EspMargins esp_margins(const EsnSystem& sys);

/// True iff L * rho(A) < 1 strictly (the boundary counts as failing).
bool check_esp_condition(const EsnSystem& sys);

/// One update x' = sigma(A x + B u + xi).
Eigen::VectorXd esn_step(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                         const EsnSystem& sys);

struct EsnRun {
  Orbit states;   // N-dim, post-washout, components in [-1, 1]
  Orbit outputs;  // scalar readout trace, post-washout
  bool esp_condition;
};

/// Drive the network over the orbit from x0 (zero vector when empty),
/// dropping the first `washout` steps. esp_condition reports the
/// spectral-radius criterion; a run with it false is allowed but the caller
/// should treat the outputs as initial-state dependent.
EsnRun run_esn(const EsnSystem& sys, const Orbit& u, int washout,
               const Eigen::VectorXd& x0 = Eigen::VectorXd());

/// Distances ||x_t^a - x_t^b||_2 along two runs that share the input;
/// entry 0 is the initial distance, entry t the distance after t steps.
std::vector<double> esp_convergence_test(const EsnSystem& sys, const Orbit& u,
                                         const Eigen::VectorXd& x0a,
                                         const Eigen::VectorXd& x0b);

/// Block-diagonal sum system: A1 (+) A2, stacked input weights, readout
/// p + lambda * q. Its output equals output(s1) + lambda * output(s2).
/// Requires equal input dimension and squashing.
EsnSystem esn_sum(const EsnSystem& s1, const EsnSystem& s2, double lambda);

/// Block-diagonal product system with readout p * q; output equals the
/// pointwise product of component outputs, and the combined spectral radius
/// is the max of the two.
EsnSystem esn_product(const EsnSystem& s1, const EsnSystem& s2);

struct EsnDraw {
  double spectral_radius = 0.9;
  double input_scale = 1.0;
  double bias_scale = 0.2;
};

/// Seeded network: entries i.i.d. uniform on [-1, 1], A rescaled to the
/// target spectral radius, zero readout.
EsnSystem make_random_esn(int reservoir_size, int input_dim, Rng& rng,
                          const EsnDraw& draw = {});

/// max(100, 10 / -log(L * ||A||_2)) when the operator-norm margin
/// contracts, else 100.
int default_washout(const EsnSystem& sys);

}  // namespace echoverse::esn
