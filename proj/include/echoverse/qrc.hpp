#pragma once

#include <Eigen/Dense>
#include <complex>
#include <json.hpp>
#include <variant>
#include <vector>

#include "echoverse/orbit.hpp"
#include "echoverse/rng.hpp"

namespace echoverse::qrc {

// ---------------------------------------------------------------------------
// Pauli-product basis
//
// Index i in [0, 4^N) encodes one base-4 digit per qubit, qubit 1 in the
// most significant position, with digits 0=I, 1=X, 2=Y, 3=Z (the digit is
// the two-bit pair of the usual sigma_{b1 b2} labelling). Index 0 is the
// all-identity product. Computational basis states use the matching bit
// layout: qubit 1 is the most significant bit.
// ---------------------------------------------------------------------------

inline int pauli_dim(int n_qubits) { return 1 << (2 * n_qubits); }
inline int hilbert_dim(int n_qubits) { return 1 << n_qubits; }

int pauli_index(const std::vector<int>& digits);
std::vector<int> pauli_digits(int index, int n_qubits);

/// Dense 2^N x 2^N matrix of the Pauli product.
Eigen::MatrixXcd pauli_matrix(int index, int n_qubits);

/// P_i * m without materializing P_i (row permutation plus phase).
Eigen::MatrixXcd apply_pauli_left(int index, int n_qubits, const Eigen::MatrixXcd& m);

/// Tr[P_i m] in O(2^N).
std::complex<double> pauli_trace_product(int index, int n_qubits,
                                         const Eigen::MatrixXcd& m);

// ---------------------------------------------------------------------------
// Reservoir state
// ---------------------------------------------------------------------------

/// Real vector of length 4^N with r^i = Tr[P_i rho] / 2^N; component 0 is
/// the trace and equals 2^-N for any unit-trace state.
using ReservoirVector = Eigen::VectorXd;

/// Expand a Hermitian unit-trace density matrix in the Pauli basis.
/// Trace must be 1 within 1e-12 and the Hermiticity residual small.
ReservoirVector density_to_vector(const Eigen::MatrixXcd& rho);

/// Inverse expansion rho = sum_i r^i P_i.
Eigen::MatrixXcd vector_to_density(const ReservoirVector& r);

/// Maximally mixed register, rho = I / 2^N.
ReservoirVector initial_state(int n_qubits);

/// Physicality diagnostics of a reservoir vector.
struct StateDiagnostics {
  double trace_component;      // r^0
  double expected_trace;       // 2^-N
  double hermiticity_residual; // max |rho - rho^dagger|
  double min_eigenvalue;       // of the reconstructed density matrix

  bool trace_ok(double tol = 1e-10) const {
    return std::abs(trace_component - expected_trace) <= tol;
  }
  bool positive_ok(double tol = 1e-10) const { return min_eigenvalue >= -tol; }
};

StateDiagnostics validate_state(const ReservoirVector& r, int n_qubits);

// ---------------------------------------------------------------------------
// Input encoding and unitary channel
// ---------------------------------------------------------------------------

/// Pauli-basis matrix of the input injection: on the density side it
/// replaces qubit 1 by the pure state (I + (1 - 2u) Z) / 2 and keeps the
/// partial trace of the rest,
///
///   rho' = (I + (1 - 2u) Z) / 2  (x)  Tr_1(rho).
///
/// The trace formula is normalized by 2^N so the density-side semantics
/// holds exactly on reservoir vectors. Requires u in [0, 1].
Eigen::MatrixXd encoding_matrix(double u, int n_qubits);

/// apply encoding without building the dense matrix; equals
/// encoding_matrix(u, n) * r entry for entry.
ReservoirVector apply_encoding(double u, int n_qubits, const ReservoirVector& r);

/// Fully connected transverse-field Ising model,
/// H = sum_{i<j} J_ij X_i X_j + sum_l h_l Z_l.
/// The couplings act along X so they transport the Z-encoded input between
/// qubits; the field is transverse to the coupling axis.
struct IsingSpec {
  Eigen::MatrixXd couplings;  // J, N x N, strict upper triangle used
  Eigen::VectorXd fields;     // h, length N

  int n_qubits() const { return static_cast<int>(fields.size()); }
};

Eigen::MatrixXcd ising_hamiltonian(const IsingSpec& spec);

/// Hamiltonian model plus the evolution time of one reservoir step.
struct HamiltonianSpec {
  std::variant<IsingSpec, Eigen::MatrixXcd> model;
  double tau = 1.0;

  int n_qubits() const;
  /// Realized 2^N x 2^N matrix; dense tables are checked for Hermiticity.
  Eigen::MatrixXcd matrix() const;
};

/// Pauli-basis matrix of conjugation by e^{-i H tau}:
/// U_ji = Tr[P_j e^{-iHtau} P_i e^{iHtau}] / 2^N. Real and orthogonal
/// (conjugation preserves the Hilbert-Schmidt inner product) and fixes e_0.
Eigen::MatrixXd channel_matrix(const HamiltonianSpec& spec);

// ---------------------------------------------------------------------------
// Reservoir system
// ---------------------------------------------------------------------------

/// Qubit-register reservoir: r_{t+1} = S_{u_t} U r_t with linear readout on
/// the N single-Z components (the true nodes),
/// y = sum_i w_i z^i + intercept. intercept = 0 is the strictly linear
/// readout; the affine extension exists so a register can realize constant
/// outputs.
struct QrcSystem {
  int n_qubits = 1;
  HamiltonianSpec hamiltonian;
  Eigen::VectorXd weights;  // w, length n_qubits
  double intercept = 0.0;
  Eigen::MatrixXd channel;  // cached channel_matrix

  nlohmann::json to_json() const;
  static QrcSystem from_json(const nlohmann::json& j);
};

/// Build a system and cache its channel matrix.
QrcSystem make_qrc_system(HamiltonianSpec hamiltonian, Eigen::VectorXd weights,
                          double intercept = 0.0);

/// Seeded Ising register: J_ij i.i.d. uniform [-1,1]/sqrt(N), h_l = 1,
/// weights uniform [-1, 1].
QrcSystem make_random_qrc(int n_qubits, Rng& rng, double tau = 1.0);

/// Indices of the single-Z Pauli strings, qubit 1 first.
std::vector<int> true_node_indices(int n_qubits);

/// One update r' = S_u (U r). Requires a state with the correct trace
/// component and u in [0, 1].
ReservoirVector qrc_step(const ReservoirVector& r, double u, const QrcSystem& sys);

struct QrcRun {
  Orbit true_nodes;  // z, N-dim
  Orbit outputs;     // y, scalar
};

/// Drive the register from the maximally mixed state over a scalar orbit
/// with values in [0, 1], dropping the first `washout` outputs. The output
/// at index t is the readout after injecting u_t.
QrcRun run_qrc(const QrcSystem& sys, const Orbit& input, int washout);

inline constexpr int kDefaultWashout = 50;

// ---------------------------------------------------------------------------
// Spatial multiplexing
// ---------------------------------------------------------------------------

/// Uncoupled registers running in parallel on the shared input. The
/// combined readout realizes the product or the lambda-weighted sum of the
/// component readouts.
struct MultiplexedSystem {
  std::vector<QrcSystem> registers;
  bool product = false;
  double lambda = 1.0;  // weight of the second output in sum mode
};

MultiplexedSystem multiplex_product(QrcSystem q1, QrcSystem q2);
MultiplexedSystem multiplex_sum(QrcSystem q1, QrcSystem q2, double lambda);

struct MultiplexedRun {
  Orbit true_nodes;  // concatenated z of all registers
  Orbit outputs;     // combined y
};

MultiplexedRun run_multiplexed(const MultiplexedSystem& sys, const Orbit& input,
                               int washout);

/// Concatenated true-node trajectories of independent registers on the
/// shared input; the feature source for trained multiplexed readouts.
Orbit run_parallel_true_nodes(const std::vector<QrcSystem>& registers,
                              const Orbit& input, int washout);

/// Trajectory CSV `t,z1,...,zN,y`.
std::string trajectory_to_csv(const Orbit& true_nodes, const Orbit& outputs);

}  // namespace echoverse::qrc
