#include "echoverse/qrc.hpp"

#include <Eigen/Eigenvalues>
#include <bit>
#include <cmath>
#include <cstdio>

namespace echoverse::qrc {

namespace {

using std::complex;

constexpr complex<double> kI{0.0, 1.0};

struct PauliBits {
  unsigned x_mask = 0;  // qubits carrying X or Y (bit flip)
  unsigned z_mask = 0;  // qubits carrying Y or Z (phase flip)
  int y_count = 0;
};

// qubit l (1-based, most significant digit pair) maps to bit (n - l)
PauliBits decode_bits(int index, int n_qubits) {
  PauliBits out;
  for (int l = 0; l < n_qubits; ++l) {
    const int digit = (index >> (2 * (n_qubits - 1 - l))) & 3;
    const unsigned bit = 1u << (n_qubits - 1 - l);
    if (digit == 1 || digit == 2) out.x_mask |= bit;
    if (digit == 2 || digit == 3) out.z_mask |= bit;
    if (digit == 2) ++out.y_count;
  }
  return out;
}

complex<double> i_power(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double parity_sign(unsigned bits) {
  return (std::popcount(bits) & 1) ? -1.0 : 1.0;
}

void check_index(int index, int n_qubits) {
  if (n_qubits < 1) throw DimensionError("pauli: need at least one qubit");
  if (index < 0 || index >= pauli_dim(n_qubits)) {
    throw DimensionError("pauli: index out of range");
  }
}

}  // namespace

int pauli_index(const std::vector<int>& digits) {
  if (digits.empty()) throw DimensionError("pauli_index: need at least one digit");
  int index = 0;
  for (int d : digits) {
    if (d < 0 || d > 3) throw DimensionError("pauli_index: digit out of range");
    index = (index << 2) | d;
  }
  return index;
}

std::vector<int> pauli_digits(int index, int n_qubits) {
  check_index(index, n_qubits);
  std::vector<int> digits(static_cast<std::size_t>(n_qubits));
  for (int l = 0; l < n_qubits; ++l) {
    digits[static_cast<std::size_t>(l)] = (index >> (2 * (n_qubits - 1 - l))) & 3;
  }
  return digits;
}

Eigen::MatrixXcd pauli_matrix(int index, int n_qubits) {
  check_index(index, n_qubits);
  const int dim = hilbert_dim(n_qubits);
  const PauliBits p = decode_bits(index, n_qubits);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  const complex<double> base = i_power(p.y_count);
  for (int c = 0; c < dim; ++c) {
    const int r = c ^ static_cast<int>(p.x_mask);
    m(r, c) = base * parity_sign(static_cast<unsigned>(c) & p.z_mask);
  }
  return m;
}

Eigen::MatrixXcd apply_pauli_left(int index, int n_qubits, const Eigen::MatrixXcd& m) {
  check_index(index, n_qubits);
  const int dim = hilbert_dim(n_qubits);
  if (m.rows() != dim) throw DimensionError("apply_pauli_left: row count mismatch");
  const PauliBits p = decode_bits(index, n_qubits);
  const complex<double> base = i_power(p.y_count);
  Eigen::MatrixXcd out(dim, m.cols());
  for (int r = 0; r < dim; ++r) {
    const int src = r ^ static_cast<int>(p.x_mask);
    out.row(r) = base * parity_sign(static_cast<unsigned>(src) & p.z_mask) * m.row(src);
  }
  return out;
}

complex<double> pauli_trace_product(int index, int n_qubits, const Eigen::MatrixXcd& m) {
  check_index(index, n_qubits);
  const int dim = hilbert_dim(n_qubits);
  if (m.rows() != dim || m.cols() != dim) {
    throw DimensionError("pauli_trace_product: matrix must be 2^N x 2^N");
  }
  const PauliBits p = decode_bits(index, n_qubits);
  const complex<double> base = i_power(p.y_count);
  complex<double> sum = 0.0;
  for (int c = 0; c < dim; ++c) {
    const int r = c ^ static_cast<int>(p.x_mask);
    sum += parity_sign(static_cast<unsigned>(c) & p.z_mask) * m(c, r);
  }
  return base * sum;
}

ReservoirVector density_to_vector(const Eigen::MatrixXcd& rho) {
  const int dim = static_cast<int>(rho.rows());
  if (rho.cols() != dim || dim < 2 || (dim & (dim - 1)) != 0) {
    throw DimensionError("density_to_vector: matrix must be square with 2^N rows");
  }
  const int n = std::bit_width(static_cast<unsigned>(dim)) - 1;
  if (std::abs(rho.trace() - complex<double>(1.0, 0.0)) > 1e-12) {
    throw ValidationError("density_to_vector: trace must be 1");
  }
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw ValidationError("density_to_vector: matrix is not Hermitian");
  }
  const double scale = 1.0 / static_cast<double>(dim);
  ReservoirVector r(pauli_dim(n));
  for (int i = 0; i < pauli_dim(n); ++i) {
    r(i) = pauli_trace_product(i, n, rho).real() * scale;
  }
  return r;
}

Eigen::MatrixXcd vector_to_density(const ReservoirVector& r) {
  const int size = static_cast<int>(r.size());
  int n = 0;
  while (pauli_dim(n + 1) <= size) ++n;
  if (n < 1 || pauli_dim(n) != size) {
    throw DimensionError("vector_to_density: length must be 4^N");
  }
  const int dim = hilbert_dim(n);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < size; ++i) {
    if (r(i) == 0.0) continue;
    const PauliBits p = decode_bits(i, n);
    const complex<double> base = i_power(p.y_count) * r(i);
    for (int c = 0; c < dim; ++c) {
      const int row = c ^ static_cast<int>(p.x_mask);
      rho(row, c) += base * parity_sign(static_cast<unsigned>(c) & p.z_mask);
    }
  }
  return rho;
}

ReservoirVector initial_state(int n_qubits) {
  if (n_qubits < 1) throw DimensionError("initial_state: need at least one qubit");
  ReservoirVector r = ReservoirVector::Zero(pauli_dim(n_qubits));
  r(0) = 1.0 / static_cast<double>(hilbert_dim(n_qubits));
  return r;
}

StateDiagnostics validate_state(const ReservoirVector& r, int n_qubits) {
  if (r.size() != pauli_dim(n_qubits)) {
    throw DimensionError("validate_state: length must be 4^N");
  }
  StateDiagnostics d{};
  d.trace_component = r(0);
  d.expected_trace = 1.0 / static_cast<double>(hilbert_dim(n_qubits));
  const Eigen::MatrixXcd rho = vector_to_density(r);
  d.hermiticity_residual = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho);
  d.min_eigenvalue = solver.eigenvalues().minCoeff();
  return d;
}

Eigen::MatrixXd encoding_matrix(double u, int n_qubits) {
  if (n_qubits < 1) throw DimensionError("encoding_matrix: need at least one qubit");
  if (!(u >= 0.0 && u <= 1.0)) {
    throw ValidationError("encoding_matrix: input must lie in [0, 1]");
  }
  const int dim = pauli_dim(n_qubits);
  const int rest = pauli_dim(n_qubits) / 4;  // 4^(N-1)
  const double a = 1.0 - 2.0 * u;
  // new (I, q) copies old (I, q); new (Z, q) gets a * old (I, q); X/Y rows vanish
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dim, dim);
  for (int q = 0; q < rest; ++q) {
    s(q, q) = 1.0;           // first digit I
    s(3 * rest + q, q) = a;  // first digit Z
  }
  return s;
}

ReservoirVector apply_encoding(double u, int n_qubits, const ReservoirVector& r) {
  if (r.size() != pauli_dim(n_qubits)) {
    throw DimensionError("apply_encoding: length must be 4^N");
  }
  if (!(u >= 0.0 && u <= 1.0)) {
    throw ValidationError("apply_encoding: input must lie in [0, 1]");
  }
  const int rest = pauli_dim(n_qubits) / 4;
  const double a = 1.0 - 2.0 * u;
  ReservoirVector out = ReservoirVector::Zero(r.size());
  for (int q = 0; q < rest; ++q) {
    out(q) = r(q);
    out(3 * rest + q) = a * r(q);
  }
  return out;
}

// H = sum_{i<j} J_ij X_i X_j + sum_l h_l Z_l. The coupling axis must differ
// from the encoding axis: inputs enter as Z polarization of qubit 1, and XX
// couplings are what transport that polarization to the other true nodes.
// (With ZZ couplings and a transverse field the non-reset true nodes stay
// exactly zero for every coupling strength.)
Eigen::MatrixXcd ising_hamiltonian(const IsingSpec& spec) {
  const int n = spec.n_qubits();
  if (n < 1) throw DimensionError("ising_hamiltonian: need at least one qubit");
  if (spec.couplings.rows() != n || spec.couplings.cols() != n) {
    throw DimensionError("ising_hamiltonian: couplings must be N x N");
  }
  const int dim = hilbert_dim(n);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int c = 0; c < dim; ++c) {
    double diag = 0.0;
    for (int l = 0; l < n; ++l) {
      diag += spec.fields(l) * (((c >> (n - 1 - l)) & 1) ? -1.0 : 1.0);
    }
    h(c, c) = diag;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        // X_i X_j flips both bits
        h(c ^ (1 << (n - 1 - i)) ^ (1 << (n - 1 - j)), c) += spec.couplings(i, j);
      }
    }
  }
  return h;
}

int HamiltonianSpec::n_qubits() const {
  if (std::holds_alternative<IsingSpec>(model)) {
    return std::get<IsingSpec>(model).n_qubits();
  }
  const auto& m = std::get<Eigen::MatrixXcd>(model);
  int n = 0;
  while (hilbert_dim(n + 1) <= m.rows()) ++n;
  return n;
}

Eigen::MatrixXcd HamiltonianSpec::matrix() const {
  if (std::holds_alternative<IsingSpec>(model)) {
    return ising_hamiltonian(std::get<IsingSpec>(model));
  }
  const auto& m = std::get<Eigen::MatrixXcd>(model);
  const int dim = static_cast<int>(m.rows());
  if (m.cols() != dim || dim < 2 || (dim & (dim - 1)) != 0) {
    throw DimensionError("hamiltonian: dense table must be square with 2^N rows");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw ValidationError("hamiltonian: dense table is not Hermitian");
  }
  return m;
}

Eigen::MatrixXd channel_matrix(const HamiltonianSpec& spec) {
  const Eigen::MatrixXcd h = spec.matrix();
  const int dim = static_cast<int>(h.rows());
  const int n = std::bit_width(static_cast<unsigned>(dim)) - 1;

  // V = exp(-i H tau) via the spectral decomposition of Hermitian H
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  const Eigen::VectorXd lambda = solver.eigenvalues();
  Eigen::VectorXcd phases(dim);
  for (int k = 0; k < dim; ++k) {
    phases(k) = std::exp(-kI * lambda(k) * spec.tau);
  }
  const Eigen::MatrixXcd v =
      solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
  const Eigen::MatrixXcd v_dag = v.adjoint();

  const int pdim = pauli_dim(n);
  const double scale = 1.0 / static_cast<double>(dim);
  Eigen::MatrixXd u(pdim, pdim);
  for (int i = 0; i < pdim; ++i) {
    const Eigen::MatrixXcd conj_i = v * apply_pauli_left(i, n, v_dag);
    for (int j = 0; j < pdim; ++j) {
      u(j, i) = pauli_trace_product(j, n, conj_i).real() * scale;
    }
  }
  return u;
}

QrcSystem make_qrc_system(HamiltonianSpec hamiltonian, Eigen::VectorXd weights,
                          double intercept) {
  QrcSystem sys;
  sys.n_qubits = hamiltonian.n_qubits();
  if (weights.size() != sys.n_qubits) {
    throw DimensionError("qrc: weights must have one entry per qubit");
  }
  sys.hamiltonian = std::move(hamiltonian);
  sys.weights = std::move(weights);
  sys.intercept = intercept;
  sys.channel = channel_matrix(sys.hamiltonian);
  return sys;
}

QrcSystem make_random_qrc(int n_qubits, Rng& rng, double tau) {
  if (n_qubits < 1) throw DimensionError("make_random_qrc: need at least one qubit");
  IsingSpec ising;
  ising.couplings = Eigen::MatrixXd::Zero(n_qubits, n_qubits);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_qubits));
  for (int i = 0; i < n_qubits; ++i) {
    for (int j = i + 1; j < n_qubits; ++j) {
      ising.couplings(i, j) = scale * rng.uniform(-1.0, 1.0);
    }
  }
  ising.fields = Eigen::VectorXd::Ones(n_qubits);
  Eigen::VectorXd w(n_qubits);
  for (int i = 0; i < n_qubits; ++i) w(i) = rng.uniform(-1.0, 1.0);
  return make_qrc_system(HamiltonianSpec{std::move(ising), tau}, std::move(w));
}

std::vector<int> true_node_indices(int n_qubits) {
  std::vector<int> idx(static_cast<std::size_t>(n_qubits));
  for (int l = 0; l < n_qubits; ++l) {
    idx[static_cast<std::size_t>(l)] = 3 << (2 * (n_qubits - 1 - l));
  }
  return idx;
}

ReservoirVector qrc_step(const ReservoirVector& r, double u, const QrcSystem& sys) {
  if (r.size() != pauli_dim(sys.n_qubits)) {
    throw DimensionError("qrc_step: state length must be 4^N");
  }
  const double expected = 1.0 / static_cast<double>(hilbert_dim(sys.n_qubits));
  if (std::abs(r(0) - expected) > 1e-9 || !r.allFinite()) {
    throw ValidationError("qrc_step: invalid reservoir state (trace component)");
  }
  return apply_encoding(u, sys.n_qubits, sys.channel * r);
}

QrcRun run_qrc(const QrcSystem& sys, const Orbit& input, int washout) {
  if (input.dim() != 1) {
    throw DimensionError("run_qrc: input orbit must be scalar");
  }
  if (washout < 0 || washout >= input.length()) {
    throw DimensionError("run_qrc: washout must lie in [0, length)");
  }
  if (input.values().minCoeff() < 0.0 || input.values().maxCoeff() > 1.0) {
    throw ValidationError("run_qrc: inputs must lie in [0, 1]");
  }
  const std::vector<int> nodes = true_node_indices(sys.n_qubits);
  const int kept = input.length() - washout;
  Eigen::MatrixXd z(sys.n_qubits, kept);
  Eigen::MatrixXd y(1, kept);
  ReservoirVector r = initial_state(sys.n_qubits);
  for (int c = 0; c < input.length(); ++c) {
    r = qrc_step(r, input.values()(0, c), sys);
    if (c >= washout) {
      for (int l = 0; l < sys.n_qubits; ++l) {
        z(l, c - washout) = r(nodes[static_cast<std::size_t>(l)]);
      }
      y(0, c - washout) = sys.weights.dot(z.col(c - washout)) + sys.intercept;
    }
  }
  const double z_bound = 1.0 / static_cast<double>(hilbert_dim(sys.n_qubits));
  const double y_bound =
      std::max(sys.weights.cwiseAbs().sum() * z_bound + std::abs(sys.intercept), 1.0);
  return {Orbit(std::move(z), z_bound), Orbit(std::move(y), y_bound)};
}

MultiplexedSystem multiplex_product(QrcSystem q1, QrcSystem q2) {
  MultiplexedSystem sys;
  sys.registers.push_back(std::move(q1));
  sys.registers.push_back(std::move(q2));
  sys.product = true;
  return sys;
}

MultiplexedSystem multiplex_sum(QrcSystem q1, QrcSystem q2, double lambda) {
  MultiplexedSystem sys;
  sys.registers.push_back(std::move(q1));
  sys.registers.push_back(std::move(q2));
  sys.product = false;
  sys.lambda = lambda;
  return sys;
}

MultiplexedRun run_multiplexed(const MultiplexedSystem& sys, const Orbit& input,
                               int washout) {
  if (sys.registers.empty()) {
    throw DimensionError("run_multiplexed: no registers");
  }
  std::vector<QrcRun> runs;
  runs.reserve(sys.registers.size());
  int total_nodes = 0;
  for (const QrcSystem& reg : sys.registers) {
    runs.push_back(run_qrc(reg, input, washout));
    total_nodes += reg.n_qubits;
  }
  const int kept = runs.front().outputs.length();
  Eigen::MatrixXd z(total_nodes, kept);
  Eigen::MatrixXd y(1, kept);
  double z_bound = 0.0;
  for (int c = 0; c < kept; ++c) {
    int row = 0;
    double combined = sys.product ? 1.0 : 0.0;
    for (std::size_t k = 0; k < runs.size(); ++k) {
      z.block(row, c, sys.registers[k].n_qubits, 1) = runs[k].true_nodes.values().col(c);
      row += sys.registers[k].n_qubits;
      const double yk = runs[k].outputs.values()(0, c);
      if (sys.product) {
        combined *= yk;
      } else {
        combined += (k == 0 ? 1.0 : sys.lambda) * yk;
      }
    }
    y(0, c) = combined;
  }
  for (const QrcRun& run : runs) z_bound = std::max(z_bound, run.true_nodes.bound());
  double y_bound = sys.product ? 1.0 : 0.0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const double b = runs[k].outputs.bound();
    if (sys.product) {
      y_bound *= b;
    } else {
      y_bound += (k == 0 ? 1.0 : std::abs(sys.lambda)) * b;
    }
  }
  return {Orbit(std::move(z), z_bound), Orbit(std::move(y), std::max(y_bound, 1.0))};
}

Orbit run_parallel_true_nodes(const std::vector<QrcSystem>& registers,
                              const Orbit& input, int washout) {
  if (registers.empty()) {
    throw DimensionError("run_parallel_true_nodes: no registers");
  }
  std::vector<QrcRun> runs;
  runs.reserve(registers.size());
  int total_nodes = 0;
  for (const QrcSystem& reg : registers) {
    runs.push_back(run_qrc(reg, input, washout));
    total_nodes += reg.n_qubits;
  }
  const int kept = runs.front().true_nodes.length();
  Eigen::MatrixXd z(total_nodes, kept);
  int row = 0;
  double bound = 0.0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    z.block(row, 0, registers[k].n_qubits, kept) = runs[k].true_nodes.values();
    row += registers[k].n_qubits;
    bound = std::max(bound, runs[k].true_nodes.bound());
  }
  return Orbit(std::move(z), bound);
}

std::string trajectory_to_csv(const Orbit& true_nodes, const Orbit& outputs) {
  if (true_nodes.length() != outputs.length()) {
    throw DimensionError("trajectory_to_csv: node/output lengths differ");
  }
  std::string out = "t";
  for (int i = 1; i <= true_nodes.dim(); ++i) out += ",z" + std::to_string(i);
  out += ",y\n";
  char buf[40];
  const int len = true_nodes.length();
  for (int c = 0; c < len; ++c) {
    out += std::to_string(c - (len - 1));
    for (int r = 0; r < true_nodes.dim(); ++r) {
      std::snprintf(buf, sizeof(buf), ",%.17g", true_nodes.values()(r, c));
      out += buf;
    }
    std::snprintf(buf, sizeof(buf), ",%.17g\n", outputs.values()(0, c));
    out += buf;
  }
  return out;
}

nlohmann::json QrcSystem::to_json() const {
  if (!std::holds_alternative<IsingSpec>(hamiltonian.model)) {
    throw ValidationError("qrc serialization covers Ising models only");
  }
  const IsingSpec& ising = std::get<IsingSpec>(hamiltonian.model);
  nlohmann::json couplings = nlohmann::json::array();
  for (int i = 0; i < n_qubits; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < n_qubits; ++j) row.push_back(ising.couplings(i, j));
    couplings.push_back(std::move(row));
  }
  return {{"type", "qrc"},
          {"n_qubits", n_qubits},
          {"couplings", couplings},
          {"fields", std::vector<double>(ising.fields.begin(), ising.fields.end())},
          {"tau", hamiltonian.tau},
          {"weights", std::vector<double>(weights.begin(), weights.end())},
          {"intercept", intercept}};
}

QrcSystem QrcSystem::from_json(const nlohmann::json& j) {
  const int n = j.at("n_qubits").get<int>();
  IsingSpec ising;
  const auto couplings = j.at("couplings").get<std::vector<std::vector<double>>>();
  if (static_cast<int>(couplings.size()) != n) {
    throw ValidationError("qrc: couplings must be N x N");
  }
  ising.couplings.resize(n, n);
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(couplings[static_cast<std::size_t>(r)].size()) != n) {
      throw ValidationError("qrc: couplings must be N x N");
    }
    for (int c = 0; c < n; ++c) {
      ising.couplings(r, c) = couplings[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
  }
  const auto fields = j.at("fields").get<std::vector<double>>();
  if (static_cast<int>(fields.size()) != n) {
    throw ValidationError("qrc: fields must have one entry per qubit");
  }
  ising.fields = Eigen::Map<const Eigen::VectorXd>(fields.data(), n);
  const auto weights = j.at("weights").get<std::vector<double>>();
  if (static_cast<int>(weights.size()) != n) {
    throw ValidationError("qrc: weights must have one entry per qubit");
  }
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(weights.data(), n);
  return make_qrc_system(HamiltonianSpec{std::move(ising), j.at("tau").get<double>()},
                         std::move(w), j.value("intercept", 0.0));
}

}  // namespace echoverse::qrc
