#include "echoverse/esn.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace echoverse::esn {

namespace {

const char* squash_name(Squashing s) {
  return s == Squashing::Tanh ? "tanh" : "clipped-linear";
}

Squashing squash_from_name(const std::string& name) {
  if (name == "tanh") return Squashing::Tanh;
  if (name == "clipped-linear") return Squashing::ClippedLinear;
  throw ValidationError("esn: unknown squashing `" + name + "`");
}

Eigen::VectorXd apply_squashing(Squashing s, Eigen::VectorXd v) {
  if (s == Squashing::Tanh) {
    return v.array().tanh().matrix();
  }
  return v.cwiseMax(-1.0).cwiseMin(1.0);
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  if (rows.empty()) throw ValidationError("esn: empty matrix");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows.front().size()) {
      throw ValidationError("esn: ragged matrix rows");
    }
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

void check_shapes(const EsnSystem& sys) {
  if (sys.reservoir.rows() != sys.reservoir.cols()) {
    throw DimensionError("esn: reservoir matrix must be square");
  }
  if (sys.input.rows() != sys.reservoir.rows() || sys.bias.size() != sys.reservoir.rows()) {
    throw DimensionError("esn: input/bias shapes do not match the reservoir");
  }
  if (!(sys.lipschitz > 0.0)) {
    throw ValidationError("esn: lipschitz constant must be positive");
  }
}

}  // namespace

nlohmann::json EsnSystem::to_json() const {
  return {{"type", "esn"},
          {"reservoir", matrix_to_json(reservoir)},
          {"input", matrix_to_json(input)},
          {"bias", std::vector<double>(bias.begin(), bias.end())},
          {"squashing", squash_name(squashing)},
          {"lipschitz", lipschitz},
          {"readout", readout.to_json(reservoir_size())}};
}

EsnSystem EsnSystem::from_json(const nlohmann::json& j) {
  EsnSystem sys;
  sys.reservoir = matrix_from_json(j.at("reservoir"));
  sys.input = matrix_from_json(j.at("input"));
  const auto bias = j.at("bias").get<std::vector<double>>();
  sys.bias = Eigen::Map<const Eigen::VectorXd>(bias.data(), static_cast<Eigen::Index>(bias.size()));
  sys.squashing = squash_from_name(j.at("squashing").get<std::string>());
  sys.lipschitz = j.value("lipschitz", 1.0);
  sys.readout = Polynomial::from_json(j.at("readout"));
  check_shapes(sys);
  return sys;
}

double spectral_radius(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("spectral_radius: matrix must be square");
  }
  if (!a.allFinite()) {
    throw ValidationError("spectral_radius: matrix has non-finite entries");
  }
  if (a.rows() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, /*computeEigenvectors=*/false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double operator_norm(const Eigen::MatrixXd& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(0);
}

EspMargins esp_margins(const EsnSystem& sys) {
  check_shapes(sys);
  return {sys.lipschitz * spectral_radius(sys.reservoir),
          sys.lipschitz * operator_norm(sys.reservoir)};
}

bool check_esp_condition(const EsnSystem& sys) {
  return esp_margins(sys).spectral < 1.0;
}

Eigen::VectorXd esn_step(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                         const EsnSystem& sys) {
  check_shapes(sys);
  if (x.size() != sys.reservoir.rows() || u.size() != sys.input.cols()) {
    throw DimensionError("esn_step: state/input sizes do not match the system");
  }
  return apply_squashing(sys.squashing, sys.reservoir * x + sys.input * u + sys.bias);
}

EsnRun run_esn(const EsnSystem& sys, const Orbit& u, int washout,
               const Eigen::VectorXd& x0) {
  check_shapes(sys);
  if (u.dim() != sys.input.cols()) {
    throw DimensionError("run_esn: orbit dimension does not match the input weights");
  }
  if (washout < 0 || washout >= u.length()) {
    throw DimensionError("run_esn: washout must lie in [0, length)");
  }
  const int n = sys.reservoir_size();
  Eigen::VectorXd x = x0.size() == 0 ? Eigen::VectorXd::Zero(n).eval() : x0;
  if (x.size() != n) {
    throw DimensionError("run_esn: initial state size does not match the reservoir");
  }

  const int kept = u.length() - washout;
  Eigen::MatrixXd states(n, kept);
  Eigen::MatrixXd outputs(1, kept);
  for (int c = 0; c < u.length(); ++c) {
    x = apply_squashing(sys.squashing,
                        sys.reservoir * x + sys.input * u.values().col(c) + sys.bias);
    if (c >= washout) {
      states.col(c - washout) = x;
      outputs(0, c - washout) = sys.readout.eval(x);
    }
  }
  const double out_bound = std::max(sys.readout.coeff_abs_sum(), 1.0);
  return {Orbit(std::move(states), 1.0), Orbit(std::move(outputs), out_bound),
          check_esp_condition(sys)};
}

std::vector<double> esp_convergence_test(const EsnSystem& sys, const Orbit& u,
                                         const Eigen::VectorXd& x0a,
                                         const Eigen::VectorXd& x0b) {
  check_shapes(sys);
  Eigen::VectorXd a = x0a, b = x0b;
  std::vector<double> distances;
  distances.reserve(static_cast<std::size_t>(u.length()) + 1);
  distances.push_back((a - b).norm());
  for (int c = 0; c < u.length(); ++c) {
    const Eigen::VectorXd drive = sys.input * u.values().col(c) + sys.bias;
    a = apply_squashing(sys.squashing, sys.reservoir * a + drive);
    b = apply_squashing(sys.squashing, sys.reservoir * b + drive);
    distances.push_back((a - b).norm());
  }
  return distances;
}

namespace {

EsnSystem combine(const EsnSystem& s1, const EsnSystem& s2, Polynomial readout) {
  if (s1.input.cols() != s2.input.cols()) {
    throw DimensionError("esn combination: input dimensions differ");
  }
  if (s1.squashing != s2.squashing) {
    throw ValidationError("esn combination: squashing functions differ");
  }
  const int n1 = s1.reservoir_size();
  const int n2 = s2.reservoir_size();
  EsnSystem out;
  out.reservoir = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
  out.reservoir.topLeftCorner(n1, n1) = s1.reservoir;
  out.reservoir.bottomRightCorner(n2, n2) = s2.reservoir;
  out.input.resize(n1 + n2, s1.input.cols());
  out.input.topRows(n1) = s1.input;
  out.input.bottomRows(n2) = s2.input;
  out.bias.resize(n1 + n2);
  out.bias.head(n1) = s1.bias;
  out.bias.tail(n2) = s2.bias;
  out.squashing = s1.squashing;
  out.lipschitz = std::max(s1.lipschitz, s2.lipschitz);
  out.readout = std::move(readout);
  return out;
}

}  // namespace

EsnSystem esn_sum(const EsnSystem& s1, const EsnSystem& s2, double lambda) {
  return combine(s1, s2, s1.readout + s2.readout.shifted(s1.reservoir_size()) * lambda);
}

EsnSystem esn_product(const EsnSystem& s1, const EsnSystem& s2) {
  return combine(s1, s2, s1.readout * s2.readout.shifted(s1.reservoir_size()));
}

EsnSystem make_random_esn(int reservoir_size, int input_dim, Rng& rng,
                          const EsnDraw& draw) {
  if (reservoir_size < 1 || input_dim < 1) {
    throw DimensionError("make_random_esn: sizes must be positive");
  }
  EsnSystem sys;
  sys.reservoir.resize(reservoir_size, reservoir_size);
  for (int r = 0; r < reservoir_size; ++r) {
    for (int c = 0; c < reservoir_size; ++c) sys.reservoir(r, c) = rng.uniform(-1.0, 1.0);
  }
  const double rho = spectral_radius(sys.reservoir);
  if (rho > 0.0) sys.reservoir *= draw.spectral_radius / rho;
  sys.input.resize(reservoir_size, input_dim);
  for (int r = 0; r < reservoir_size; ++r) {
    for (int c = 0; c < input_dim; ++c) sys.input(r, c) = draw.input_scale * rng.uniform(-1.0, 1.0);
  }
  sys.bias.resize(reservoir_size);
  for (int r = 0; r < reservoir_size; ++r) sys.bias(r) = draw.bias_scale * rng.uniform(-1.0, 1.0);
  return sys;
}

int default_washout(const EsnSystem& sys) {
  const double r = esp_margins(sys).operator_nrm;
  if (r < 1.0 && r > 0.0) {
    return std::max(100, static_cast<int>(std::ceil(10.0 / -std::log(r))));
  }
  return 100;
}

}  // namespace echoverse::esn
