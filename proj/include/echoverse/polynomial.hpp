#pragma once

#include <Eigen/Dense>
#include <json.hpp>
#include <utility>
#include <vector>

#include "echoverse/errors.hpp"
#include "echoverse/rng.hpp"

namespace echoverse {

/// Integer power by repeated multiplication; deterministic across platforms
/// (libm pow is not).
double ipow(double base, int exponent);

/// Real polynomial in finitely many variables, stored as a canonical sorted
/// term list. Supports the ring operations used by the reservoir algebra
/// (sum, scalar multiple, product) and variable shifting for block-diagonal
/// system composition.
class Polynomial {
 public:
  struct Term {
    double coeff;
    /// Sparse exponent list: (variable index, power), variable ascending,
    /// power >= 1. Empty means the constant term.
    std::vector<std::pair<int, int>> exponents;
  };

  Polynomial() = default;  // the zero polynomial

  static Polynomial constant(double value);
  static Polynomial monomial(double coeff, std::vector<std::pair<int, int>> exponents);
  /// Seeded polynomial with `terms` monomials of total degree <= max_degree
  /// over `nvars` variables, coefficients uniform in [-1, 1].
  static Polynomial random(int nvars, int max_degree, int terms, Rng& rng);

  double eval(const Eigen::VectorXd& x) const;

  /// Same polynomial with every variable index increased by offset.
  Polynomial shifted(int offset) const;

  /// Largest variable index referenced, or -1 for constants.
  int max_variable() const;
  int total_degree() const;

  /// Sum of |coeff|; a bound for |p| on [-1,1]^n.
  double coeff_abs_sum() const;

  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator*(double scalar) const;
  friend Polynomial operator*(double scalar, const Polynomial& p) { return p * scalar; }

  bool operator==(const Polynomial& other) const;

  /// List of {"coeff": c, "exponents": [e_0, ..., e_{nvars-1}]} with dense
  /// exponent rows padded to nvars.
  nlohmann::json to_json(int nvars) const;
  static Polynomial from_json(const nlohmann::json& j);

 private:
  void normalize();

  std::vector<Term> terms_;
};

}  // namespace echoverse
