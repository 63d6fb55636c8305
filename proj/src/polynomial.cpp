#include "echoverse/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace echoverse {

double ipow(double base, int exponent) {
  double out = 1.0;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

Polynomial Polynomial::constant(double value) {
  Polynomial p;
  if (value != 0.0) p.terms_.push_back({value, {}});
  return p;
}

Polynomial Polynomial::monomial(double coeff, std::vector<std::pair<int, int>> exponents) {
  Polynomial p;
  p.terms_.push_back({coeff, std::move(exponents)});
  p.normalize();
  return p;
}

Polynomial Polynomial::random(int nvars, int max_degree, int terms, Rng& rng) {
  Polynomial p;
  for (int i = 0; i < terms; ++i) {
    const int degree = rng.uniform_int(0, max_degree);
    std::map<int, int> exps;
    for (int d = 0; d < degree; ++d) exps[rng.uniform_int(0, nvars - 1)] += 1;
    std::vector<std::pair<int, int>> sparse(exps.begin(), exps.end());
    p = p + monomial(rng.uniform(-1.0, 1.0), std::move(sparse));
  }
  return p;
}

double Polynomial::eval(const Eigen::VectorXd& x) const {
  double sum = 0.0;
  for (const Term& term : terms_) {
    double value = term.coeff;
    for (const auto& [var, power] : term.exponents) {
      if (var >= x.size()) {
        throw DimensionError("polynomial evaluated with too few variables");
      }
      value *= ipow(x[var], power);
    }
    sum += value;
  }
  return sum;
}

Polynomial Polynomial::shifted(int offset) const {
  Polynomial out;
  out.terms_ = terms_;
  for (Term& term : out.terms_) {
    for (auto& [var, power] : term.exponents) var += offset;
  }
  out.normalize();
  return out;
}

int Polynomial::max_variable() const {
  int max_var = -1;
  for (const Term& term : terms_) {
    for (const auto& [var, power] : term.exponents) max_var = std::max(max_var, var);
  }
  return max_var;
}

int Polynomial::total_degree() const {
  int degree = 0;
  for (const Term& term : terms_) {
    int d = 0;
    for (const auto& [var, power] : term.exponents) d += power;
    degree = std::max(degree, d);
  }
  return degree;
}

double Polynomial::coeff_abs_sum() const {
  double sum = 0.0;
  for (const Term& term : terms_) sum += std::abs(term.coeff);
  return sum;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  Polynomial out;
  out.terms_ = terms_;
  out.terms_.insert(out.terms_.end(), other.terms_.begin(), other.terms_.end());
  out.normalize();
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  return *this + other * -1.0;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  Polynomial out;
  for (const Term& a : terms_) {
    for (const Term& b : other.terms_) {
      std::map<int, int> exps;
      for (const auto& [var, power] : a.exponents) exps[var] += power;
      for (const auto& [var, power] : b.exponents) exps[var] += power;
      Term t;
      t.coeff = a.coeff * b.coeff;
      t.exponents.assign(exps.begin(), exps.end());
      out.terms_.push_back(std::move(t));
    }
  }
  out.normalize();
  return out;
}

Polynomial Polynomial::operator*(double scalar) const {
  Polynomial out;
  out.terms_ = terms_;
  for (Term& term : out.terms_) term.coeff *= scalar;
  out.normalize();
  return out;
}

bool Polynomial::operator==(const Polynomial& other) const {
  if (terms_.size() != other.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].coeff != other.terms_[i].coeff ||
        terms_[i].exponents != other.terms_[i].exponents) {
      return false;
    }
  }
  return true;
}

void Polynomial::normalize() {
  for (Term& term : terms_) {
    // merge repeated variables, drop zero powers, sort by variable
    std::map<int, int> exps;
    for (const auto& [var, power] : term.exponents) {
      if (var < 0) throw DimensionError("polynomial variable index must be >= 0");
      if (power < 0) throw ValidationError("polynomial exponents must be >= 0");
      if (power > 0) exps[var] += power;
    }
    term.exponents.assign(exps.begin(), exps.end());
  }
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
    return a.exponents < b.exponents;
  });
  std::vector<Term> merged;
  for (const Term& term : terms_) {
    if (!merged.empty() && merged.back().exponents == term.exponents) {
      merged.back().coeff += term.coeff;
    } else {
      merged.push_back(term);
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const Term& t) { return t.coeff == 0.0; }),
               merged.end());
  terms_ = std::move(merged);
}

nlohmann::json Polynomial::to_json(int nvars) const {
  if (max_variable() >= nvars) {
    throw DimensionError("polynomial refers to more variables than serialized width");
  }
  nlohmann::json list = nlohmann::json::array();
  for (const Term& term : terms_) {
    std::vector<int> dense(static_cast<std::size_t>(nvars), 0);
    for (const auto& [var, power] : term.exponents) dense[static_cast<std::size_t>(var)] = power;
    list.push_back({{"coeff", term.coeff}, {"exponents", dense}});
  }
  return list;
}

Polynomial Polynomial::from_json(const nlohmann::json& j) {
  Polynomial p;
  for (const auto& item : j) {
    const auto dense = item.at("exponents").get<std::vector<int>>();
    Term term;
    term.coeff = item.at("coeff").get<double>();
    for (std::size_t var = 0; var < dense.size(); ++var) {
      if (dense[var] != 0) term.exponents.emplace_back(static_cast<int>(var), dense[var]);
    }
    p.terms_.push_back(std::move(term));
  }
  p.normalize();
  return p;
}

}  // namespace echoverse
