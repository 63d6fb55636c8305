#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "echoverse/errors.hpp"
#include "echoverse/rng.hpp"

namespace echoverse {

/// A finite, uniformly bounded time window: the playable stand-in for a
/// left-infinite orbit. Column c holds the value at time t = c - (length-1),
/// so the newest sample sits at t = 0 and earlier columns reach into the past.
///
/// Every component is required to satisfy |x| <= bound. The bound is carried
/// per orbit rather than fixed globally for the whole input class.
class Orbit {
 public:
  /// values: dim x length matrix, one column per time step, oldest first.
  Orbit(Eigen::MatrixXd values, double bound);

  static Orbit scalar(const std::vector<double>& values, double bound);
  static Orbit zeros(int dim, int length, double bound = 1.0);

  int dim() const { return static_cast<int>(values_.rows()); }
  int length() const { return static_cast<int>(values_.cols()); }
  double bound() const { return bound_; }

  /// Value at time t, t in [-(length-1), 0].
  Eigen::VectorXd at(int t) const { return values_.col(col_of(t)); }

  /// Component 0 at time t; shorthand for scalar orbits.
  double scalar_at(int t) const { return values_(0, col_of(t)); }

  const Eigen::MatrixXd& values() const { return values_; }

  /// First `count` columns; the newest kept sample becomes t = 0.
  Orbit prefix(int count) const;

  /// Last `count` columns; time labels of kept samples are unchanged.
  Orbit keep_last(int count) const;

  bool operator==(const Orbit& other) const;
  bool operator!=(const Orbit& other) const { return !(*this == other); }

  /// CSV with header `t,x1,...,xn`, t ascending, last row t = 0.
  std::string to_csv() const;

  /// Parse the CSV form. bound <= 0 infers the bound as the max absolute
  /// component (at least 1e-12).
  static Orbit from_csv(const std::string& text, double bound = 0.0);

 private:
  int col_of(int t) const;

  Eigen::MatrixXd values_;
  double bound_;
};

/// Seeded orbit with components i.i.d. uniform in [-bound, bound].
Orbit random_orbit(Rng& rng, int dim, int length, double bound);

/// Seeded scalar orbit with values uniform in [lo, hi]; the stored bound is
/// max(|lo|, |hi|).
Orbit random_scalar_orbit(Rng& rng, int length, double lo, double hi);

}  // namespace echoverse
