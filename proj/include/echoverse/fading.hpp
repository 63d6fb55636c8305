#pragma once

#include <json.hpp>
#include <vector>

#include "echoverse/errors.hpp"

namespace echoverse {

/// Monotone weight w : t <= 0 -> (0, 1] with w(0) = 1 and w(t) -> 0 for
/// t -> -inf, defining the weighted sup metric d_w. Three forms:
///
///   exponential(a):  w(t) = exp(a * t), a > 0          (the default, a = 0.1)
///   power(p):        w(t) = (1 - t)^(-p), p > 0
///   table(v):        w(-k) = v[k] with v[0] = 1, positive, non-increasing;
///                    linear interpolation between grid points and a
///                    geometric tail beyond the last entry.
///
/// The zero-limit requirement is checked on the evaluated grid only.
class FadingFunction {
 public:
  enum class Kind { Exponential, Power, Table };

  static FadingFunction exponential(double rate);
  static FadingFunction power(double exponent);
  static FadingFunction table(std::vector<double> values);

  /// Evaluate at t <= 0 (real-valued t is accepted for the continuous-time
  /// quadrature in the spiking module).
  double operator()(double t) const;

  Kind kind() const { return kind_; }
  double rate() const { return rate_; }

  /// Config form, e.g. {"kind":"exp","rate":0.1}.
  static FadingFunction from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  FadingFunction(Kind kind, double rate, std::vector<double> values)
      : kind_(kind), rate_(rate), values_(std::move(values)) {}

  Kind kind_;
  double rate_ = 0.1;           // exponential rate or power exponent
  std::vector<double> values_;  // table form
};

}  // namespace echoverse
