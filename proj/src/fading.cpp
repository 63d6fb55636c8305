#include "echoverse/fading.hpp"

#include <cmath>

namespace echoverse {

FadingFunction FadingFunction::exponential(double rate) {
  if (!(rate > 0.0)) {
    throw ValidationError("fading function: exponential rate must be positive");
  }
  return FadingFunction(Kind::Exponential, rate, {});
}

FadingFunction FadingFunction::power(double exponent) {
  if (!(exponent > 0.0)) {
    throw ValidationError("fading function: power exponent must be positive");
  }
  return FadingFunction(Kind::Power, exponent, {});
}

FadingFunction FadingFunction::table(std::vector<double> values) {
  if (values.empty()) {
    throw ValidationError("fading function: table needs at least one entry");
  }
  if (values.front() != 1.0) {
    throw ValidationError("fading function: table must start with w(0) = 1");
  }
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!(values[k] > 0.0) || values[k] > 1.0) {
      throw ValidationError("fading function: table entries must lie in (0, 1]");
    }
    if (k > 0 && values[k] > values[k - 1]) {
      throw ValidationError("fading function: table must be non-increasing into the past");
    }
  }
  return FadingFunction(Kind::Table, 0.0, std::move(values));
}

double FadingFunction::operator()(double t) const {
  if (t > 0.0) {
    throw DimensionError("fading function evaluated at t > 0");
  }
  switch (kind_) {
    case Kind::Exponential:
      return std::exp(rate_ * t);
    case Kind::Power:
      return std::pow(1.0 - t, -rate_);
    case Kind::Table: {
      const double k = -t;
      const std::size_t n = values_.size();
      const double last = static_cast<double>(n - 1);
      if (k <= last) {
        const std::size_t lo = static_cast<std::size_t>(k);
        if (static_cast<double>(lo) == k || lo + 1 >= n) return values_[lo];
        const double frac = k - static_cast<double>(lo);
        return values_[lo] + frac * (values_[lo + 1] - values_[lo]);
      }
      // geometric tail past the table
      double ratio = 0.5;
      if (n >= 2 && values_[n - 1] < values_[n - 2]) {
        ratio = values_[n - 1] / values_[n - 2];
      }
      return values_[n - 1] * std::pow(ratio, k - last);
    }
  }
  return 0.0;  // unreachable
}

FadingFunction FadingFunction::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "exp" || kind == "exponential") {
    return exponential(j.at("rate").get<double>());
  }
  if (kind == "power") {
    return power(j.at("exponent").get<double>());
  }
  if (kind == "table") {
    return table(j.at("values").get<std::vector<double>>());
  }
  throw ValidationError("fading function: unknown kind `" + kind + "`");
}

nlohmann::json FadingFunction::to_json() const {
  switch (kind_) {
    case Kind::Exponential:
      return {{"kind", "exp"}, {"rate", rate_}};
    case Kind::Power:
      return {{"kind", "power"}, {"exponent", rate_}};
    case Kind::Table:
      return {{"kind", "table"}, {"values", values_}};
  }
  return {};
}

}  // namespace echoverse
