#include "echoverse/lsm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace echoverse::lsm {

namespace {

std::string format_pair(double a, double b) {
  char buf[80];
  std::snprintf(buf, sizeof(buf), "(pair %g, %g)", a, b);
  return buf;
}

double hat_half_width(const SpikeTrain& u, HatVariant variant) {
  if (variant == HatVariant::UnitRadius) return 1.0;
  return std::min(1.0, u.refractory / 2.0);
}

}  // namespace

SpikeTrain validate_spike_train(std::vector<double> times, double refractory,
                                double horizon) {
  if (!(refractory > 0.0)) {
    throw ValidationError("spike train: refractory period must be positive");
  }
  if (!(horizon > 0.0)) {
    throw ValidationError("spike train: horizon must be positive");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) {
      throw ValidationError("spike train: non-finite spike time");
    }
    if (times[i] > 0.0 || times[i] < -horizon) {
      throw ValidationError("spike train: spike outside [-horizon, 0]");
    }
    if (i > 0) {
      if (times[i] <= times[i - 1]) {
        throw ValidationError("spike train: times must be strictly increasing " +
                              format_pair(times[i - 1], times[i]));
      }
      if (times[i] - times[i - 1] <= refractory) {
        throw ValidationError("spike train: refractory violation " +
                              format_pair(times[i - 1], times[i]));
      }
    }
  }
  return SpikeTrain{std::move(times), refractory, horizon};
}

std::string SpikeTrain::to_text() const {
  std::string out;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "# delta=%.17g horizon=%.17g\n", refractory, horizon);
  out += buf;
  for (double t : times) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", t);
    out += buf;
  }
  return out;
}

SpikeTrain SpikeTrain::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("spike train file: empty input");
  }
  double delta = 0.0, horizon = 0.0;
  if (std::sscanf(line.c_str(), "# delta=%lf horizon=%lf", &delta, &horizon) != 2) {
    throw ValidationError("spike train file: missing `# delta=<D> horizon=<T>` header");
  }
  std::vector<double> times;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    char* end = nullptr;
    const double t = std::strtod(line.c_str(), &end);
    if (end == line.c_str()) {
      throw ValidationError("spike train file: bad spike time `" + line + "`");
    }
    times.push_back(t);
  }
  return validate_spike_train(std::move(times), delta, horizon);
}

DecayFilter::DecayFilter(Kind kind, double a, std::vector<double> pts,
                         std::vector<double> vals)
    : kind_(kind), param_(a), points_(std::move(pts)), values_(std::move(vals)) {
  switch (kind_) {
    case Kind::Constant:
      sup_norm_ = std::abs(param_);
      break;
    case Kind::Cosine:
      sup_norm_ = 1.0;
      break;
    case Kind::Table: {
      sup_norm_ = 0.0;
      for (double v : values_) sup_norm_ = std::max(sup_norm_, std::abs(v));
      break;
    }
  }
}

DecayFilter DecayFilter::constant(double value) {
  return DecayFilter(Kind::Constant, value, {}, {});
}

DecayFilter DecayFilter::cosine(double frequency) {
  return DecayFilter(Kind::Cosine, frequency, {}, {});
}

DecayFilter DecayFilter::table(std::vector<double> points, std::vector<double> values) {
  if (points.size() != values.size() || points.empty()) {
    throw DimensionError("decay filter table: points/values size mismatch");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] < 0.0 || (i > 0 && points[i] <= points[i - 1])) {
      throw ValidationError("decay filter table: points must be >= 0 and increasing");
    }
  }
  return DecayFilter(Kind::Table, 0.0, std::move(points), std::move(values));
}

double DecayFilter::kernel(double elapsed) const {
  switch (kind_) {
    case Kind::Constant:
      return param_;
    case Kind::Cosine:
      return std::cos(param_ * elapsed);
    case Kind::Table: {
      if (elapsed < points_.front() || elapsed > points_.back()) return 0.0;
      const auto it = std::upper_bound(points_.begin(), points_.end(), elapsed);
      if (it == points_.begin()) return values_.front();
      const std::size_t hi = static_cast<std::size_t>(it - points_.begin());
      if (hi == points_.size()) return values_.back();
      const std::size_t lo = hi - 1;
      const double span = points_[hi] - points_[lo];
      const double frac = (elapsed - points_[lo]) / span;
      return values_[lo] + frac * (values_[hi] - values_[lo]);
    }
  }
  return 0.0;  // unreachable
}

double decay_filter_eval(const SpikeTrain& u, const DecayFilter& b, double t) {
  if (t > 0.0 || t < -u.horizon) {
    throw DimensionError("decay_filter_eval: t outside [-horizon, 0]");
  }
  double sum = 0.0;
  for (double s : u.times) {
    if (s > t) break;  // causal: later spikes cannot contribute
    sum += b.kernel(t - s) * std::exp(s - t);
  }
  return sum;
}

SampledFunction smooth_spike_train(const SpikeTrain& u, double dt, HatVariant variant) {
  if (!(dt > 0.0) || dt > u.refractory / 4.0) {
    throw ValidationError("smooth_spike_train: need 0 < dt <= refractory/4");
  }
  const double half_width = hat_half_width(u, variant);
  const auto count = static_cast<std::size_t>(std::ceil(u.horizon / dt - 1e-9)) + 1;
  SampledFunction f{-u.horizon, dt, std::vector<double>(count, 0.0)};
  for (std::size_t i = 0; i < count; ++i) {
    const double t = std::min(f.time_at(i), 0.0);
    double sum = 0.0;
    for (double s : u.times) {
      const double d = std::abs(t - s);
      if (d < half_width) sum += 1.0 - d / half_width;
    }
    f.values[i] = sum;
  }
  return f;
}

double spike_distance(const SpikeTrain& u, const SpikeTrain& v,
                      const FadingFunction& omega, double dt, HatVariant variant) {
  if (u.horizon != v.horizon) {
    throw DimensionError("spike_distance: horizons differ (grid mismatch)");
  }
  const double delta = std::min(u.refractory, v.refractory);
  if (dt <= 0.0) dt = delta / 10.0;
  if (dt > delta / 4.0) {
    throw ValidationError("spike_distance: dt too coarse for the refractory gap");
  }
  const SampledFunction fu = smooth_spike_train(u, dt, variant);
  const SampledFunction fv = smooth_spike_train(v, dt, variant);
  if (fu.values.size() != fv.values.size()) {
    throw DimensionError("spike_distance: sampling grids differ");
  }
  // trapezoidal rule over [-horizon, 0]
  double sum = 0.0;
  const std::size_t n = fu.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = std::min(fu.time_at(i), 0.0);
    const double g = std::abs(fu.values[i] - fv.values[i]) * omega(t);
    const bool edge = (i == 0 || i + 1 == n);
    sum += edge ? 0.5 * g : g;
  }
  return sum * dt;
}

std::vector<double> run_lsm(const LsmSystem& sys, const SpikeTrain& u,
                            const std::vector<double>& grid) {
  if (sys.filters.empty()) {
    throw DimensionError("run_lsm: system needs at least one filter");
  }
  std::vector<double> out;
  out.reserve(grid.size());
  Eigen::VectorXd x(sys.size());
  for (double t : grid) {
    for (int i = 0; i < sys.size(); ++i) {
      x(i) = decay_filter_eval(u, sys.filters[static_cast<std::size_t>(i)], t);
    }
    out.push_back(sys.readout.eval(x));
  }
  return out;
}

DecayFilter separation_witness_kernel(const SpikeTrain& u, const SpikeTrain& v) {
  if (u.times == v.times) {
    throw ValidationError("separation witness: trains are identical");
  }
  // find a spike of one train that the other lacks
  double lone = 0.0;
  bool found = false;
  for (double s : u.times) {
    if (!std::binary_search(v.times.begin(), v.times.end(), s)) {
      lone = s;
      found = true;
      break;
    }
  }
  if (!found) {
    for (double s : v.times) {
      if (!std::binary_search(u.times.begin(), u.times.end(), s)) {
        lone = s;
        found = true;
        break;
      }
    }
  }
  // narrow hat at elapsed time -lone, clear of every other spike of both trains
  double gap = 0.5;
  for (double s : u.times) {
    if (s != lone) gap = std::min(gap, std::abs(s - lone) / 2.0);
  }
  for (double s : v.times) {
    if (s != lone) gap = std::min(gap, std::abs(s - lone) / 2.0);
  }
  const double center = -lone;
  std::vector<double> points, values;
  if (center == 0.0) {
    points = {0.0, gap};
    values = {1.0, 0.0};
  } else if (center - gap > 0.0) {
    points = {center - gap, center, center + gap};
    values = {0.0, 1.0, 0.0};
  } else {
    points = {0.0, center, center + gap};
    values = {1.0 - center / gap, 1.0, 0.0};
  }
  return DecayFilter::table(std::move(points), std::move(values));
}

SpikeTrain random_spike_train(Rng& rng, double refractory, double horizon,
                              double mean_gap) {
  std::vector<double> reversed;
  double t = -rng.uniform(0.0, refractory + mean_gap);
  while (t >= -horizon) {
    reversed.push_back(t);
    t -= refractory * (1.0 + 1e-9) + mean_gap * -std::log(1.0 - rng.uniform());
  }
  std::reverse(reversed.begin(), reversed.end());
  return validate_spike_train(std::move(reversed), refractory, horizon);
}

}  // namespace echoverse::lsm
