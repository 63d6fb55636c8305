#pragma once

#include <string>
#include <vector>

#include "echoverse/fading.hpp"
#include "echoverse/polynomial.hpp"
#include "echoverse/rng.hpp"

namespace echoverse::lsm {

/// Refractory spike train: strictly increasing event times in [-horizon, 0]
/// with consecutive gaps strictly greater than the refractory period.
struct SpikeTrain {
  std::vector<double> times;
  double refractory;  // Delta
  double horizon;     // T_h

  bool operator==(const SpikeTrain& other) const {
    return times == other.times && refractory == other.refractory &&
           horizon == other.horizon;
  }

  /// File form: header `# delta=<D> horizon=<T>`, one spike time per line.
  std::string to_text() const;
  static SpikeTrain from_text(const std::string& text);
};

/// Checked constructor; rejects unordered or refractory-violating trains,
/// naming the offending pair.
SpikeTrain validate_spike_train(std::vector<double> times, double refractory,
                                double horizon);

/// Linear filter with exponentially decaying memory,
///
///   (B u)(t) = sum_{s in u, s <= t} b(t - s) * e^{s - t},
///
/// where the kernel b is a bounded continuous function of the elapsed time
/// t - s >= 0. Parametrizing b by elapsed time (rather than by the absolute
/// spike time) is what makes the filter exactly time invariant for every
/// kernel in the library; at t = 0 the two parametrizations describe the
/// same family of functionals.
class DecayFilter {
 public:
  enum class Kind { Constant, Cosine, Table };

  static DecayFilter constant(double value);
  /// b(x) = cos(frequency * x).
  static DecayFilter cosine(double frequency);
  /// Piecewise-linear kernel through (points, values); zero outside the
  /// covered range. Points must be strictly increasing and >= 0.
  static DecayFilter table(std::vector<double> points, std::vector<double> values);

  double kernel(double elapsed) const;
  double sup_norm() const { return sup_norm_; }
  Kind kind() const { return kind_; }

 private:
  DecayFilter(Kind kind, double a, std::vector<double> pts, std::vector<double> vals);

  Kind kind_;
  double param_;
  std::vector<double> points_, values_;
  double sup_norm_;
};

/// Evaluate the filter at time t <= 0: the delta train collapses the
/// integral to a sum over spikes at or before t.
double decay_filter_eval(const SpikeTrain& u, const DecayFilter& b, double t);

/// Which bump half-width the smoothing uses. The paper-style radius is a
/// fixed 1 regardless of the refractory gap (bumps of nearby spikes from two
/// different trains may then overlap); the non-overlapping variant narrows
/// the hat to min(1, Delta/2).
enum class HatVariant { NonOverlapping, UnitRadius };

/// Triangular-hat smoothing f_u sampled on the grid t = -horizon + k*dt,
/// last sample at t = 0. f_u(s) = 1 at each spike and 0 at distance >= the
/// half-width. Requires dt <= Delta/4 so every bump is resolved.
struct SampledFunction {
  double t0;
  double dt;
  std::vector<double> values;

  double time_at(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
};

SampledFunction smooth_spike_train(const SpikeTrain& u, double dt,
                                   HatVariant variant = HatVariant::NonOverlapping);

/// Smoothed metric d^c_w(u, v) = integral over [-horizon, 0] of
/// |f_u - f_v| * w, by trapezoidal quadrature at step dt (dt <= 0 picks
/// min(refractory)/10). Requires equal horizons.
double spike_distance(const SpikeTrain& u, const SpikeTrain& v,
                      const FadingFunction& omega, double dt = 0.0,
                      HatVariant variant = HatVariant::NonOverlapping);

/// Reservoir of decay filters with a polynomial readout over the N filter
/// outputs.
struct LsmSystem {
  std::vector<DecayFilter> filters;
  Polynomial readout;
  double dt = 0.05;  // sample step for smoothing-based operations

  int size() const { return static_cast<int>(filters.size()); }
};

/// Evaluate all filters then the readout at each grid time (times <= 0,
/// within the train's horizon).
std::vector<double> run_lsm(const LsmSystem& sys, const SpikeTrain& u,
                            const std::vector<double>& grid);

/// A kernel distinguishing two distinct trains: a narrow hat centered on a
/// spike that the trains do not share, so the t = 0 filter values differ.
DecayFilter separation_witness_kernel(const SpikeTrain& u, const SpikeTrain& v);

/// Seeded refractory train: spikes walk backward from 0 with gaps
/// refractory + Exp(mean_gap), truncated at the horizon.
SpikeTrain random_spike_train(Rng& rng, double refractory, double horizon,
                              double mean_gap);

}  // namespace echoverse::lsm
