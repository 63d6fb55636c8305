#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "echoverse/fading.hpp"
#include "echoverse/orbit.hpp"

namespace echoverse {

/// A map from orbits to real sequences of the same length, with the flags
/// of the bounded/causal/time-invariant contract. Built-in filters read
/// component 0 of the input, so they are meant for scalar orbits.
struct Filter {
  std::string name;
  std::function<std::vector<double>(const Orbit&)> eval;
  bool causal = true;
  bool time_invariant = true;
  /// Bound K' on |output| over orbits with the stated input bound; NaN when
  /// unknown.
  double bound = std::numeric_limits<double>::quiet_NaN();
};

/// A map from an orbit to a single real number.
struct Functional {
  std::string name;
  std::function<double(const Orbit&)> eval;
  double bound = std::numeric_limits<double>::quiet_NaN();
};

/// Shift the orbit tau steps into the past: the returned window holds
/// u_{t-tau} re-anchored so its last index is 0 (i.e. the newest tau samples
/// are dropped). Requires tau < length.
Orbit time_delay(const Orbit& u, int tau);

/// Weighted sup distance: sup_t |u_t - v_t|_inf * w(t) over the shared index
/// range. The vector norm is the max-norm. Requires matching dim and length.
double fading_distance(const Orbit& u, const Orbit& v, const FadingFunction& omega);

/// The functional associated to a filter: evaluate and take the value at
/// t = 0 (the last output entry).
Functional filter_to_functional(const Filter& b);

/// The filter associated to a functional: output at index t is the
/// functional applied to the prefix of the orbit ending at t.
Filter functional_to_filter(const Functional& h);

// -- built-in filters ------------------------------------------------------

/// out_t = u_t.
Filter identity_filter();
/// out_t = u_{t-steps}, zero before the window start.
Filter delay_filter(int steps);
/// Mean of the window [t-width+1, t], clipped at the window start.
Filter moving_average_filter(int width);
/// Truncated geometric sum out_t = sum_j alpha^j u_{t-j}; requires
/// 0 < alpha < 1.
Filter exp_smoothing_filter(double alpha);
/// out_t = u_t * u_{t-lag}, zero-padded before the window start.
Filter lag_product_filter(int lag);

/// The five built-ins above, used by the duality round-trip suites.
std::vector<Filter> builtin_filters();

// -- fading-memory diagnostics ---------------------------------------------

struct ModulusSample {
  double distance;  // d_w(u, v)
  double gap;       // |H(u) - H(v)|
};

/// Empirical continuity probe: seeded orbit pairs at controlled d_w
/// distances with the functional gap recorded per pair, sorted by distance.
/// A diagnostic for the monotone envelope, not a proof of continuity.
std::vector<ModulusSample> estimate_fading_modulus(const Functional& h,
                                                   const FadingFunction& omega,
                                                   int samples, std::uint64_t seed,
                                                   int length = 64, double bound = 1.0);

}  // namespace echoverse
