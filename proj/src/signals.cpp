#include "echoverse/signals.hpp"

#include <algorithm>
#include <cmath>

namespace echoverse {

Orbit time_delay(const Orbit& u, int tau) {
  if (tau < 0) {
    throw DimensionError("time_delay: tau must be non-negative");
  }
  if (tau >= u.length()) {
    throw DimensionError("time_delay: tau must be smaller than the orbit length");
  }
  return u.prefix(u.length() - tau);
}

double fading_distance(const Orbit& u, const Orbit& v, const FadingFunction& omega) {
  if (u.dim() != v.dim() || u.length() != v.length()) {
    throw DimensionError("fading_distance: orbits must share dim and length");
  }
  const int len = u.length();
  double sup = 0.0;
  for (int c = 0; c < len; ++c) {
    const double diff = (u.values().col(c) - v.values().col(c)).cwiseAbs().maxCoeff();
    const double weighted = diff * omega(static_cast<double>(c - (len - 1)));
    sup = std::max(sup, weighted);
  }
  return sup;
}

Functional filter_to_functional(const Filter& b) {
  Functional h;
  h.name = "H[" + b.name + "]";
  h.bound = b.bound;
  h.eval = [eval = b.eval](const Orbit& u) { return eval(u).back(); };
  return h;
}

Filter functional_to_filter(const Functional& h) {
  Filter b;
  b.name = "B[" + h.name + "]";
  b.bound = h.bound;
  b.eval = [eval = h.eval](const Orbit& u) {
    std::vector<double> out(static_cast<std::size_t>(u.length()));
    for (int c = 0; c < u.length(); ++c) {
      out[static_cast<std::size_t>(c)] = eval(u.prefix(c + 1));
    }
    return out;
  };
  return b;
}

Filter identity_filter() {
  Filter f;
  f.name = "identity";
  f.bound = std::numeric_limits<double>::quiet_NaN();
  f.eval = [](const Orbit& u) {
    std::vector<double> out(static_cast<std::size_t>(u.length()));
    for (int c = 0; c < u.length(); ++c) out[static_cast<std::size_t>(c)] = u.values()(0, c);
    return out;
  };
  return f;
}

Filter delay_filter(int steps) {
  if (steps < 0) {
    throw DimensionError("delay_filter: steps must be non-negative");
  }
  Filter f;
  f.name = "delay" + std::to_string(steps);
  f.eval = [steps](const Orbit& u) {
    std::vector<double> out(static_cast<std::size_t>(u.length()), 0.0);
    for (int c = steps; c < u.length(); ++c) {
      out[static_cast<std::size_t>(c)] = u.values()(0, c - steps);
    }
    return out;
  };
  return f;
}

Filter moving_average_filter(int width) {
  if (width < 1) {
    throw DimensionError("moving_average_filter: width must be positive");
  }
  Filter f;
  f.name = "mavg" + std::to_string(width);
  f.eval = [width](const Orbit& u) {
    std::vector<double> out(static_cast<std::size_t>(u.length()));
    for (int c = 0; c < u.length(); ++c) {
      const int lo = std::max(0, c - width + 1);
      double sum = 0.0;
      for (int k = lo; k <= c; ++k) sum += u.values()(0, k);
      out[static_cast<std::size_t>(c)] = sum / static_cast<double>(c - lo + 1);
    }
    return out;
  };
  return f;
}

Filter exp_smoothing_filter(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw ValidationError("exp_smoothing_filter: alpha must lie in (0, 1)");
  }
  Filter f;
  f.name = "expsmooth";
  f.eval = [alpha](const Orbit& u) {
    std::vector<double> out(static_cast<std::size_t>(u.length()));
    double acc = 0.0;
    for (int c = 0; c < u.length(); ++c) {
      acc = u.values()(0, c) + alpha * acc;
      out[static_cast<std::size_t>(c)] = acc;
    }
    return out;
  };
  return f;
}

Filter lag_product_filter(int lag) {
  if (lag < 0) {
    throw DimensionError("lag_product_filter: lag must be non-negative");
  }
  Filter f;
  f.name = "lagprod" + std::to_string(lag);
  f.eval = [lag](const Orbit& u) {
    std::vector<double> out(static_cast<std::size_t>(u.length()), 0.0);
    for (int c = lag; c < u.length(); ++c) {
      out[static_cast<std::size_t>(c)] = u.values()(0, c) * u.values()(0, c - lag);
    }
    return out;
  };
  return f;
}

std::vector<Filter> builtin_filters() {
  return {identity_filter(), delay_filter(1), moving_average_filter(3),
          exp_smoothing_filter(0.5), lag_product_filter(2)};
}

std::vector<ModulusSample> estimate_fading_modulus(const Functional& h,
                                                   const FadingFunction& omega,
                                                   int samples, std::uint64_t seed,
                                                   int length, double bound) {
  if (samples < 1) {
    throw ValidationError("estimate_fading_modulus: samples must be >= 1");
  }
  std::vector<ModulusSample> table;
  table.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    Rng rng(Rng::derive(seed, {0x6d6f64, static_cast<std::uint64_t>(i)}));
    const Orbit u = random_orbit(rng, 1, length, bound);
    // perturb one sample; log-uniform magnitude exposes the small-distance end
    const int col = rng.uniform_int(0, length - 1);
    const double magnitude = bound * std::pow(10.0, rng.uniform(-6.0, 0.0));
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    Eigen::MatrixXd vals = u.values();
    vals(0, col) = std::clamp(vals(0, col) + sign * magnitude, -bound, bound);
    const Orbit v(vals, bound);
    table.push_back({fading_distance(u, v, omega), std::abs(h.eval(u) - h.eval(v))});
  }
  std::sort(table.begin(), table.end(),
            [](const ModulusSample& a, const ModulusSample& b) {
              return a.distance < b.distance;
            });
  return table;
}

}  // namespace echoverse
