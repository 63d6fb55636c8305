#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "echoverse/lsm.hpp"
#include "oracles.hpp"

using namespace echoverse;
using lsm::DecayFilter;
using lsm::SpikeTrain;

namespace {

SpikeTrain train_of(std::vector<double> times, double delta = 0.5, double horizon = 50.0) {
  return lsm::validate_spike_train(std::move(times), delta, horizon);
}

// Spike times on the 2^-16 grid: integer shifts are then exact in binary
// arithmetic, so elapsed times are bitwise identical before and after.
double snap(double x) { return std::round(x * 65536.0) / 65536.0; }

SpikeTrain dyadic_train(Rng& rng, double refractory, double horizon, double mean_gap) {
  std::vector<double> reversed;
  double t = -snap(rng.uniform(0.0, refractory + mean_gap));
  while (t >= -horizon) {
    reversed.push_back(t);
    t -= refractory + snap(rng.uniform(0.1 * mean_gap, mean_gap)) + 1.0 / 65536.0;
  }
  std::reverse(reversed.begin(), reversed.end());
  return lsm::validate_spike_train(std::move(reversed), refractory, horizon);
}

}  // namespace

TEST_CASE("spike train validation") {
  CHECK(train_of({}).times.empty());  // empty train is vacuously valid
  CHECK(train_of({-3.0, -1.0}).times.size() == 2);

  CHECK_THROWS_WITH_AS(static_cast<void>(train_of({-1.0, -0.7})),
                       doctest::Contains("(pair -1, -0.7)"), ValidationError);
  CHECK_THROWS_AS(static_cast<void>(train_of({-1.0, -2.0})), ValidationError);
  CHECK_THROWS_AS(static_cast<void>(train_of({-60.0})), ValidationError);
  CHECK_THROWS_AS(static_cast<void>(train_of({0.5})), ValidationError);
}

TEST_CASE("spike train file round trip") {
  const SpikeTrain u = train_of({-4.25, -2.0, -0.5});
  const SpikeTrain back = SpikeTrain::from_text(u.to_text());
  CHECK(back == u);
  CHECK_THROWS_AS(SpikeTrain::from_text("no header\n-1\n"), ValidationError);
}

TEST_CASE("decay filter evaluation") {
  const DecayFilter one = DecayFilter::constant(1.0);

  SUBCASE("empty train sums to zero") {
    CHECK(lsm::decay_filter_eval(train_of({}), one, 0.0) == 0.0);
  }

  SUBCASE("spike at the evaluation time contributes e^0") {
    CHECK(lsm::decay_filter_eval(train_of({-1.0}), one, -1.0) == 1.0);
  }

  SUBCASE("two spikes sum their decayed contributions") {
    const double got = lsm::decay_filter_eval(train_of({-2.0, -1.0}), one, 0.0);
    CHECK(got == doctest::Approx(std::exp(-2.0) + std::exp(-1.0)).epsilon(1e-14));
    CHECK(got == doctest::Approx(0.50321472440805504).epsilon(1e-12));
  }

  SUBCASE("causality: spikes after t never contribute") {
    const SpikeTrain u = train_of({-3.0, -1.0});
    const SpikeTrain v = train_of({-3.0});
    const DecayFilter cos = DecayFilter::cosine(1.7);
    CHECK(lsm::decay_filter_eval(u, cos, -2.0) == lsm::decay_filter_eval(v, cos, -2.0));
  }

  SUBCASE("time invariance is exact for every kernel") {
    for (int trial = 0; trial < 100; ++trial) {
      Rng local(Rng::derive(41, {static_cast<std::uint64_t>(trial)}));
      const SpikeTrain u = dyadic_train(local, 0.5, 20.0, 0.8);
      const DecayFilter kernels[] = {DecayFilter::constant(local.uniform(0.5, 1.5)),
                                     DecayFilter::cosine(local.uniform(0.5, 3.0)),
                                     DecayFilter::table({0.0, 1.0, 3.0}, {1.0, 0.3, 0.0})};
      // shift everything one unit into the past
      std::vector<double> shifted = u.times;
      for (double& s : shifted) s -= 1.0;
      const SpikeTrain v = lsm::validate_spike_train(shifted, 0.5, 25.0);
      const double t = -snap(local.uniform(0.0, 2.0));
      for (const DecayFilter& b : kernels) {
        CHECK(lsm::decay_filter_eval(u, b, t) == lsm::decay_filter_eval(v, b, t - 1.0));
      }
    }
  }

  SUBCASE("fading bound over a shared recent window") {
    // trains agree on [-T, 0] and differ arbitrarily before
    const double delta = 0.5, horizon = 50.0, norm = 1.3;
    const DecayFilter b = DecayFilter::constant(norm);
    for (double T : {5.0, 10.0, 20.0}) {
      for (int trial = 0; trial < 30; ++trial) {
        Rng local(Rng::derive(42, {static_cast<std::uint64_t>(T), static_cast<std::uint64_t>(trial)}));
        std::vector<double> shared;
        double t = -local.uniform(0.0, 1.0);
        while (t >= -T) {
          shared.push_back(t);
          t -= delta + local.uniform(0.1, 1.0);
        }
        std::reverse(shared.begin(), shared.end());
        const double oldest_shared = shared.front();
        auto clutter = [&](std::vector<double> base) {
          double s = std::min(oldest_shared, -T) - delta - local.uniform(0.01, 1.0);
          std::vector<double> past;
          while (s >= -horizon) {
            past.push_back(s);
            s -= delta + local.uniform(0.001, 0.4);
          }
          std::reverse(past.begin(), past.end());
          past.insert(past.end(), base.begin(), base.end());
          return past;
        };
        const SpikeTrain u = lsm::validate_spike_train(clutter(shared), delta, horizon);
        const SpikeTrain v = lsm::validate_spike_train(clutter(shared), delta, horizon);
        const double gap = std::abs(lsm::decay_filter_eval(u, b, 0.0) -
                                    lsm::decay_filter_eval(v, b, 0.0));
        CHECK(gap <= norm * std::exp(-T) * (horizon / delta + 1.0));
      }
    }
  }
}

TEST_CASE("spike smoothing") {
  SUBCASE("empty train smooths to zero") {
    const auto f = lsm::smooth_spike_train(train_of({}, 1.0, 8.0), 0.25);
    for (double v : f.values) CHECK(v == 0.0);
  }

  SUBCASE("unit peak at the spike, zero beyond the support") {
    const auto f = lsm::smooth_spike_train(train_of({-2.0}, 1.0, 8.0), 0.25);
    const auto at = [&](double t) {
      return f.values[static_cast<std::size_t>(std::lround((t - f.t0) / f.dt))];
    };
    CHECK(at(-2.0) == 1.0);
    CHECK(at(-3.5) == 0.0);
    CHECK(at(-2.25) == doctest::Approx(0.5));  // half-width is min(1, 1/2)
  }

  SUBCASE("matches the hat-sum oracle on the grid") {
    const SpikeTrain u = train_of({-4.0, -1.0}, 1.0, 8.0);
    const auto f = lsm::smooth_spike_train(u, 0.125);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      const double t = std::min(f.time_at(i), 0.0);
      CHECK(f.values[i] == doctest::Approx(oracles::hat_sum(u.times, t, 0.5)).epsilon(1e-14));
    }
  }

  SUBCASE("paper-radius variant widens the hat to 1") {
    const SpikeTrain u = train_of({-2.0}, 1.0, 8.0);
    const auto f = lsm::smooth_spike_train(u, 0.25, lsm::HatVariant::UnitRadius);
    const auto at = [&](double t) {
      return f.values[static_cast<std::size_t>(std::lround((t - f.t0) / f.dt))];
    };
    CHECK(at(-2.5) == doctest::Approx(0.5));
  }

  SUBCASE("coarse grids are rejected") {
    CHECK_THROWS_AS(lsm::smooth_spike_train(train_of({-1.0}, 0.5, 8.0), 0.2),
                    ValidationError);
  }
}

TEST_CASE("smoothed spike metric") {
  const FadingFunction omega = FadingFunction::exponential(1.0);

  SUBCASE("identical trains have distance zero") {
    const SpikeTrain u = train_of({-3.0, -1.5});
    CHECK(lsm::spike_distance(u, u, omega) == 0.0);
  }

  SUBCASE("horizon mismatch is a grid error") {
    CHECK_THROWS_AS(lsm::spike_distance(train_of({-1.0}, 0.5, 50.0),
                                        train_of({-1.0}, 0.5, 40.0), omega),
                    DimensionError);
  }

  SUBCASE("single extra spike: distance decays with its age") {
    const double delta = 0.5;
    const SpikeTrain empty = train_of({}, delta, 50.0);
    double previous = 1e9;
    for (double T : {1.0, 5.0, 10.0}) {
      const SpikeTrain u = train_of({-T}, delta, 50.0);
      const double d = lsm::spike_distance(u, empty, omega);
      // hat area is h = 0.25, weight at most e^{-T + h}
      CHECK(d <= 0.25 * std::exp(-T + 0.25) * 1.01);
      CHECK(d < previous);
      previous = d;
    }
  }

  SUBCASE("matches the quadrature oracle") {
    for (int trial = 0; trial < 20; ++trial) {
      Rng local(Rng::derive(43, {static_cast<std::uint64_t>(trial)}));
      const SpikeTrain u = lsm::random_spike_train(local, 0.5, 20.0, 1.0);
      const SpikeTrain v = lsm::random_spike_train(local, 0.5, 20.0, 1.0);
      const double dt = 0.05;
      const double expected = oracles::spike_distance_quadrature(
          u.times, v.times, 0.25, 0.25, 20.0, dt,
          [](double t) { return std::exp(t); });
      CHECK(lsm::spike_distance(u, v, omega, dt) ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  }

  SUBCASE("metric axioms under quadrature") {
    for (int trial = 0; trial < 30; ++trial) {
      Rng local(Rng::derive(44, {static_cast<std::uint64_t>(trial)}));
      const SpikeTrain u = lsm::random_spike_train(local, 0.5, 15.0, 1.0);
      const SpikeTrain v = lsm::random_spike_train(local, 0.5, 15.0, 1.0);
      const SpikeTrain z = lsm::random_spike_train(local, 0.5, 15.0, 1.0);
      const double duv = lsm::spike_distance(u, v, omega);
      CHECK(duv >= 0.0);
      CHECK(duv == lsm::spike_distance(v, u, omega));
      CHECK(lsm::spike_distance(u, z, omega) <=
            duv + lsm::spike_distance(v, z, omega) + 1e-9);
      if (u.times != v.times) CHECK(duv > 0.0);
    }
  }
}

TEST_CASE("run_lsm") {
  lsm::LsmSystem sys;
  sys.filters.push_back(DecayFilter::constant(1.0));
  sys.readout = Polynomial::monomial(1.0, {{0, 1}});
  const std::vector<double> grid{-3.0, -2.0, -1.0, 0.0};

  SUBCASE("empty train gives the readout at zero") {
    sys.readout = sys.readout + Polynomial::constant(0.25);
    const auto out = lsm::run_lsm(sys, train_of({}), grid);
    for (double y : out) CHECK(y == 0.25);
  }

  SUBCASE("identity readout reproduces the filter trace") {
    const SpikeTrain u = train_of({-2.5, -1.0});
    const auto out = lsm::run_lsm(sys, u, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(out[i] == lsm::decay_filter_eval(u, sys.filters[0], grid[i]));
    }
  }

  SUBCASE("product readout multiplies independent filter traces") {
    lsm::LsmSystem two;
    two.filters.push_back(DecayFilter::constant(1.0));
    two.filters.push_back(DecayFilter::cosine(2.0));
    two.readout = Polynomial::monomial(1.0, {{0, 1}, {1, 1}});
    const SpikeTrain u = train_of({-3.4, -1.2, -0.3});
    const auto out = lsm::run_lsm(two, u, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double a = lsm::decay_filter_eval(u, two.filters[0], grid[i]);
      const double b = lsm::decay_filter_eval(u, two.filters[1], grid[i]);
      CHECK(out[i] == doctest::Approx(a * b).epsilon(1e-14));
    }
  }
}

TEST_CASE("separation witness kernel") {
  int distinct_pairs = 0;
  for (int trial = 0; trial < 40; ++trial) {
    Rng local(Rng::derive(45, {static_cast<std::uint64_t>(trial)}));
    const SpikeTrain u = lsm::random_spike_train(local, 0.5, 20.0, 1.0);
    const SpikeTrain v = lsm::random_spike_train(local, 0.5, 20.0, 1.0);
    if (u.times == v.times) continue;
    ++distinct_pairs;
    const DecayFilter witness = lsm::separation_witness_kernel(u, v);
    const double gap = std::abs(lsm::decay_filter_eval(u, witness, 0.0) -
                                lsm::decay_filter_eval(v, witness, 0.0));
    CHECK(gap > 0.0);
  }
  CHECK(distinct_pairs > 30);
}
