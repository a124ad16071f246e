#include <doctest.h>

#include <cmath>

#include "resonant/errors.hpp"
#include "resonant/models.hpp"
#include "resonant/workloop.hpp"

using namespace resonant;

namespace {
// x = cos t, m = c = 1: G+- = -x +- sqrt(1 - x^2), x'(F) branches -F/2 +- sqrt(2 - F^2)/2.
struct Ref {
  DynamicsModel d{1, 1, 0};
  PeriodicWaveform w = make_waveform(WaveformKind::harmonic, 1, 1, 0, 2048);
  LoadWaveform G = inelastic_load(d, w);
};
}  // namespace

TEST_SUITE("workloop") {
  TEST_CASE("PEA loop of the reference system") {
    Ref r;
    const PeaLoop L = build_pea_loop(r.d, r.w);
    CHECK(L.x1() == doctest::Approx(-1.0));
    CHECK(L.x2() == doctest::Approx(1.0));
    for (double x : {-0.9, -0.3, 0.0, 0.45, 0.8}) {
      CHECK(L.g_plus_at(x) == doctest::Approx(-x + std::sqrt(1 - x * x)).epsilon(1e-10));
      CHECK(L.g_minus_at(x) == doctest::Approx(-x - std::sqrt(1 - x * x)).epsilon(1e-10));
      CHECK(L.velocity(Branch::upper, x) > 0);
    }
    CHECK(L.area() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(L.max_arc() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(L.has_time_map());
    CHECK(check_admissible_pea(L).admissible);
  }

  TEST_CASE("PEA loop from tables") {
    std::vector<double> x, gm, ga;
    for (int i = 0; i <= 200; ++i) {
      const double s = -1 + i / 100.0;
      x.push_back(s);
      gm.push_back(-s);
      ga.push_back(std::sqrt(std::max(0.0, 1 - s * s)));
    }
    const PeaLoop L = PeaLoop::from_mid_arc(x, gm, ga, 2 * M_PI);
    CHECK(L.g_plus_at(0.3) == doctest::Approx(-0.3 + std::sqrt(0.91)).epsilon(1e-3));
    CHECK_FALSE(L.has_time_map());
  }

  TEST_CASE("SEA loop of the reference system") {
    Ref r;
    const SeaLoop S = build_sea_loop(r.G, r.w);
    CHECK(S.f1() == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
    CHECK(S.f2() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    for (double F : {-1.2, -0.5, 0.0, 0.7, 1.3}) {
      const double root = 0.5 * std::sqrt(2 - F * F);
      CHECK(S.x(Branch::upper, F) == doctest::Approx(-F / 2 + root).epsilon(1e-9));
      CHECK(S.x(Branch::lower, F) == doctest::Approx(-F / 2 - root).epsilon(1e-9));
      CHECK(S.fdot(Branch::upper, F) < 0);
    }
    const auto acc = sea_accessibility(S);
    CHECK(acc.accessible);
  }

  TEST_CASE("non-monotone kinematics are inadmissible") {
    // x = cos t + 0.4 cos 3t has four monotone segments per period.
    const FourierSeries fs(1.0, 0.0, {1.0, 0.0, 0.4}, {0.0, 0.0, 0.0});
    CHECK_THROWS_AS(PeriodicWaveform::from_series(WaveformKind::tabulated, fs, 512, 0.0), InadmissibleError);
  }
}
