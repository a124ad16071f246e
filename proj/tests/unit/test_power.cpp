#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "resonant/models.hpp"
#include "resonant/pea_design.hpp"
#include "resonant/power.hpp"

using namespace resonant;

namespace {
PeriodicSignal trig(double (*f)(double), double (*df)(double), std::size_t n) {
  std::vector<double> v(n), r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2 * M_PI * static_cast<double>(i) / static_cast<double>(n);
    v[i] = f(t);
    r[i] = df(t);
  }
  return PeriodicSignal(2 * M_PI, v, r, f, df);
}
double cos_(double t) { return std::cos(t); }
double sin_(double t) { return std::sin(t); }
double msin(double t) { return -std::sin(t); }
}  // namespace

TEST_SUITE("power") {
  TEST_CASE("in-phase load and velocity") {
    const auto F = trig(cos_, msin, 512), v = trig(cos_, msin, 512);
    const auto r = metrics_time(F, v);
    CHECK(r.p_a == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.p_b == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.p_c == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.globally_resonant());
  }

  TEST_CASE("quadrature load and velocity") {
    const auto F = trig(cos_, msin, 512), v = trig(sin_, cos_, 512);
    const auto r = metrics_time(F, v, Penalty::constant(1.33));
    CHECK(std::abs(r.p_a) < 1e-14);
    CHECK(r.p_b == doctest::Approx(1 / M_PI).epsilon(1e-8));
    CHECK(r.p_c == doctest::Approx(0.5 / M_PI).epsilon(1e-8));
    CHECK(r.p_d == doctest::Approx(1.33 * 0.5 / M_PI).epsilon(1e-8));
    CHECK(r.peak_power == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(r.min_power == doctest::Approx(-0.5).epsilon(1e-4));
    CHECK_FALSE(r.globally_resonant());
  }

  TEST_CASE("penalty Q reproduces metrics a, c and b") {
    const auto F = trig(cos_, msin, 256), v = trig([](double t) { return std::sin(t) + 0.3; }, cos_, 256);
    const auto b = metrics_time(F, v, Penalty::constant(2.0));
    CHECK(b.p_d == doctest::Approx(b.p_b).epsilon(1e-14));
    CHECK(metrics_time(F, v, Penalty::constant(1.0)).p_d == doctest::Approx(b.p_c).epsilon(1e-14));
    CHECK(metrics_time(F, v, Penalty::constant(0.0)).p_d == doctest::Approx(b.p_a).epsilon(1e-14));
    CHECK(metrics_time(F, v, Penalty::sampled(std::vector<double>(256, 2.0))).p_d == doctest::Approx(b.p_b).epsilon(1e-14));
  }

  TEST_CASE("penalty validation") {
    CHECK_THROWS_AS(Penalty::constant(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(Penalty::sampled({1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(Penalty::sampled({}), std::invalid_argument);
    const auto q = Penalty::sampled({1.0, 3.0});
    CHECK(q.at(0.5, 2.0) == doctest::Approx(2.0));
  }

  TEST_CASE("force metrics, duty cycle, transfer ratio") {
    const auto F = trig(cos_, msin, 1024);
    const auto fm = force_metrics(F);
    CHECK(fm.f2 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fm.abs_f == doctest::Approx(2 / M_PI).epsilon(1e-6));
    CHECK(fm.abs_fdot == doctest::Approx(2 / M_PI).epsilon(1e-6));
    CHECK(fm.fdot2 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(duty_cycle(F) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK_THROWS(duty_cycle(F, 0.5));
    std::vector<double> out(64), in(64);
    for (int i = 0; i < 64; ++i) in[i] = 1.0 + std::cos(2 * M_PI * i / 64.0), out[i] = 0.5 * in[i];
    CHECK(transfer_ratio(out, in) == doctest::Approx(0.5));
    CHECK_THROWS(transfer_ratio(out, std::vector<double>(64, 0.0)));
  }

  TEST_CASE("loop-domain metrics match the time domain") {
    const DynamicsModel d{1, 1, 0};
    const auto w = make_waveform(WaveformKind::harmonic, 1, 1, 0, 2048);
    const auto G = inelastic_load(d, w);
    const PeaLoop L = build_pea_loop(d, w);
    for (double k : {0.0, 1.0, 2.5}) {
      const auto fs = linear_profile(L, k);
      const auto F = pea_actuator_load(G, w, fs);
      const auto t = metrics_time(F, w.velocity());
      const auto l = metrics_pea_loop(L, fs);
      CHECK(l.p_a == doctest::Approx(t.p_a).epsilon(1e-8));
      CHECK(l.p_b == doctest::Approx(t.p_b).epsilon(1e-8));
      CHECK(l.p_c == doctest::Approx(t.p_c).epsilon(1e-8));
    }
  }

  TEST_CASE("transfer ratio of the reference designs") {
    const DynamicsModel d{1, 1, 0};
    const auto w = make_waveform(WaveformKind::harmonic, 1, 1, 0, 2048);
    const auto G = inelastic_load(d, w);
    const PeaLoop L = build_pea_loop(d, w);
    CHECK(transfer_ratio_pea(d, w, pea_actuator_load(G, w, linear_profile(L, 1.0))) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(transfer_ratio_pea(d, w, G) < 0.999);
  }
}
