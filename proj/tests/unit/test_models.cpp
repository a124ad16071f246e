#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "resonant/errors.hpp"
#include "resonant/models.hpp"

using namespace resonant;

TEST_SUITE("models") {
  TEST_CASE("harmonic waveform") {
    const auto w = make_waveform(WaveformKind::harmonic, 2.0, 3.0, 0.0, 256);
    CHECK(w.samples() == 256);
    CHECK(w.period() == doctest::Approx(2 * M_PI / 3));
    CHECK(w.x()[0] == doctest::Approx(2.0));
    CHECK(w.x_max() == doctest::Approx(2.0));
    CHECK(w.x_min() == doctest::Approx(-2.0));
    CHECK(w.t_of_min() == doctest::Approx(w.period() / 2));
    const double t = 0.37;
    const Derivs d = w.at(t);
    CHECK(d.v == doctest::Approx(-6.0 * std::sin(3 * t)));
    CHECK(d.j == doctest::Approx(54.0 * std::sin(3 * t)));
    CHECK(is_symmetric(w));
  }

  TEST_CASE("smoothed shapes are normalised") {
    for (auto k : {WaveformKind::smoothed_triangle, WaveformKind::smoothed_square, WaveformKind::smoothed_sawtooth}) {
      const auto w = make_waveform(k, 1.5, 1.0, 0.3, 1024);
      CHECK(w.x_max() == doctest::Approx(1.5).epsilon(1e-9));
      CHECK(w.x_min() == doctest::Approx(-1.5).epsilon(1e-9));
      CHECK(w.x()[0] == doctest::Approx(1.5).epsilon(1e-9));
    }
    CHECK(is_symmetric(make_waveform(WaveformKind::smoothed_triangle, 1, 1, 0.2, 512)));
    CHECK_FALSE(is_symmetric(make_waveform(WaveformKind::smoothed_sawtooth, 1, 1, 0.3, 512)));
  }

  TEST_CASE("unsmoothed sawtooth rings and is rejected") {
    CHECK_THROWS_AS(make_waveform(WaveformKind::smoothed_sawtooth, 1, 1, 0.0, 512), InadmissibleError);
  }

  TEST_CASE("tabulated waveform from CSV") {
    const auto path = std::filesystem::temp_directory_path() / "resonant_models_wave.csv";
    {
      std::ofstream os(path);
      os.precision(17);
      os << "t,x\n";
      for (int i = 0; i <= 64; ++i) {
        const double t = 2 * M_PI * i / 64.0;
        os << t << ',' << std::cos(t) << '\n';
      }
    }
    const auto w = read_waveform_csv(path.string());
    std::filesystem::remove(path);
    CHECK(w.kind() == WaveformKind::tabulated);
    CHECK(w.samples() == 64);
    CHECK(w.omega() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(w.at(1.0).v == doctest::Approx(-std::sin(1.0)).epsilon(1e-5));
  }

  TEST_CASE("inelastic load") {
    const DynamicsModel d{2.0, 0.5, 0.25};
    const auto w = make_waveform(WaveformKind::harmonic, 1, 1, 0, 128);
    const LoadWaveform G = inelastic_load(d, w);
    for (std::size_t i = 0; i < 128; i += 17) {
      const double t = w.t()[i], v = -std::sin(t), a = -std::cos(t);
      CHECK(G.values()[i] == doctest::Approx(2 * a + 0.5 * v + 0.25 * v * std::abs(v)));
    }
    const double t = 0.8, h = 1e-6;
    CHECK(G.rate_at(t) == doctest::Approx((G.value_at(t + h) - G.value_at(t - h)) / (2 * h)).epsilon(1e-7));
    const auto pd = dissipated_power(d, w);
    CHECK(pd[10] == doctest::Approx(d.damping(w.xdot()[10]) * w.xdot()[10]));
  }

  TEST_CASE("model validation and json") {
    CHECK_THROWS(DynamicsModel{-1, 1, 0}.validate());
    const DynamicsModel d{0.5, 1.5, 0.1};
    const DynamicsModel e = dynamics_from_json(to_json(d));
    CHECK(e.m == d.m);
    CHECK(e.c == d.c);
    CHECK(e.c_q == d.c_q);
    CHECK(waveform_kind_from_string(to_string(WaveformKind::smoothed_square)) == WaveformKind::smoothed_square);
  }
}
