#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tunnel/error.hpp"
#include "tunnel/ftir.hpp"

using namespace tunnel;
using namespace tunnel::ftir;

namespace {

FtirGeometry at_kappa_gap(double kg, double angle_deg = 55.0) {
  FtirGeometry g;
  g.incidence_angle = radians(angle_deg);
  g.gap = kg / g.kappa_gap();
  return g;
}

}  // namespace

TEST_SUITE("ftir") {
  TEST_CASE("amplitude matches the summed-reflection closed form") {
    for (const double gap : {0.0, 100.0, 800.0, 2000.0}) {
      for (const double deg : {45.0, 55.0, 70.0}) {
        FtirGeometry g;
        g.gap = gap;
        g.incidence_angle = radians(deg);
        const cplx want = oracle::ftir_s(g.prism_index, gap, g.incidence_angle, g.vacuum_wavelength);
        CHECK(std::abs(ftir_amplitude(g).t - want) < 1e-12 * std::abs(want) + 1e-300);
      }
    }
  }

  TEST_CASE("equals the single-layer optics response") {
    const FtirGeometry g = at_kappa_gap(3.0);
    const LayerStack s{Medium(1.52), {Layer(Medium(1.0), g.gap)}, Medium(1.52)};
    const auto r = stack_response(s, Incidence(g.vacuum_wavelength, g.incidence_angle, g.polarization));
    CHECK(ftir_amplitude(g).t == r.t);
  }

  TEST_CASE("contacted prisms transmit fully; wide gaps decay at 2 kappa in intensity") {
    FtirGeometry g;
    g.gap = 0.0;
    CHECK(std::abs(ftir_amplitude(g).t) == doctest::Approx(1.0).epsilon(1e-14));
    const double k = g.kappa_gap();
    const double a = std::log(std::norm(ftir_amplitude(g.with_gap(8.0 / k)).t));
    const double b = std::log(std::norm(ftir_amplitude(g.with_gap(12.0 / k)).t));
    CHECK((b - a) / (4.0 / k) == doctest::Approx(-2.0 * k).epsilon(1e-6));
  }

  TEST_CASE("tunnelling flag and critical angle") {
    FtirGeometry g;
    CHECK(g.critical_angle() == doctest::Approx(std::asin(1.0 / 1.52)));
    CHECK(ftir_amplitude(g).tunneling);
    g.incidence_angle = radians(30.0);
    CHECK_FALSE(ftir_amplitude(g).tunneling);
    CHECK(g.kappa_gap() == 0.0);
    g.incidence_angle = g.critical_angle();
    CHECK(g.kappa_gap() == doctest::Approx(0.0).epsilon(1e-6));
  }

  TEST_CASE("no gap, no displacement") {
    FtirGeometry g;
    g.gap = 0.0;
    g.incidence_angle = radians(30.0);
    CHECK(std::abs(lateral_displacement(g, {})) < 1e-6);
  }

  TEST_CASE("displacement saturates, deflection grows linearly") {
    for (const double kg : {5.0, 6.0}) {
      const auto g1 = at_kappa_gap(kg);
      const auto g2 = g1.with_gap(2.0 * g1.gap);
      const double d1 = lateral_displacement(g1, {});
      const double d2 = lateral_displacement(g2, {});
      CHECK(std::abs(d2 - d1) / d1 < 0.02);
      const double ratio = angular_deflection(g2, {}) / angular_deflection(g1, {});
      CHECK(ratio >= 1.8);
      CHECK(ratio <= 2.2);
    }
  }

  TEST_CASE("displacement is the transverse phase slope") {
    const auto g = at_kappa_gap(2.0);
    const auto s = ftir_stack(g);
    const double k0 = 2 * kPi / g.vacuum_wavelength;
    auto t_of = [&](double ky) {
      return oracle::ftir_s(g.prism_index, g.gap, std::asin(ky / (g.prism_index * k0)), g.vacuum_wavelength);
    };
    const double ky = g.transverse_wavevector();
    CHECK(lateral_displacement(g, {}) == doctest::Approx(-oracle::phase_slope(t_of, ky, 1e-7 * ky)).epsilon(1e-6));
  }

  TEST_CASE("centroid shift: pure phase and even filters do nothing, a tilt moves it") {
    const double w = 30000.0;
    CHECK(std::abs(centroid_wavevector_shift([](double k) { return std::exp(cplx(0, 5000.0 * k)); }, 0.01, w)) <
          1e-12);
    CHECK(std::abs(centroid_wavevector_shift(
              [](double k) { return cplx(std::exp(-1e8 * (k - 0.01) * (k - 0.01)), 0.0); }, 0.01, w)) < 1e-15);
    // |filter| = exp(b u): intensity spectrum variance 1/w^2, so the shift is 2 b / w^2.
    const double b = 3000.0;
    const double got =
        centroid_wavevector_shift([&](double k) { return cplx(std::exp(b * (k - 0.01)), 0.0); }, 0.01, w);
    CHECK(got == doctest::Approx(2.0 * b / (w * w)).epsilon(1e-6));
  }

  TEST_CASE("report carries both times") {
    const auto r = ftir_report(at_kappa_gap(5.0), {});
    CHECK(r.kappa > 0.0);
    CHECK(r.bl_time > 0.0);
    CHECK(r.displacement > 0.0);
    const auto scan = gap_scan(at_kappa_gap(5.0), {1000.0, 1200.0}, {});
    REQUIRE(scan.size() == 2);
    CHECK(scan[1].bl_time / scan[0].bl_time == doctest::Approx(1.2));
  }

  TEST_CASE("argument validation") {
    FtirGeometry g;
    g.prism_index = 0.9;
    CHECK_THROWS_AS(ftir_amplitude(g), InvalidArgument);
    CHECK_THROWS_AS(lateral_displacement(FtirGeometry{}, GaussianBeam{1000.0}), InvalidArgument);
    FtirGeometry opaque;
    opaque.gap = 1e6;
    CHECK_THROWS_AS(lateral_displacement(opaque, {}), UnreliableDelay);
  }
}
