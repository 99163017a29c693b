#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tunnel/delay.hpp"
#include "tunnel/error.hpp"
#include "tunnel/hom.hpp"
#include "tunnel/numdiff.hpp"

using namespace tunnel;

TEST_SUITE("delay") {
  TEST_CASE("Berkeley mirror at 702 nm") {
    const auto r = photonic_wigner(berkeley_mirror(), Incidence(702.0, 0.0, Polarization::S));
    CHECK(r.transit_time == doctest::Approx(2.0).epsilon(0.2));
    CHECK(r.relative_delay < 0.0);
    CHECK(r.effective_velocity > 1.0);
    CHECK(r.vacuum_time == doctest::Approx(berkeley_mirror().total_thickness() / kSpeedOfLight));
  }

  TEST_CASE("report identities hold exactly") {
    for (const double deg : {0.0, 30.0, 55.0}) {
      for (const auto pol : {Polarization::S, Polarization::P}) {
        const auto r = photonic_wigner(berkeley_mirror(), Incidence(702.0, radians(deg), pol));
        CHECK(r.relative_delay == r.transit_time - r.vacuum_time);
        CHECK(r.effective_velocity == r.vacuum_time / r.transit_time);
        CHECK((r.relative_delay < 0.0) == (r.effective_velocity > 1.0));
        CHECK(r.larmor_total == std::hypot(r.larmor_y, r.larmor_z));
        CHECK(r.larmor_total >= std::abs(r.larmor_y));
        CHECK(r.larmor_y == r.transit_time);
      }
    }
  }

  TEST_CASE("transit time equals an independent phase slope of the direct solve") {
    const auto s = berkeley_mirror();
    for (const double lam : {650.0, 702.0, 760.0}) {
      const double w = angular_frequency(lam);
      auto t_of = [&](double x) { return oracle::direct_solve(s, x, 0.0, Polarization::S).t; };
      const double want = oracle::phase_slope(t_of, w, 1e-6 * w);
      CHECK(photonic_wigner(s, Incidence(lam, 0.0, Polarization::S)).transit_time ==
            doctest::Approx(want).epsilon(1e-6));
    }
  }

  TEST_CASE("step halving changes the delay by < 1e-6 relative") {
    const auto s = berkeley_mirror();
    for (const double deg : {0.0, 40.0, 55.0}) {
      const double w = angular_frequency(702.0);
      auto t_of = [&](double x) { return stack_response_at(s, x, radians(deg), Polarization::P).t; };
      const double h = numdiff::step_for(w);
      const cplx a = numdiff::log_derivative(t_of, w, h);
      const cplx b = numdiff::log_derivative(t_of, w, 0.5 * h);
      CHECK(std::abs(a.imag() - b.imag()) < 1e-6 * std::abs(a.imag()));
      CHECK(std::abs(a - b) < 1e-6 * std::abs(a));
    }
  }

  TEST_CASE("near-vacuum slab takes thickness / c") {
    for (const double d : {10.0, 1000.0, 50000.0}) {
      const LayerStack s{Medium(1.0), {Layer(Medium(1.0 + 1e-6), d)}, Medium(1.0)};
      const auto r = photonic_wigner(s, Incidence(702.0, 0.0, Polarization::S));
      CHECK(r.transit_time == doctest::Approx(d / kSpeedOfLight).epsilon(1e-4));
    }
  }

  TEST_CASE("coated path is early against the uncoated control at normal incidence") {
    const auto coated = berkeley_mirror();
    const Incidence inc(702.0, 0.0, Polarization::S);
    const double control = photonic_wigner(hom::uncoated_control(coated), inc).transit_time;
    CHECK(photonic_wigner(coated, inc).transit_time - control < 0.0);
  }

  TEST_CASE("Hartman behaviour in the period count") {
    double prev_transit = 0.0;
    bool negative_seen = false;
    for (int layers = 3; layers <= 41; layers += 2) {
      const auto s = quarter_wave_stack(702.0, 2.22, 1.45, layers, Medium(1.0), Medium(1.45));
      const auto r = photonic_wigner(s, Incidence(702.0, 0.0, Polarization::S));
      CHECK(r.transit_time < 2.5);
      if (layers > 11) CHECK(std::abs(r.transit_time - prev_transit) < 0.05);
      if (negative_seen) CHECK(r.relative_delay < 0.0);
      negative_seen = negative_seen || r.relative_delay < 0.0;
      prev_transit = r.transit_time;
    }
    CHECK(negative_seen);
  }

  TEST_CASE("unit cell detection") {
    const auto cell = unit_cell(berkeley_mirror());
    REQUIRE(cell.size() == 2);
    CHECK(cell[0].medium.index() == doctest::Approx(2.22));
    CHECK(cell[1].medium.index() == doctest::Approx(1.45));
    const LayerStack odd{Medium(1.0), {Layer(Medium(2.0), 50.0), Layer(Medium(1.5), 60.0),
                                       Layer(Medium(1.7), 70.0)}, Medium(1.0)};
    CHECK_THROWS_AS(unit_cell(odd), InvalidArgument);
  }

  TEST_CASE("Bloch BL time: zero at midgap, rising toward the edge, linear in periods") {
    const auto s = berkeley_mirror();
    const Incidence mid(700.0, 0.0, Polarization::S);
    CHECK(photonic_bl_time(s, mid) == doctest::Approx(0.0).epsilon(1e-6));
    double prev = 0.0;
    for (const double lam : {710.0, 730.0, 760.0, 790.0}) {
      const double t = photonic_bl_time(s, Incidence(lam, 0.0, Polarization::S));
      CHECK(t > prev);
      prev = t;
    }
    const auto twice = quarter_wave_stack(700.0, 2.22, 1.45, 21, Medium(1.0), Medium(1.45));
    const Incidence detuned(740.0, 0.0, Polarization::S);
    const double ratio = photonic_bl_time(twice, detuned) / photonic_bl_time(s, detuned);
    CHECK(ratio == doctest::Approx(twice.total_thickness() / s.total_thickness()).epsilon(1e-9));
    CHECK_THROWS_AS(photonic_bl_time(s, Incidence(1000.0, 0.0, Polarization::S)), OutsideStopBand);
    CHECK_FALSE(in_stop_band(s, Incidence(1000.0, 0.0, Polarization::S)));
    CHECK(in_stop_band(s, mid));
  }

  TEST_CASE("Larmor analogue: equal to Wigner at midgap, divergent at the band edge") {
    const auto s = berkeley_mirror();
    const auto mid = photonic_larmor(s, Incidence(700.0, 0.0, Polarization::S));
    CHECK(std::abs(mid.total - mid.y) < 1e-3 * mid.y);
    const double edge_angle = band_edge_angle(s, 702.0, Polarization::P, radians(89.0));
    const auto edge = photonic_larmor(s, Incidence(702.0, edge_angle, Polarization::P));
    CHECK(edge.total - edge.y > 0.1);
  }

  TEST_CASE("angle scan signs and Brewster transparency") {
    const auto pts = angle_scan(berkeley_mirror(), 702.0, Polarization::P,
                                {0.0, radians(55.0), radians(56.0), radians(60.0)});
    REQUIRE(pts.size() == 4);
    for (const auto& p : pts) REQUIRE(p.report.has_value());
    CHECK(pts[0].report->relative_delay < 0.0);
    CHECK(pts[1].report->relative_delay > 0.0);
    CHECK(pts[3].report->flux_transmission > pts[1].report->flux_transmission);
    CHECK(pts[1].report->flux_transmission > pts[0].report->flux_transmission);
  }

  TEST_CASE("a transmission zero is an unreliable delay, and scans keep going") {
    const auto opaque = quarter_wave_stack(702.0, 2.22, 1.45, 201, Medium(1.0), Medium(1.45));
    CHECK_THROWS_AS(photonic_wigner(opaque, Incidence(702.0, 0.0, Polarization::S)), UnreliableDelay);
    const auto pts = angle_scan(opaque, 702.0, Polarization::S, {0.0});
    REQUIRE(pts.size() == 1);
    CHECK_FALSE(pts[0].report.has_value());
    CHECK_FALSE(pts[0].error.empty());
  }

  TEST_CASE("Bloch gap edges lie inside the 50% crossings") {
    const auto s = berkeley_mirror();
    const auto bloch = bloch_gap_edges(s, 702.0, 0.0, Polarization::S);
    const auto flux = band_edges(s, 702.0, 0.0, Polarization::S);
    CHECK(bloch.short_edge > flux.short_edge);
    CHECK(bloch.long_edge < flux.long_edge);
  }
}
