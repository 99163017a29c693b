#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tunnel/error.hpp"
#include "tunnel/optics.hpp"

using namespace tunnel;

namespace {

LayerStack random_stack(std::mt19937& rng, int max_layers = 8) {
  std::uniform_real_distribution<double> index(1.0, 3.0), thick(0.0, 300.0);
  std::uniform_int_distribution<int> count(0, max_layers);
  LayerStack s{Medium(index(rng)), {}, Medium(index(rng))};
  const int n = count(rng);
  for (int i = 0; i < n; ++i) s.layers.emplace_back(Medium(index(rng)), thick(rng));
  return s;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

}  // namespace

TEST_SUITE("optics") {
  TEST_CASE("single interface matches Fresnel closed form") {
    for (const auto pol : {Polarization::S, Polarization::P}) {
      for (const double deg : {0.0, 20.0, 45.0, 70.0, 85.0}) {
        const LayerStack s{Medium(1.0), {}, Medium(1.52)};
        const auto got = stack_response(s, Incidence(600.0, radians(deg), pol));
        const auto want = oracle::fresnel(1.0, 1.52, radians(deg), pol);
        CHECK(rel(got.r, want.r) < 1e-12);
        CHECK(rel(got.t, want.t) < 1e-12);
      }
    }
  }

  TEST_CASE("total internal reflection has |r| = 1 and no flux") {
    const LayerStack s{Medium(1.5), {}, Medium(1.0)};
    for (const auto pol : {Polarization::S, Polarization::P}) {
      const auto got = stack_response(s, Incidence(600.0, radians(60.0), pol));
      CHECK(std::abs(std::abs(got.r) - 1.0) < 1e-12);
      CHECK(got.flux_transmission == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(rel(got.r, oracle::fresnel(1.5, 1.0, radians(60.0), pol).r) < 1e-12);
    }
  }

  TEST_CASE("matrix method agrees with the direct boundary-value solve") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
      const auto s = random_stack(rng);
      const double deg = std::uniform_real_distribution<double>(0.0, 80.0)(rng);
      const double lam = std::uniform_real_distribution<double>(400.0, 1200.0)(rng);
      for (const auto pol : {Polarization::S, Polarization::P}) {
        const auto got = stack_response(s, Incidence(lam, radians(deg), pol));
        const auto want = oracle::direct_solve(s, angular_frequency(lam), radians(deg), pol);
        CHECK(rel(got.r, want.r) < 1e-8);
        CHECK(rel(got.t, want.t) < 1e-8);
      }
    }
  }

  TEST_CASE("Berkeley mirror against the direct solve, including evanescent layers") {
    const auto s = berkeley_mirror();
    for (const double lam : {500.0, 702.0, 900.0}) {
      const auto got = stack_response(s, Incidence(lam, 0.0, Polarization::S));
      const auto want = oracle::direct_solve(s, angular_frequency(lam), 0.0, Polarization::S);
      CHECK(rel(got.t, want.t) < 1e-8);
    }
    // Low-index ambient layer sandwich: glass ambient at 50 deg makes air films evanescent.
    const LayerStack tunnel{Medium(1.5), {Layer(Medium(1.0), 150.0), Layer(Medium(2.0), 80.0),
                                          Layer(Medium(1.0), 120.0)}, Medium(1.5)};
    for (const auto pol : {Polarization::S, Polarization::P}) {
      const auto got = stack_response(tunnel, Incidence(633.0, radians(50.0), pol));
      const auto want = oracle::direct_solve(tunnel, angular_frequency(633.0), radians(50.0), pol);
      CHECK(rel(got.t, want.t) < 1e-8);
      CHECK(rel(got.r, want.r) < 1e-8);
    }
  }

  TEST_CASE("energy conservation R + T = 1") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      const auto s = random_stack(rng);
      const double deg = std::uniform_real_distribution<double>(0.0, 89.0)(rng);
      const double lam = std::uniform_real_distribution<double>(300.0, 1500.0)(rng);
      for (const auto pol : {Polarization::S, Polarization::P}) {
        const auto got = stack_response(s, Incidence(lam, radians(deg), pol));
        CHECK(std::abs(got.flux_transmission + got.flux_reflection - 1.0) < 1e-10);
      }
    }
  }

  TEST_CASE("reciprocity: same flux transmission from either side") {
    std::mt19937 rng(13);
    int tested = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const auto s = random_stack(rng);
      const double deg = std::uniform_real_distribution<double>(0.0, 80.0)(rng);
      const double lam = std::uniform_real_distribution<double>(400.0, 1200.0)(rng);
      const double sin_out = s.ambient.index() * std::sin(radians(deg)) / s.substrate.index();
      if (sin_out >= 0.999) continue;
      ++tested;
      for (const auto pol : {Polarization::S, Polarization::P}) {
        const auto fwd = stack_response(s, Incidence(lam, radians(deg), pol));
        const auto bwd = stack_response(s.reversed(), Incidence(lam, std::asin(sin_out), pol));
        CHECK(std::abs(fwd.flux_transmission - bwd.flux_transmission) < 1e-10);
      }
    }
    CHECK(tested > 100);
  }

  TEST_CASE("S and P coincide at normal incidence") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
      const auto s = random_stack(rng);
      const auto a = stack_response(s, Incidence(650.0, 0.0, Polarization::S));
      const auto b = stack_response(s, Incidence(650.0, 0.0, Polarization::P));
      CHECK(std::abs(a.r - b.r) < 1e-14);
      CHECK(std::abs(a.t - b.t) < 1e-14);
    }
  }

  TEST_CASE("P reflection vanishes at Brewster's angle") {
    for (const double n2 : {1.45, 1.52, 2.22}) {
      const Medium air(1.0), glass(n2);
      const double b = brewster_angle(air, glass);
      CHECK(b == doctest::Approx(std::atan(n2)));
      const auto got = stack_response(LayerStack{air, {}, glass}, Incidence(700.0, b, Polarization::P));
      CHECK(std::abs(got.r) < 1e-10);
    }
    CHECK_THROWS_AS(brewster_angle(Medium(1.5), Medium(1.5)), InvalidArgument);
  }

  TEST_CASE("zero-thickness layers are the identity and splitting composes") {
    const auto base = berkeley_mirror();
    auto padded = base;
    padded.layers.insert(padded.layers.begin() + 3, Layer(Medium(3.3), 0.0));
    padded.layers.emplace_back(Medium(1.7), 0.0);
    auto split = base;
    const Layer first = split.layers.front();
    split.layers.front().thickness = 30.0;
    split.layers.insert(split.layers.begin() + 1, Layer(first.medium, first.thickness - 30.0));
    for (const double lam : {550.0, 702.0, 850.0}) {
      for (const auto pol : {Polarization::S, Polarization::P}) {
        const Incidence inc(lam, radians(35.0), pol);
        const auto a = stack_response(base, inc);
        CHECK(std::abs(stack_response(padded, inc).t - a.t) < 1e-13);
        CHECK(std::abs(stack_response(split, inc).t - a.t) < 1e-12);
      }
    }
  }

  TEST_CASE("single film matches the Airy formula") {
    for (const double d : {0.0, 50.0, 123.4, 400.0}) {
      for (const double lam : {400.0, 633.0, 1064.0}) {
        const LayerStack s{Medium(1.0), {Layer(Medium(2.1), d)}, Medium(1.5)};
        const auto got = stack_response(s, Incidence(lam, 0.0, Polarization::S));
        CHECK(rel(got.t, oracle::airy_film(1.0, 2.1, 1.5, d, lam)) < 1e-12);
      }
    }
  }

  TEST_CASE("empty stack between equal media transmits everything") {
    const LayerStack s{};
    const auto got = stack_response(s, Incidence(702.0, radians(40.0), Polarization::P));
    CHECK(got.flux_transmission == 1.0);
    CHECK(got.t == cplx(1.0, 0.0));
  }

  TEST_CASE("quarter-wave stack geometry and midgap reflectance") {
    const auto s = berkeley_mirror();
    REQUIRE(s.layers.size() == 11);
    CHECK(s.layers[0].medium.index() * s.layers[0].thickness == doctest::Approx(175.0));
    CHECK(s.layers[1].medium.index() * s.layers[1].thickness == doctest::Approx(175.0));
    // Closed form at the design wavelength: admittance ratio (nH/nL)^(N-1) nH^2 / ns.
    const double y = std::pow(2.22 / 1.45, 10) * 2.22 * 2.22 / 1.45;
    const double r = (1.0 - y) / (1.0 + y);
    CHECK(stack_response(s, Incidence(700.0, 0.0, Polarization::S)).flux_reflection ==
          doctest::Approx(r * r).epsilon(1e-12));
  }

  TEST_CASE("spectrum grid is uniform in omega and ordered by increasing omega") {
    const auto pts = transmission_spectrum(berkeley_mirror(), 500.0, 1000.0, 101, 0.0, Polarization::S);
    REQUIRE(pts.size() == 101);
    CHECK(pts.front().wavelength == doctest::Approx(1000.0));
    CHECK(pts.back().wavelength == doctest::Approx(500.0));
    const double dw = pts[1].omega - pts[0].omega;
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].omega - pts[i - 1].omega == doctest::Approx(dw));
  }

  TEST_CASE("band edges bracket the stop band") {
    const auto e = band_edges(berkeley_mirror(), 702.0, 0.0, Polarization::S);
    CHECK(e.short_edge < 702.0);
    CHECK(e.long_edge > 702.0);
    for (const double lam : {e.short_edge, e.long_edge}) {
      CHECK(stack_response(berkeley_mirror(), Incidence(lam, 0.0, Polarization::S)).flux_transmission ==
            doctest::Approx(0.5).epsilon(1e-6));
    }
  }

  TEST_CASE("argument validation") {
    CHECK_THROWS_AS(Medium(0.0), InvalidArgument);
    CHECK_THROWS_AS(Medium(-1.2), InvalidArgument);
    CHECK_THROWS_AS(Layer(Medium(1.5), -1.0), InvalidArgument);
    CHECK_THROWS_AS(Incidence(0.0, 0.0, Polarization::S), InvalidArgument);
    CHECK_THROWS_AS(Incidence(500.0, radians(90.0), Polarization::S), InvalidArgument);
    CHECK_THROWS_AS(Incidence(500.0, -0.1, Polarization::S), InvalidArgument);
  }
}
