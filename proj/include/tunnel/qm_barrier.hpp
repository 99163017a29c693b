#pragma once

#include <optional>
#include <vector>

#include "tunnel/units.hpp"

namespace tunnel::qm {

/// Unit system for the Schrödinger problem; hbar = m = 1 by default.
struct NaturalUnits {
  double hbar = 1.0;
  double mass = 1.0;
};

/// Rectangular potential of height V0 on [0, d], probed at energy E.
/// Both tunnelling (E < V0) and over-barrier (E > V0) energies are allowed.
class RectangularBarrier {
 public:
  RectangularBarrier(double height, double width, double energy, NaturalUnits units = {});

  double height() const noexcept { return height_; }
  double width() const noexcept { return width_; }
  double energy() const noexcept { return energy_; }
  const NaturalUnits& units() const noexcept { return units_; }

  /// Free-space wavenumber sqrt(2mE)/hbar.
  double k() const;
  /// Decay constant sqrt(2m(V0-E))/hbar; zero when E >= V0.
  double kappa() const;
  /// ħk/m outside the barrier.
  double free_velocity() const;

  RectangularBarrier with_width(double d) const { return {height_, d, energy_, units_}; }
  RectangularBarrier with_energy(double e) const { return {height_, width_, e, units_}; }
  RectangularBarrier with_height(double v0) const { return {v0, width_, energy_, units_}; }

 private:
  double height_;
  double width_;
  double energy_;
  NaturalUnits units_;
};

struct ScatteringAmplitudes {
  cplx transmission;  // psi = t exp(ikx) for x > d, incident exp(ikx)
  cplx reflection;    // psi = exp(ikx) + r exp(-ikx) for x < 0
  cplx transit;       // t exp(ikd): phase accumulated from entry face to exit face
};

/// Closed-form stationary scattering solution. Within |E - V0| <= 1e-12 V0
/// the E = V0 limiting form transit = 1 / (1 - i k d / 2) is used.
ScatteringAmplitudes scatter(const RectangularBarrier& b);

/// Complex transmission amplitude t; |t|^2 is the transmission probability.
cplx barrier_amplitude(const RectangularBarrier& b);

/// Phase time ħ d(arg transit)/dE, via Im[(d transit/dE)/transit].
double wigner_time(const RectangularBarrier& b);

/// m d / (ħ kappa). Requires E < V0.
double bl_time(const RectangularBarrier& b);

struct LarmorTimes {
  double y;      // precession: -ħ d(arg t)/dV0
  double z;      // spin alignment: -ħ d(ln|t|)/dV0
  double total;  // sqrt(y^2 + z^2)
};

/// Büttiker's Larmor components; signs chosen so that total -> +bl_time in
/// the opaque limit.
LarmorTimes larmor_times(const RectangularBarrier& b);

struct DelayReport {
  double wigner_time;
  std::optional<double> bl_time;  // empty above the barrier
  double larmor_y;
  double larmor_z;
  double larmor_total;
  double reference_time;  // d / v_free
  double relative_delay;  // wigner_time - reference_time
};

DelayReport delay_report(const RectangularBarrier& b);

/// One report per width; widths must be positive and strictly increasing.
std::vector<DelayReport> hartman_scan(const RectangularBarrier& templ,
                                      const std::vector<double>& widths);

}  // namespace tunnel::qm
