#pragma once

#include <functional>
#include <vector>

#include "tunnel/optics.hpp"

namespace tunnel::ftir {

/// Two prisms of equal index separated by an air gap.
struct FtirGeometry {
  double prism_index = 1.52;
  double gap = 2000.0;                   // nm
  double incidence_angle = radians(55.0);  // inside the prism
  double vacuum_wavelength = 702.0;      // nm
  Polarization polarization = Polarization::S;

  void validate() const;
  double critical_angle() const;
  bool is_tunneling() const { return incidence_angle > critical_angle(); }
  /// Evanescent decay constant in the gap (1/nm); zero at or below critical.
  double kappa_gap() const;
  /// Transverse wavevector k_y = n (omega/c) sin(theta), 1/nm.
  double transverse_wavevector() const;

  FtirGeometry with_gap(double g) const {
    FtirGeometry out = *this;
    out.gap = g;
    return out;
  }
};

struct GaussianBeam {
  double waist = 30000.0;  // nm, 1/e^2 intensity radius at the gap
};

struct FtirAmplitude {
  cplx t;
  bool tunneling;  // false below the critical angle (ordinary refraction)
};

LayerStack ftir_stack(const FtirGeometry& g);

/// Plane-wave prism -> gap -> prism amplitude via the multilayer solver.
FtirAmplitude ftir_amplitude(const FtirGeometry& g);

/// Stationary-phase beam shift D = -d(arg t)/dk_y, nm.
double lateral_displacement(const FtirGeometry& g, const GaussianBeam& beam);

/// Shift of the intensity-weighted mean transverse wavevector of a Gaussian
/// angular spectrum after filtering, for an arbitrary k_y -> amplitude filter.
double centroid_wavevector_shift(const std::function<cplx(double)>& filter, double k_center,
                                 double waist);

/// Deflection of the transmitted-beam centroid direction, rad (inside the prism).
double angular_deflection(const FtirGeometry& g, const GaussianBeam& beam);

struct FtirReport {
  double gap;           // nm
  double abs_t;
  double displacement;  // nm
  double deflection;    // rad
  double kappa;         // 1/nm
  double wigner_time;   // fs, d(arg t)/d omega at fixed angle
  double bl_time;       // fs, gap * |d kappa / d omega| at fixed k_y
};

FtirReport ftir_report(const FtirGeometry& g, const GaussianBeam& beam);
std::vector<FtirReport> gap_scan(const FtirGeometry& templ, const std::vector<double>& gaps,
                                 const GaussianBeam& beam);

}  // namespace tunnel::ftir
