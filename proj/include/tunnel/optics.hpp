#pragma once

#include <array>
#include <utility>
#include <vector>

#include "tunnel/units.hpp"

namespace tunnel {

/// Lossless, non-dispersive dielectric with a real refractive index n > 0.
class Medium {
 public:
  explicit Medium(double refractive_index);

  double index() const noexcept { return index_; }
  friend bool operator==(const Medium&, const Medium&) = default;

  static Medium vacuum() { return Medium(1.0); }

 private:
  double index_;
};

/// Homogeneous film. Zero thickness is legal and acts as the identity.
struct Layer {
  Layer(Medium medium, double thickness_nm);

  Medium medium;
  double thickness;  // nm

  friend bool operator==(const Layer&, const Layer&) = default;
};

/// Ordered films between a semi-infinite ambient (light enters here) and a
/// semi-infinite substrate. An empty layer list is a bare interface.
struct LayerStack {
  Medium ambient = Medium::vacuum();
  std::vector<Layer> layers;
  Medium substrate = Medium::vacuum();

  double total_thickness() const;
  /// Same films seen from the substrate side.
  LayerStack reversed() const;

  friend bool operator==(const LayerStack&, const LayerStack&) = default;
};

/// Plane-wave probe. The angle is measured in the ambient medium.
struct Incidence {
  Incidence(double vacuum_wavelength_nm, double angle_rad, Polarization pol);

  static Incidence from_omega(double omega, double angle_rad, Polarization pol);

  double omega() const { return angular_frequency(vacuum_wavelength); }

  double vacuum_wavelength;  // nm
  double angle;              // rad, 0 <= angle < pi/2
  Polarization polarization;
};

/// Amplitudes of the tangential electric field: r at the entry plane and
/// t at the exit plane, for time dependence exp(-i omega t). For S this is
/// the full field; for P it differs from the full-field amplitude by the
/// real factor cos(theta_ambient)/cos(theta_substrate).
struct ComplexResponse {
  cplx r;
  cplx t;
  double flux_transmission;
  double flux_reflection;
};

/// Quarter-wave mirror H L H L ... with n * d = design_wavelength / 4.
LayerStack quarter_wave_stack(double design_wavelength_nm, double n_high, double n_low,
                              int layer_count, Medium ambient, Medium substrate);

/// Eleven-layer TiO2 / fused-silica mirror on glass, designed for 700 nm.
LayerStack berkeley_mirror();

/// cos(theta_j) in a medium of index n for the invariant n_ambient * sin(theta).
/// Branch: Re >= 0, and Im >= 0 so evanescent fields decay along +z.
cplx cos_in_medium(double transverse_invariant, double n);

/// Effective (tilted) admittance: n cos(theta) for S, n / cos(theta) for P.
cplx admittance(double n, cplx cos_theta, Polarization pol);

/// 2x2 characteristic matrix of a single film, row-major {m11, m12, m21, m22}.
using CharMatrix = std::array<cplx, 4>;
CharMatrix layer_matrix(const Layer& layer, double omega, double transverse_invariant,
                        Polarization pol);
CharMatrix multiply(const CharMatrix& a, const CharMatrix& b);

ComplexResponse stack_response(const LayerStack& stack, const Incidence& inc);

/// Same as stack_response, parametrised by angular frequency (rad/fs).
ComplexResponse stack_response_at(const LayerStack& stack, double omega, double angle,
                                  Polarization pol);

struct SpectrumPoint {
  double wavelength;  // nm
  double omega;       // rad/fs
  ComplexResponse response;
};

/// Response on a grid uniformly spaced in omega, ordered by increasing omega
/// (so wavelength decreases along the list).
std::vector<SpectrumPoint> transmission_spectrum(const LayerStack& stack,
                                                 double lambda_min_nm, double lambda_max_nm,
                                                 int points, double angle, Polarization pol);

/// arctan(n_other / n_ambient); equal indices are rejected.
double brewster_angle(Medium ambient, Medium other);

struct BandEdges {
  double short_edge;  // nm, first 50% crossing below the midgap wavelength
  double long_edge;   // nm, first 50% crossing above it
};

/// First 50% flux-transmission crossings walking outward in frequency
/// from the midgap wavelength, refined by bisection.
BandEdges band_edges(const LayerStack& stack, double midgap_wavelength_nm, double angle,
                     Polarization pol);

}  // namespace tunnel
