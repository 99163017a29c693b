#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tunnel/optics.hpp"

namespace tunnel {

/// Tunnelling times of a photonic stack at one probe, all in fs.
struct PhotonicDelayReport {
  double transit_time;        // Wigner group delay d(arg t)/d omega
  double vacuum_time;         // total_thickness / c
  double relative_delay;      // transit_time - vacuum_time
  double effective_velocity;  // total_thickness / (c transit_time), in units of c
  std::optional<double> bl_time;  // only inside a stop band of a periodic stack
  double larmor_y;
  double larmor_z;
  double larmor_total;
  double flux_transmission;
};

/// Wigner time with identity fields filled; larmor fields come from the same
/// logarithmic derivative, bl_time is set when the probe is inside a stop band.
/// Throws UnreliableDelay when |t| < 1e-14 at the probe.
PhotonicDelayReport photonic_wigner(const LayerStack& stack, const Incidence& inc);

struct PhotonicLarmor {
  double y;      // d(arg t)/d omega
  double z;      // d(ln|t|)/d omega
  double total;  // sqrt(y^2 + z^2)
};

PhotonicLarmor photonic_larmor(const LayerStack& stack, const Incidence& inc);

/// Smallest repeating unit of the layer sequence; the stack must contain at
/// least two full copies of it (a trailing partial cell is allowed).
std::vector<Layer> unit_cell(const LayerStack& stack);

/// Half-trace of the unit-cell characteristic matrix, cos(K Lambda) for the
/// infinite periodic medium.
double bloch_half_trace(const std::vector<Layer>& cell, double omega, double transverse_invariant,
                        Polarization pol);

/// total_thickness * |dK/d omega| from the infinite-medium Bloch dispersion;
/// zero at the midgap of a quarter-wave stack. Throws OutsideStopBand when
/// |half-trace| <= 1.
double photonic_bl_time(const LayerStack& stack, const Incidence& inc);

/// True when |half-trace| > 1 at this probe.
bool in_stop_band(const LayerStack& stack, const Incidence& inc);

/// Wavelengths (nm) where |half-trace| = 1 around the given in-gap wavelength,
/// i.e. the band edges of the infinite periodic medium.
BandEdges bloch_gap_edges(const LayerStack& stack, double in_gap_wavelength_nm, double angle,
                          Polarization pol);

struct AngleScanPoint {
  double angle;  // rad
  std::optional<PhotonicDelayReport> report;
  std::string error;  // set when report is empty
};

/// Per-angle reports; a failing point records its error and the scan goes on.
std::vector<AngleScanPoint> angle_scan(const LayerStack& stack, double wavelength_nm,
                                       Polarization pol, const std::vector<double>& angles);

/// Smallest angle in [0, max_angle) at which the flux transmission at this
/// wavelength first reaches 50%: the angle-tuned band edge.
double band_edge_angle(const LayerStack& stack, double wavelength_nm, Polarization pol,
                       double max_angle);

}  // namespace tunnel
