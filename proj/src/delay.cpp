#include "tunnel/delay.hpp"

#include <cmath>

#include "tunnel/error.hpp"
#include "tunnel/numdiff.hpp"

namespace tunnel {

namespace {

constexpr double kMinAmplitude = 1e-14;

cplx omega_log_derivative(const LayerStack& stack, const Incidence& inc) {
  const double w = inc.omega();
  const auto t_of = [&](double omega) {
    return stack_response_at(stack, omega, inc.angle, inc.polarization).t;
  };
  if (!(std::abs(t_of(w)) >= kMinAmplitude)) {
    throw UnreliableDelay("|t| below 1e-14 at the probe; transmission phase undefined");
  }
  return numdiff::log_derivative(t_of, w, numdiff::step_for(w));
}

double cell_thickness(const std::vector<Layer>& cell) {
  double sum = 0.0;
  for (const auto& layer : cell) sum += layer.thickness;
  return sum;
}

}  // namespace

PhotonicLarmor photonic_larmor(const LayerStack& stack, const Incidence& inc) {
  const cplx dlog = omega_log_derivative(stack, inc);
  return {dlog.imag(), dlog.real(), std::abs(dlog)};
}

PhotonicDelayReport photonic_wigner(const LayerStack& stack, const Incidence& inc) {
  const cplx dlog = omega_log_derivative(stack, inc);
  const double thickness = stack.total_thickness();

  PhotonicDelayReport r;
  r.transit_time = dlog.imag();
  r.vacuum_time = thickness / kSpeedOfLight;
  r.relative_delay = r.transit_time - r.vacuum_time;
  r.effective_velocity = r.vacuum_time / r.transit_time;
  r.larmor_y = dlog.imag();
  r.larmor_z = dlog.real();
  r.larmor_total = std::abs(dlog);
  r.flux_transmission = stack_response(stack, inc).flux_transmission;
  try {
    r.bl_time = photonic_bl_time(stack, inc);
  } catch (const OutsideStopBand&) {
  } catch (const InvalidArgument&) {
    // Not periodic: no Bloch velocity to speak of.
  }
  return r;
}

std::vector<Layer> unit_cell(const LayerStack& stack) {
  const auto& layers = stack.layers;
  const std::size_t n = layers.size();
  for (std::size_t p = 1; 2 * p <= n; ++p) {
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i) periodic = layers[i] == layers[i % p];
    if (periodic) return {layers.begin(), layers.begin() + static_cast<std::ptrdiff_t>(p)};
  }
  throw InvalidArgument("layer sequence is not periodic (needs two full unit cells)");
}

double bloch_half_trace(const std::vector<Layer>& cell, double omega, double transverse_invariant,
                        Polarization pol) {
  CharMatrix m{1.0, 0.0, 0.0, 1.0};
  for (const auto& layer : cell) m = multiply(m, layer_matrix(layer, omega, transverse_invariant, pol));
  return 0.5 * (m[0] + m[3]).real();
}

bool in_stop_band(const LayerStack& stack, const Incidence& inc) {
  const auto cell = unit_cell(stack);
  const double invariant = stack.ambient.index() * std::sin(inc.angle);
  return std::abs(bloch_half_trace(cell, inc.omega(), invariant, inc.polarization)) > 1.0;
}

double photonic_bl_time(const LayerStack& stack, const Incidence& inc) {
  const auto cell = unit_cell(stack);
  const double invariant = stack.ambient.index() * std::sin(inc.angle);
  const double w = inc.omega();
  const auto half_trace = [&](double omega) {
    return bloch_half_trace(cell, omega, invariant, inc.polarization);
  };
  const double h0 = half_trace(w);
  if (!(std::abs(h0) > 1.0)) {
    throw OutsideStopBand("probe outside the stop band; under-barrier Bloch velocity undefined");
  }
  // cos(K L) = h  =>  |dK/dw| = |h'| / (L sqrt(h^2 - 1)) inside the gap.
  const double slope = numdiff::central(half_trace, w, numdiff::step_for(w));
  const double dk_dw = std::abs(slope) / (cell_thickness(cell) * std::sqrt(h0 * h0 - 1.0));
  return stack.total_thickness() * dk_dw;
}

BandEdges bloch_gap_edges(const LayerStack& stack, double in_gap_wavelength_nm, double angle,
                          Polarization pol) {
  const Incidence probe(in_gap_wavelength_nm, angle, pol);
  const auto cell = unit_cell(stack);
  const double invariant = stack.ambient.index() * std::sin(angle);
  const auto outside = [&](double omega) {
    return std::abs(bloch_half_trace(cell, omega, invariant, pol)) <= 1.0;
  };
  const double w0 = probe.omega();
  if (outside(w0)) throw OutsideStopBand("wavelength is not inside a stop band");

  auto edge = [&](double step) {
    double inside = w0;
    double out = w0 + step;
    while (!outside(out)) {
      inside = out;
      out += step;
      if (out <= 0.0 || out > 50.0 * w0) throw OutsideStopBand("stop band does not close");
    }
    for (int i = 0; i < 200 && std::abs(out - inside) > 1e-13 * w0; ++i) {
      const double mid = 0.5 * (inside + out);
      (outside(mid) ? out : inside) = mid;
    }
    return 0.5 * (inside + out);
  };
  const double step = 1e-3 * w0;
  return {vacuum_wavelength(edge(+step)), vacuum_wavelength(edge(-step))};
}

std::vector<AngleScanPoint> angle_scan(const LayerStack& stack, double wavelength_nm,
                                       Polarization pol, const std::vector<double>& angles) {
  std::vector<AngleScanPoint> out;
  out.reserve(angles.size());
  for (const double theta : angles) {
    AngleScanPoint point{theta, std::nullopt, {}};
    try {
      point.report = photonic_wigner(stack, Incidence(wavelength_nm, theta, pol));
    } catch (const Error& e) {
      point.error = e.what();
    }
    out.push_back(std::move(point));
  }
  return out;
}

double band_edge_angle(const LayerStack& stack, double wavelength_nm, Polarization pol,
                       double max_angle) {
  const auto transmission = [&](double theta) {
    return stack_response(stack, Incidence(wavelength_nm, theta, pol)).flux_transmission;
  };
  if (transmission(0.0) >= 0.5) return 0.0;
  const double step = radians(0.25);
  double below = 0.0;
  double above = step;
  while (transmission(above) < 0.5) {
    below = above;
    above += step;
    if (above >= max_angle) throw InvalidArgument("no band edge below the maximum angle");
  }
  for (int i = 0; i < 100 && above - below > 1e-12; ++i) {
    const double mid = 0.5 * (below + above);
    (transmission(mid) < 0.5 ? below : above) = mid;
  }
  return 0.5 * (below + above);
}

}  // namespace tunnel
