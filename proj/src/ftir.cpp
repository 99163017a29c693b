#include "tunnel/ftir.hpp"

#include <cmath>

#include "tunnel/error.hpp"
#include "tunnel/numdiff.hpp"

namespace tunnel::ftir {

namespace {

constexpr double kMinAmplitude = 1e-14;

double k0_of(const FtirGeometry& g) { return 2.0 * kPi / g.vacuum_wavelength; }

// t as a function of the transverse wavevector at fixed frequency.
cplx amplitude_at_ky(const FtirGeometry& g, const LayerStack& stack, double ky) {
  const double s = ky / (g.prism_index * k0_of(g));
  if (!(s >= 0.0 && s < 1.0)) throw InvalidArgument("transverse wavevector outside the prism cone");
  return stack_response_at(stack, angular_frequency(g.vacuum_wavelength), std::asin(s),
                           g.polarization)
      .t;
}

}  // namespace

void FtirGeometry::validate() const {
  if (!(prism_index > 1.0)) throw InvalidArgument("prism index must exceed the gap index 1");
  if (!(gap >= 0.0)) throw InvalidArgument("gap must be non-negative");
  if (!(vacuum_wavelength > 0.0)) throw InvalidArgument("wavelength must be positive");
  if (!(incidence_angle >= 0.0 && incidence_angle < kPi / 2.0)) {
    throw InvalidArgument("incidence angle must lie in [0, pi/2)");
  }
}

double FtirGeometry::critical_angle() const { return std::asin(1.0 / prism_index); }

double FtirGeometry::kappa_gap() const {
  const double s = prism_index * std::sin(incidence_angle);
  return s > 1.0 ? k0_of(*this) * std::sqrt(s * s - 1.0) : 0.0;
}

double FtirGeometry::transverse_wavevector() const {
  return prism_index * k0_of(*this) * std::sin(incidence_angle);
}

LayerStack ftir_stack(const FtirGeometry& g) {
  g.validate();
  const Medium prism(g.prism_index);
  return LayerStack{prism, {Layer(Medium::vacuum(), g.gap)}, prism};
}

FtirAmplitude ftir_amplitude(const FtirGeometry& g) {
  const auto stack = ftir_stack(g);
  const auto resp =
      stack_response(stack, Incidence(g.vacuum_wavelength, g.incidence_angle, g.polarization));
  return {resp.t, g.is_tunneling()};
}

double lateral_displacement(const FtirGeometry& g, const GaussianBeam& beam) {
  if (!(beam.waist > 10.0 * g.vacuum_wavelength)) throw InvalidArgument("beam is not paraxial");
  const auto stack = ftir_stack(g);
  const double ky = g.transverse_wavevector();
  const auto t_of = [&](double k) { return amplitude_at_ky(g, stack, k); };
  if (!(std::abs(t_of(ky)) >= kMinAmplitude)) throw UnreliableDelay("|t| too small for a beam shift");
  const double h = numdiff::step_for(ky);
  return -numdiff::log_derivative(t_of, ky, h).imag();
}

double centroid_wavevector_shift(const std::function<cplx(double)>& filter, double k_center,
                                 double waist) {
  // Field exp(-y^2/w^2) has angular spectrum exp(-(k - kc)^2 w^2 / 4), so the
  // intensity spectrum has standard deviation 1/w; integrate over +-8 of those.
  constexpr int kPoints = 2001;
  const double half = 8.0 / waist;
  const double dk = 2.0 * half / (kPoints - 1);
  double weight_sum = 0.0;
  double moment = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double u = -half + dk * i;
    const double w = (i == 0 || i == kPoints - 1) ? 0.5 : 1.0;
    const double a = std::exp(-u * u * waist * waist / 4.0);
    const double intensity = w * std::norm(a * filter(k_center + u));
    weight_sum += intensity;
    moment += intensity * u;
  }
  if (!(weight_sum > 0.0) || !std::isfinite(weight_sum)) {
    throw UnreliableDelay("transmitted angular spectrum vanishes");
  }
  return moment / weight_sum;
}

double angular_deflection(const FtirGeometry& g, const GaussianBeam& beam) {
  if (!(beam.waist > 10.0 * g.vacuum_wavelength)) throw InvalidArgument("beam is not paraxial");
  const auto stack = ftir_stack(g);
  const double ky = g.transverse_wavevector();
  const double shift = centroid_wavevector_shift(
      [&](double k) { return amplitude_at_ky(g, stack, k); }, ky, beam.waist);
  return shift / (g.prism_index * k0_of(g) * std::cos(g.incidence_angle));
}

FtirReport ftir_report(const FtirGeometry& g, const GaussianBeam& beam) {
  const auto stack = ftir_stack(g);
  const Incidence inc(g.vacuum_wavelength, g.incidence_angle, g.polarization);
  const double w = inc.omega();

  FtirReport r;
  r.gap = g.gap;
  r.abs_t = std::abs(stack_response(stack, inc).t);
  r.displacement = lateral_displacement(g, beam);
  r.deflection = angular_deflection(g, beam);
  r.kappa = g.kappa_gap();
  const auto t_of = [&](double omega) {
    return stack_response_at(stack, omega, g.incidence_angle, g.polarization).t;
  };
  r.wigner_time = numdiff::log_derivative(t_of, w, numdiff::step_for(w)).imag();
  // kappa(omega) = sqrt(k_y^2 - omega^2/c^2) at fixed k_y.
  r.bl_time = r.kappa > 0.0 ? g.gap * w / (kSpeedOfLight * kSpeedOfLight * r.kappa) : 0.0;
  return r;
}

std::vector<FtirReport> gap_scan(const FtirGeometry& templ, const std::vector<double>& gaps,
                                 const GaussianBeam& beam) {
  std::vector<FtirReport> out;
  out.reserve(gaps.size());
  for (const double gap : gaps) out.push_back(ftir_report(templ.with_gap(gap), beam));
  return out;
}

}  // namespace tunnel::ftir
