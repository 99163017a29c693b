#include "tunnel/optics.hpp"

#include <cmath>
#include <string>

#include "tunnel/error.hpp"

namespace tunnel {

namespace {

// sin(x)/x, accurate through x -> 0 for complex x.
cplx sinc(cplx x) {
  if (std::abs(x) < 1e-4) {
    const cplx x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidArgument(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

Medium::Medium(double refractive_index) : index_(refractive_index) {
  require_positive(refractive_index, "refractive index");
}

Layer::Layer(Medium medium_, double thickness_nm) : medium(medium_), thickness(thickness_nm) {
  if (!(thickness_nm >= 0.0) || !std::isfinite(thickness_nm)) {
    throw InvalidArgument("layer thickness must be non-negative and finite");
  }
}

double LayerStack::total_thickness() const {
  double sum = 0.0;
  for (const auto& layer : layers) sum += layer.thickness;
  return sum;
}

LayerStack LayerStack::reversed() const {
  LayerStack out{substrate, {layers.rbegin(), layers.rend()}, ambient};
  return out;
}

Incidence::Incidence(double vacuum_wavelength_nm, double angle_rad, Polarization pol)
    : vacuum_wavelength(vacuum_wavelength_nm), angle(angle_rad), polarization(pol) {
  require_positive(vacuum_wavelength_nm, "vacuum wavelength");
  if (!(angle_rad >= 0.0 && angle_rad < kPi / 2.0)) {
    throw InvalidArgument("incidence angle must lie in [0, pi/2)");
  }
}

Incidence Incidence::from_omega(double omega, double angle_rad, Polarization pol) {
  require_positive(omega, "angular frequency");
  return Incidence(tunnel::vacuum_wavelength(omega), angle_rad, pol);
}

LayerStack quarter_wave_stack(double design_wavelength_nm, double n_high, double n_low,
                              int layer_count, Medium ambient, Medium substrate) {
  require_positive(design_wavelength_nm, "design wavelength");
  require_positive(n_high, "high index");
  require_positive(n_low, "low index");
  if (layer_count < 1) throw InvalidArgument("layer count must be at least 1");

  LayerStack stack{ambient, {}, substrate};
  stack.layers.reserve(static_cast<std::size_t>(layer_count));
  for (int i = 0; i < layer_count; ++i) {
    const double n = (i % 2 == 0) ? n_high : n_low;
    stack.layers.emplace_back(Medium(n), design_wavelength_nm / (4.0 * n));
  }
  return stack;
}

LayerStack berkeley_mirror() {
  return quarter_wave_stack(700.0, 2.22, 1.45, 11, Medium::vacuum(), Medium(1.45));
}

cplx cos_in_medium(double transverse_invariant, double n) {
  const double s = transverse_invariant / n;
  cplx c = std::sqrt(cplx(1.0 - s * s, 0.0));
  if (c.imag() < 0.0 || (c.imag() == 0.0 && c.real() < 0.0)) c = -c;
  return c;
}

cplx admittance(double n, cplx cos_theta, Polarization pol) {
  return pol == Polarization::S ? n * cos_theta : n / cos_theta;
}

namespace {

// Layer matrix times exp(-scale); scale > 0 only for strongly evanescent
// films, whose cos and sin would otherwise overflow.
CharMatrix scaled_layer_matrix(const Layer& layer, double omega, double transverse_invariant,
                               Polarization pol, double& scale) {
  const double n = layer.medium.index();
  const double k0 = omega / kSpeedOfLight;
  const cplx c = cos_in_medium(transverse_invariant, n);
  const cplx delta = k0 * n * layer.thickness * c;
  const cplx i(0.0, 1.0);

  scale = std::abs(delta.imag()) > 30.0 ? std::abs(delta.imag()) : 0.0;
  cplx cos_d, sin_d, sinc_d;
  if (scale == 0.0) {
    cos_d = std::cos(delta);
    sin_d = std::sin(delta);
    sinc_d = sinc(delta);
  } else {
    const cplx up = std::exp(i * delta - scale);
    const cplx down = std::exp(-i * delta - scale);
    cos_d = 0.5 * (up + down);
    sin_d = (up - down) / (2.0 * i);
    sinc_d = sin_d / delta;
  }

  // sin(delta)/eta and eta*sin(delta) written so that neither divides by
  // cos(theta), which vanishes at a critical angle.
  cplx sin_over_eta;
  cplx eta_sin;
  if (pol == Polarization::S) {
    sin_over_eta = k0 * layer.thickness * sinc_d;
    eta_sin = n * c * sin_d;
  } else {
    sin_over_eta = c * sin_d / n;
    eta_sin = n * k0 * n * layer.thickness * sinc_d;
  }
  return {cos_d, -i * sin_over_eta, -i * eta_sin, cos_d};
}

}  // namespace

CharMatrix layer_matrix(const Layer& layer, double omega, double transverse_invariant,
                        Polarization pol) {
  double scale = 0.0;
  CharMatrix m = scaled_layer_matrix(layer, omega, transverse_invariant, pol, scale);
  if (scale > 0.0) {
    const double f = std::exp(scale);
    for (auto& x : m) x *= f;
  }
  return m;
}

CharMatrix multiply(const CharMatrix& a, const CharMatrix& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

ComplexResponse stack_response_at(const LayerStack& stack, double omega, double angle,
                                  Polarization pol) {
  const double n0 = stack.ambient.index();
  const double invariant = n0 * std::sin(angle);

  // The product is kept as exp(log_scale) * m so opaque stacks underflow t
  // to zero instead of overflowing the matrix.
  CharMatrix m{1.0, 0.0, 0.0, 1.0};
  double log_scale = 0.0;
  for (const auto& layer : stack.layers) {
    double scale = 0.0;
    m = multiply(m, scaled_layer_matrix(layer, omega, invariant, pol, scale));
    log_scale += scale;
  }

  const cplx eta0 = admittance(n0, cos_in_medium(invariant, n0), pol);
  const double ns = stack.substrate.index();
  const cplx eta_s = admittance(ns, cos_in_medium(invariant, ns), pol);

  const cplx b = m[0] + m[1] * eta_s;
  const cplx c = m[2] + m[3] * eta_s;
  const cplx denom = eta0 * b + c;

  ComplexResponse out;
  out.r = (eta0 * b - c) / denom;
  out.t = 2.0 * eta0 * std::exp(-log_scale) / denom;
  out.flux_reflection = std::norm(out.r);
  out.flux_transmission = (eta_s.real() / eta0.real()) * std::norm(out.t);
  return out;
}

ComplexResponse stack_response(const LayerStack& stack, const Incidence& inc) {
  return stack_response_at(stack, inc.omega(), inc.angle, inc.polarization);
}

std::vector<SpectrumPoint> transmission_spectrum(const LayerStack& stack,
                                                 double lambda_min_nm, double lambda_max_nm,
                                                 int points, double angle, Polarization pol) {
  require_positive(lambda_min_nm, "lambda_min");
  if (!(lambda_min_nm < lambda_max_nm)) throw InvalidArgument("lambda_min must be < lambda_max");
  if (points < 2) throw InvalidArgument("spectrum needs at least 2 points");
  // Validates the angle once.
  (void)Incidence(lambda_min_nm, angle, pol);

  const double w_lo = angular_frequency(lambda_max_nm);
  const double w_hi = angular_frequency(lambda_min_nm);
  std::vector<SpectrumPoint> out;
  out.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double w = (i == points - 1) ? w_hi : w_lo + (w_hi - w_lo) * i / (points - 1);
    out.push_back({vacuum_wavelength(w), w, stack_response_at(stack, w, angle, pol)});
  }
  return out;
}

double brewster_angle(Medium ambient, Medium other) {
  if (ambient.index() == other.index()) {
    throw InvalidArgument("Brewster angle is undefined for equal indices");
  }
  return std::atan(other.index() / ambient.index());
}

namespace {

// Walk from w_start by step (signed) until T >= 0.5, then bisect.
double find_half_crossing(const LayerStack& stack, double w_start, double step, double angle,
                          Polarization pol) {
  auto transmission = [&](double w) { return stack_response_at(stack, w, angle, pol).flux_transmission; };
  if (transmission(w_start) >= 0.5) {
    throw InvalidArgument("midgap transmission is already above 50%; no stop band here");
  }
  double inside = w_start;
  double outside = w_start + step;
  const double w_limit_lo = 0.05 * w_start;
  const double w_limit_hi = 20.0 * w_start;
  while (transmission(outside) < 0.5) {
    inside = outside;
    outside += step;
    if (outside <= w_limit_lo || outside >= w_limit_hi) {
      throw InvalidArgument("no 50% transmission crossing found");
    }
  }
  for (int iter = 0; iter < 200 && std::abs(outside - inside) > 1e-13 * w_start; ++iter) {
    const double mid = 0.5 * (inside + outside);
    (transmission(mid) < 0.5 ? inside : outside) = mid;
  }
  return 0.5 * (inside + outside);
}

}  // namespace

BandEdges band_edges(const LayerStack& stack, double midgap_wavelength_nm, double angle,
                     Polarization pol) {
  const Incidence probe(midgap_wavelength_nm, angle, pol);
  const double w0 = probe.omega();
  const double step = 1e-3 * w0;
  const double w_up = find_half_crossing(stack, w0, +step, angle, pol);
  const double w_down = find_half_crossing(stack, w0, -step, angle, pol);
  return {vacuum_wavelength(w_up), vacuum_wavelength(w_down)};
}

}  // namespace tunnel
