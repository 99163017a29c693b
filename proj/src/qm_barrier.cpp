#include "tunnel/qm_barrier.hpp"

#include <cmath>

#include "tunnel/error.hpp"
#include "tunnel/numdiff.hpp"

namespace tunnel::qm {

namespace {

constexpr double kLimitTolerance = 1e-12;

// sin(z)/z for complex z, with a series near the origin.
cplx sinc(cplx z) {
  if (std::abs(z) < 1e-4) {
    const cplx z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

// Central-difference step for a derivative in `x` that keeps the stencil
// on one side of `singular` when possible. The amplitudes are analytic in E
// and V0 through E = V0, so a straddling stencil is still valid.
double guarded_step(double x, double singular) {
  double h = numdiff::step_for(x);
  const double gap = std::abs(x - singular);
  if (gap > 0.0 && gap < h) h = std::max(0.5 * gap, 1e-2 * h);
  return h;
}

}  // namespace

RectangularBarrier::RectangularBarrier(double height, double width, double energy,
                                       NaturalUnits units)
    : height_(height), width_(width), energy_(energy), units_(units) {
  if (!(height > 0.0)) throw InvalidArgument("barrier height must be positive");
  if (!(width >= 0.0)) throw InvalidArgument("barrier width must be non-negative");
  if (!(energy > 0.0)) throw InvalidArgument("particle energy must be positive");
  if (!(units.hbar > 0.0) || !(units.mass > 0.0)) {
    throw InvalidArgument("hbar and mass must be positive");
  }
}

double RectangularBarrier::k() const {
  return std::sqrt(2.0 * units_.mass * energy_) / units_.hbar;
}

double RectangularBarrier::kappa() const {
  return energy_ < height_ ? std::sqrt(2.0 * units_.mass * (height_ - energy_)) / units_.hbar : 0.0;
}

double RectangularBarrier::free_velocity() const { return units_.hbar * k() / units_.mass; }

ScatteringAmplitudes scatter(const RectangularBarrier& b) {
  const double k = b.k();
  const double d = b.width();
  const cplx i(0.0, 1.0);

  cplx transit;
  cplx reflection;
  if (std::abs(b.energy() - b.height()) <= kLimitTolerance * b.height()) {
    // kappa -> 0: cosh -> 1, (kappa^2 - k^2)/(2 k kappa) sinh(kappa d) -> -k d / 2.
    transit = 1.0 / (1.0 - i * k * d / 2.0);
    reflection = -i * (k * d / 2.0) * transit;
  } else {
    // Interior wavenumber q = sqrt(2m(E - V0))/ħ, imaginary when tunnelling.
    const double q2 = 2.0 * b.units().mass * (b.energy() - b.height()) /
                      (b.units().hbar * b.units().hbar);
    const cplx q = std::sqrt(cplx(q2, 0.0));
    const cplx qd = q * d;
    const cplx sin_over_q = d * sinc(qd);
    transit = 1.0 / (std::cos(qd) - i * (k * k + q2) * sin_over_q / (2.0 * k));
    reflection = i * (q2 - k * k) * sin_over_q / (2.0 * k) * transit;
  }
  return {transit * std::exp(-i * k * d), reflection, transit};
}

cplx barrier_amplitude(const RectangularBarrier& b) { return scatter(b).transmission; }

double wigner_time(const RectangularBarrier& b) {
  const double e = b.energy();
  const double h = std::min(guarded_step(e, b.height()), 0.5 * e);
  const auto transit = [&](double energy) { return scatter(b.with_energy(energy)).transit; };
  return b.units().hbar * numdiff::log_derivative(transit, e, h).imag();
}

double bl_time(const RectangularBarrier& b) {
  if (!(b.energy() < b.height())) {
    throw InvalidArgument("Büttiker-Landauer time needs E < V0");
  }
  return b.units().mass * b.width() / (b.units().hbar * b.kappa());
}

LarmorTimes larmor_times(const RectangularBarrier& b) {
  const double v0 = b.height();
  const double h = std::min(guarded_step(v0, b.energy()), 0.5 * v0);
  const auto amplitude = [&](double height) { return scatter(b.with_height(height)).transmission; };
  const cplx dlog = numdiff::log_derivative(amplitude, v0, h);
  const double hbar = b.units().hbar;
  LarmorTimes out;
  out.y = -hbar * dlog.imag();
  out.z = -hbar * dlog.real();
  out.total = std::hypot(out.y, out.z);
  return out;
}

DelayReport delay_report(const RectangularBarrier& b) {
  DelayReport r;
  r.wigner_time = wigner_time(b);
  if (b.energy() < b.height()) r.bl_time = bl_time(b);
  const LarmorTimes larmor = larmor_times(b);
  r.larmor_y = larmor.y;
  r.larmor_z = larmor.z;
  r.larmor_total = larmor.total;
  r.reference_time = b.width() / b.free_velocity();
  r.relative_delay = r.wigner_time - r.reference_time;
  return r;
}

std::vector<DelayReport> hartman_scan(const RectangularBarrier& templ,
                                      const std::vector<double>& widths) {
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (!(widths[i] > 0.0)) throw InvalidArgument("hartman_scan widths must be positive");
    if (i > 0 && !(widths[i] > widths[i - 1])) {
      throw InvalidArgument("hartman_scan widths must be strictly increasing");
    }
  }
  std::vector<DelayReport> out;
  out.reserve(widths.size());
  for (const double d : widths) out.push_back(delay_report(templ.with_width(d)));
  return out;
}

}  // namespace tunnel::qm
