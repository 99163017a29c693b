#include "tunnel/timedomain.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "tunnel/error.hpp"

namespace tunnel::fdtd {

namespace {

constexpr std::size_t kSourceOffset = 10;  // cells between absorber and source plane

double field_sigma(const GaussianPulse& p) {
  // Intensity exp(-(t - t0)^2 / sigma^2) has FWHM 2 sigma sqrt(ln 2).
  return p.fwhm / (2.0 * std::sqrt(std::log(2.0)));
}

double carrier_wavelength(const Source& source) {
  return std::visit(
      [](const auto& s) {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, GaussianPulse>) {
          return s.center_wavelength;
        } else {
          return s.wavelength;
        }
      },
      source);
}

// Incident field at the source plane.
struct SourceWaveform {
  explicit SourceWaveform(const Source& source) {
    if (const auto* g = std::get_if<GaussianPulse>(&source)) {
      omega = angular_frequency(g->center_wavelength);
      sigma = field_sigma(*g);
      t0 = 6.0 * sigma;
      gaussian = true;
    } else {
      omega = angular_frequency(std::get<SharpFrontSinusoid>(source).wavelength);
    }
  }

  double operator()(double t) const {
    if (gaussian) {
      const double u = (t - t0) / sigma;
      return std::exp(-0.5 * u * u) * std::cos(omega * (t - t0));
    }
    return t > 0.0 ? std::sin(omega * t) : 0.0;
  }

  double omega = 0.0;
  double sigma = 0.0;
  double t0 = 0.0;
  bool gaussian = false;
};

// Permittivity averaged over [a, b] for the piecewise-constant profile.
double mean_permittivity(const LayerStack& stack, double z_entry, double a, double b) {
  double weighted = 0.0;
  auto add = [&](double lo, double hi, double n) {
    const double overlap = std::min(b, hi) - std::max(a, lo);
    if (overlap > 0.0) weighted += overlap * n * n;
  };
  add(-1e300, z_entry, stack.ambient.index());
  double z = z_entry;
  for (const auto& layer : stack.layers) {
    add(z, z + layer.thickness, layer.medium.index());
    z += layer.thickness;
  }
  add(z, 1e300, stack.substrate.index());
  return weighted / (b - a);
}

}  // namespace

LayerStack vacuum_twin(const LayerStack& stack) {
  LayerStack twin{Medium::vacuum(), {}, Medium::vacuum()};
  for (const auto& layer : stack.layers) twin.layers.emplace_back(Medium::vacuum(), layer.thickness);
  return twin;
}

Grid1D::Grid1D(const LayerStack& stack, const Source& source, const GridConfig& config)
    : dz_(config.spatial_step) {
  if (!(dz_ > 0.0)) throw GridError("spatial step must be positive");
  if (!(config.courant > 0.0)) throw GridError("Courant number must be positive");
  if (config.absorber_cells < 20) throw GridError("absorber needs at least 20 cells");
  if (!(config.absorber_strength > 0.0 && config.absorber_strength < 1.0)) {
    throw GridError("absorber strength must lie in (0, 1)");
  }
  if (!(config.lead_in >= 0.0) || !(config.tail >= 0.0)) throw GridError("negative padding");
  if (stack.ambient.index() != 1.0) throw InvalidArgument("time-domain runs need a vacuum ambient");

  double n_min = std::min(stack.ambient.index(), stack.substrate.index());
  double n_max = std::max(stack.ambient.index(), stack.substrate.index());
  for (const auto& layer : stack.layers) {
    n_min = std::min(n_min, layer.medium.index());
    n_max = std::max(n_max, layer.medium.index());
  }

  // Fastest phase velocity is c / n_min; the explicit scheme needs c' dt <= dz.
  const double courant_bound = std::min(1.0, n_min);
  if (config.courant > courant_bound) {
    throw GridError("time step exceeds the Courant bound dz * min(1, n_min) / c");
  }
  dt_ = config.courant * dz_ / kSpeedOfLight;

  const SourceWaveform waveform(source);
  const double omega_max =
      waveform.gaussian ? waveform.omega + 4.0 / (std::sqrt(2.0) * waveform.sigma) : waveform.omega;
  const double shortest = vacuum_wavelength(omega_max) / n_max;
  if (shortest / dz_ < config.min_points_per_wavelength) {
    throw GridError("grid resolves the shortest in-medium wavelength with fewer than " +
                    std::to_string(config.min_points_per_wavelength) + " points");
  }

  const auto absorber = static_cast<std::size_t>(config.absorber_cells);
  source_ = absorber + kSourceOffset;
  entry_ = source_ + std::max<std::size_t>(10, static_cast<std::size_t>(std::ceil(config.lead_in / dz_)));
  const double z_entry = static_cast<double>(entry_) * dz_;
  const double z_exit = z_entry + stack.total_thickness();
  exit_ = static_cast<std::size_t>(std::llround(z_exit / dz_));
  const std::size_t n = exit_ + static_cast<std::size_t>(std::ceil(config.tail / dz_)) + absorber + 2;

  permittivity_.resize(n);
  loss_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = static_cast<double>(i) * dz_;
    permittivity_[i] = mean_permittivity(stack, z_entry, z - 0.5 * dz_, z + 0.5 * dz_);
    if (i < absorber) {
      const double u = static_cast<double>(absorber - i) / static_cast<double>(absorber);
      loss_[i] = config.absorber_strength * u * u * u;
    } else if (i >= n - absorber) {
      const double u = static_cast<double>(i - (n - absorber - 1)) / static_cast<double>(absorber);
      loss_[i] = config.absorber_strength * u * u * u;
    }
  }

  double duration = config.duration;
  if (!(duration > 0.0)) {
    const double path = (z_exit - static_cast<double>(source_) * dz_) / kSpeedOfLight;
    const double optical = n_max * stack.total_thickness() / kSpeedOfLight;
    duration = waveform.gaussian ? 2.0 * waveform.t0 + path + 4.0 * optical + 30.0
                                 : path + 10.0 * optical + 150.0;
  }
  steps_ = static_cast<std::size_t>(std::ceil(duration / dt_));
}

double Grid1D::absorber(std::size_t i) const { return loss_.at(i); }

ProbeRecord propagate(const LayerStack& stack, const Source& source, const GridConfig& config) {
  const Grid1D grid(stack, source, config);
  const SourceWaveform waveform(source);
  const std::size_t n = grid.size();
  const double s = config.courant;
  const double dt = grid.time_step();
  const double dz = grid.spatial_step();

  // Matched electric and magnetic losses (sigma_m / mu = sigma / eps) make
  // the absorber impedance-matched to whatever medium it sits in.
  std::vector<double> ca(n), cb(n), da(n - 1), db(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = grid.absorber(i);
    ca[i] = (1.0 - a) / (1.0 + a);
    cb[i] = s / grid.permittivity()[i] / (1.0 + a);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = 0.5 * (grid.absorber(i) + grid.absorber(i + 1));
    da[i] = (1.0 - a) / (1.0 + a);
    db[i] = s / (1.0 + a);
  }

  std::vector<double> e(n, 0.0);
  std::vector<double> h(n - 1, 0.0);
  const std::size_t src = grid.source_node();

  ProbeRecord record;
  record.time_step = dt;
  // The exit node sits on (or within half a cell of) the last interface, where
  // tangential E is continuous: the transmitted wave's impedance is the substrate's.
  record.exit_index = stack.substrate.index();
  record.carrier_wavelength = carrier_wavelength(source);
  record.exit_light_time =
      static_cast<double>(grid.exit_node() - src) * dz / kSpeedOfLight;
  record.entry.reserve(grid.steps());
  record.exit.reserve(grid.steps());

  for (std::size_t step = 0; step < grid.steps(); ++step) {
    const double t = static_cast<double>(step) * dt;
    record.entry.push_back(e[grid.entry_node()]);
    record.exit.push_back(e[grid.exit_node()]);

    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = da[i] * h[i] + db[i] * (e[i + 1] - e[i]);
    // Total-field / scattered-field boundary just left of the source node:
    // the incident wave travels in +z only.
    h[src - 1] -= db[src - 1] * waveform(t);
    for (std::size_t i = 1; i + 1 < n; ++i) e[i] = ca[i] * e[i] + cb[i] * (h[i] - h[i - 1]);
    e[src] += cb[src] * waveform(t + 0.5 * dt + 0.5 * dz / kSpeedOfLight);
  }
  return record;
}

double envelope_peak_time(const std::vector<double>& field, double time_step,
                          double carrier_wavelength) {
  if (field.size() < 8 || !(time_step > 0.0)) throw DistortedRecord("record too short");
  const double period = carrier_wavelength / kSpeedOfLight;
  const double sigma = 0.5 * period;
  const auto half = static_cast<std::ptrdiff_t>(std::ceil(4.0 * sigma / time_step));
  std::vector<double> kernel(static_cast<std::size_t>(2 * half + 1));
  double ksum = 0.0;
  for (std::ptrdiff_t j = -half; j <= half; ++j) {
    const double u = static_cast<double>(j) * time_step / sigma;
    kernel[static_cast<std::size_t>(j + half)] = std::exp(-0.5 * u * u);
    ksum += kernel[static_cast<std::size_t>(j + half)];
  }
  for (auto& k : kernel) k /= ksum;

  const auto len = static_cast<std::ptrdiff_t>(field.size());
  std::vector<double> env(field.size(), 0.0);
  for (std::ptrdiff_t i = 0; i < len; ++i) {
    double acc = 0.0;
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - half);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(len - 1, i + half);
    for (std::ptrdiff_t j = lo; j <= hi; ++j) {
      const double f = field[static_cast<std::size_t>(j)];
      acc += kernel[static_cast<std::size_t>(j - i + half)] * f * f;
    }
    env[static_cast<std::size_t>(i)] = acc;
  }

  const auto imax = static_cast<std::ptrdiff_t>(std::max_element(env.begin(), env.end()) - env.begin());
  const double peak = env[static_cast<std::size_t>(imax)];
  if (!(peak > 0.0) || !std::isfinite(peak)) throw DistortedRecord("record carries no signal");

  int lobes = 0;
  bool above = false;
  for (const double v : env) {
    const bool now = v > 0.5 * peak;
    if (now && !above) ++lobes;
    above = now;
  }
  if (lobes != 1) throw DistortedRecord("envelope has " + std::to_string(lobes) + " lobes above half maximum");
  if (imax < half || imax >= len - half) throw DistortedRecord("envelope peak at the record edge");

  // Least-squares parabola over +-one optical period around the maximum.
  const auto w = std::max<std::ptrdiff_t>(2, static_cast<std::ptrdiff_t>(period / time_step));
  const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, imax - w);
  const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(len - 1, imax + w);
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, y0 = 0, y1 = 0, y2 = 0;
  for (std::ptrdiff_t i = lo; i <= hi; ++i) {
    const double x = static_cast<double>(i - imax);
    const double y = env[static_cast<std::size_t>(i)] / peak;
    s0 += 1; s1 += x; s2 += x * x; s3 += x * x * x; s4 += x * x * x * x;
    y0 += y; y1 += x * y; y2 += x * x * y;
  }
  // Solve the 3x3 normal equations for y = a + b x + c x^2 (Cramer's rule).
  const double det = s0 * (s2 * s4 - s3 * s3) - s1 * (s1 * s4 - s2 * s3) + s2 * (s1 * s3 - s2 * s2);
  const double b = (s0 * (y1 * s4 - s3 * y2) - y0 * (s1 * s4 - s2 * s3) + s2 * (s1 * y2 - y1 * s2)) / det;
  const double c = (s0 * (s2 * y2 - y1 * s3) - s1 * (s1 * y2 - y1 * s2) + y0 * (s1 * s3 - s2 * s2)) / det;
  double offset = (c < 0.0) ? -b / (2.0 * c) : 0.0;
  offset = std::clamp(offset, -static_cast<double>(w), static_cast<double>(w));
  return (static_cast<double>(imax) + offset) * time_step;
}

double peak_delay(const ProbeRecord& record, const ProbeRecord& reference) {
  return envelope_peak_time(record.exit, record.time_step, record.carrier_wavelength) -
         envelope_peak_time(reference.exit, reference.time_step, reference.carrier_wavelength);
}

double envelope_distortion(const ProbeRecord& record, const ProbeRecord& reference) {
  const double dt = record.time_step;
  if (dt != reference.time_step) throw InvalidArgument("records use different time steps");
  // Cycle-averaged intensity with a boxcar of one period is enough here.
  auto envelope = [&](const std::vector<double>& f) {
    const auto win = std::max<std::size_t>(1, static_cast<std::size_t>(record.carrier_wavelength / kSpeedOfLight / dt));
    std::vector<double> out(f.size(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      acc += f[i] * f[i];
      if (i >= win) acc -= f[i - win] * f[i - win];
      out[i] = acc / static_cast<double>(win);
    }
    const double peak = *std::max_element(out.begin(), out.end());
    for (auto& v : out) v /= peak;
    return out;
  };
  const auto a = envelope(record.exit);
  const auto b = envelope(reference.exit);
  const auto shift = static_cast<std::ptrdiff_t>(std::llround(peak_delay(record, reference) / dt));
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto j = static_cast<std::ptrdiff_t>(i) + shift;
    if (j < 0 || j >= static_cast<std::ptrdiff_t>(a.size())) continue;
    const double d = a[static_cast<std::size_t>(j)] - b[i];
    sum += d * d;
    ++count;
  }
  return count ? std::sqrt(sum / static_cast<double>(count)) : 0.0;
}

EnergyBalance energy_balance(const ProbeRecord& record, const ProbeRecord& vacuum) {
  if (record.entry.size() != vacuum.entry.size()) throw InvalidArgument("records differ in length");
  EnergyBalance out{0.0, 0.0, 0.0};
  const double dt = record.time_step;
  for (std::size_t i = 0; i < record.entry.size(); ++i) {
    const double incident = vacuum.entry[i];
    const double reflected = record.entry[i] - incident;
    out.incident += incident * incident * dt;
    out.reflected += reflected * reflected * dt;
    out.transmitted += record.exit_index * record.exit[i] * record.exit[i] * dt;
  }
  return out;
}

namespace {

cplx dft(const std::vector<double>& x, double dt, double omega) {
  // Recurrence for exp(i omega n dt) keeps this O(n) without per-sample trig.
  const cplx step = std::exp(cplx(0.0, omega * dt));
  cplx phase(1.0, 0.0);
  cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += x[i] * phase;
    phase *= step;
    if ((i & 1023) == 1023) phase /= std::abs(phase);
  }
  return acc * dt;
}

}  // namespace

std::vector<double> spectral_transmission(const ProbeRecord& record, const ProbeRecord& vacuum,
                                          const std::vector<double>& omegas) {
  std::vector<double> out;
  out.reserve(omegas.size());
  for (const double w : omegas) {
    const cplx incident = dft(vacuum.entry, vacuum.time_step, w);
    const cplx transmitted = dft(record.exit, record.time_step, w);
    out.push_back(record.exit_index * std::norm(transmitted) / std::norm(incident));
  }
  return out;
}

std::vector<double> source_band(const ProbeRecord& vacuum, double fraction, int count) {
  if (count < 2) throw InvalidArgument("source band needs at least two frequencies");
  const double w0 = angular_frequency(vacuum.carrier_wavelength);
  constexpr int kProbe = 401;
  std::vector<double> w(kProbe), p(kProbe);
  for (int i = 0; i < kProbe; ++i) {
    w[i] = w0 * (0.5 + static_cast<double>(i) / (kProbe - 1));
    p[i] = std::norm(dft(vacuum.entry, vacuum.time_step, w[i]));
  }
  const auto imax = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
  int lo = imax;
  int hi = imax;
  while (lo > 0 && p[lo - 1] >= fraction * p[imax]) --lo;
  while (hi < kProbe - 1 && p[hi + 1] >= fraction * p[imax]) ++hi;
  std::vector<double> band(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) band[i] = w[lo] + (w[hi] - w[lo]) * i / (count - 1);
  return band;
}

FrontCheck check_front(const ProbeRecord& record, double threshold) {
  const auto& x = record.exit;
  double peak = 0.0;
  for (const double v : x) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0)) throw DistortedRecord("no transmitted field recorded");

  FrontCheck out{};
  out.causal_limit = record.exit_light_time;
  out.front_time = -1.0;
  double precursor = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = static_cast<double>(i) * record.time_step;
    if (out.front_time < 0.0 && std::abs(x[i]) > threshold * peak) out.front_time = t;
    if (t < out.causal_limit - 0.5 * record.time_step) precursor = std::max(precursor, std::abs(x[i]));
  }
  out.max_precursor_ratio = precursor / peak;
  out.causal = out.max_precursor_ratio <= threshold;
  return out;
}

PulseComparison compare_with_vacuum(const LayerStack& stack, const GaussianPulse& pulse,
                                    const GridConfig& config) {
  // Both runs must share the record length, so pin the automatic duration
  // to the one the barrier grid picks.
  GridConfig shared = config;
  if (!(shared.duration > 0.0)) {
    const Grid1D grid(stack, pulse, config);
    shared.duration = (static_cast<double>(grid.steps()) - 0.5) * grid.time_step();
  }
  auto vacuum_run = std::async(std::launch::async,
                               [&] { return propagate(vacuum_twin(stack), pulse, shared); });
  PulseComparison out;
  out.barrier = propagate(stack, pulse, shared);
  out.vacuum = vacuum_run.get();
  out.peak_delay = peak_delay(out.barrier, out.vacuum);
  out.distortion = envelope_distortion(out.barrier, out.vacuum);
  out.energy = energy_balance(out.barrier, out.vacuum);
  return out;
}

}  // namespace tunnel::fdtd
