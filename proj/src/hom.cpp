#include "tunnel/hom.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tunnel::hom {

namespace {

const double kFwhmToSigma = 1.0 / (2.0 * std::sqrt(2.0 * std::log(2.0)));

}  // namespace

SpectralFilter identity_filter() {
  return [](double) { return cplx(1.0, 0.0); };
}

SpectralFilter delay_filter(double delay_fs, cplx amplitude) {
  return [delay_fs, amplitude](double omega) {
    return amplitude * std::exp(cplx(0.0, omega * delay_fs));
  };
}

SpectralFilter stack_filter(LayerStack stack, double angle, Polarization pol) {
  (void)Incidence(700.0, angle, pol);
  return [stack = std::move(stack), angle, pol](double omega) {
    return stack_response_at(stack, omega, angle, pol).t;
  };
}

LayerStack uncoated_control(const LayerStack& coated) {
  LayerStack control{coated.ambient, {}, coated.substrate};
  control.layers.emplace_back(Medium::vacuum(), coated.total_thickness());
  return control;
}

BiphotonSpectrum::BiphotonSpectrum(double center_wavelength_nm, double bandwidth_fwhm_nm,
                                   Shape shape)
    : center_wavelength_(center_wavelength_nm), bandwidth_(bandwidth_fwhm_nm), shape_(shape) {
  if (!(center_wavelength_nm > 0.0)) throw InvalidArgument("center wavelength must be positive");
  if (!(bandwidth_fwhm_nm > 0.0)) throw InvalidArgument("bandwidth must be positive");
  if (!(bandwidth_fwhm_nm < 0.25 * center_wavelength_nm)) {
    throw InvalidArgument("bandwidth must be much smaller than the center wavelength");
  }
}

BiphotonSpectrum BiphotonSpectrum::from_pulse_duration(double center_wavelength_nm,
                                                       double fwhm_fs) {
  if (!(fwhm_fs > 0.0)) throw InvalidArgument("pulse duration must be positive");
  // Transform-limited Gaussian: dnu * dt = 2 ln 2 / pi for intensity FWHMs.
  const double dnu = 2.0 * std::log(2.0) / kPi / fwhm_fs;
  const double dlambda = center_wavelength_nm * center_wavelength_nm * dnu / kSpeedOfLight;
  return BiphotonSpectrum(center_wavelength_nm, dlambda);
}

double BiphotonSpectrum::omega0() const { return angular_frequency(center_wavelength_); }

double BiphotonSpectrum::sigma_omega() const {
  const double fwhm_omega =
      2.0 * kPi * kSpeedOfLight * bandwidth_ / (center_wavelength_ * center_wavelength_);
  return fwhm_omega * kFwhmToSigma;
}

double BiphotonSpectrum::dip_sigma() const { return 1.0 / (2.0 * sigma_omega()); }

double BiphotonSpectrum::amplitude(double detuning) const {
  const double s = sigma_omega();
  return std::exp(-detuning * detuning / (4.0 * s * s));
}

double beamsplitter_coincidence(cplx r, cplx t) {
  const double loss = std::norm(r) + std::norm(t) - 1.0;
  if (std::abs(loss) > 1e-9) throw InvalidArgument("beamsplitter must be lossless: |r|^2+|t|^2=1");
  return std::norm(r * r + t * t);
}

// Two photons enter ports a (barrier arm) and b (reference arm, delayed by
// tau). With g(W) = f(W) H1(w0+W) H2(w0-W) exp(i(w0-W) tau) the coincidence
// probability after a 50/50 splitter is (1/4) Int |g(W) - g(-W)|^2 dW; the
// cross term of that square is the two-photon interference. Dividing by the
// |tau| -> inf value (1/2) Int |g|^2 sets the baseline to 1. Evaluating the
// square directly keeps every rate non-negative.
std::vector<double> coincidence_rates(const ArmFilters& filters, const BiphotonSpectrum& spectrum,
                                      const std::vector<double>& delays,
                                      const ScanOptions& options) {
  if (options.grid_points < 513 || options.grid_points % 2 == 0) {
    throw InvalidArgument("detuning grid needs an odd number of points >= 513");
  }
  if (!(options.span_sigmas > 0.0)) throw InvalidArgument("span_sigmas must be positive");

  const std::size_t m = static_cast<std::size_t>(options.grid_points);
  const double w0 = spectrum.omega0();
  const double half = options.span_sigmas * spectrum.sigma_omega();
  const double dw = 2.0 * half / static_cast<double>(m - 1);

  std::vector<double> detuning(m);
  std::vector<cplx> pair(m);  // f(W) H1(w0+W) H2(w0-W)
  std::vector<double> weight(m, dw);
  weight.front() = weight.back() = 0.5 * dw;
  double norm = 0.0;
  double free_norm = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double w = -half + dw * static_cast<double>(i);
    detuning[i] = w;
    const double f = spectrum.amplitude(w);
    pair[i] = f * filters.barrier_arm(w0 + w) * filters.reference_arm(w0 - w);
    norm += weight[i] * std::norm(pair[i]);
    free_norm += weight[i] * f * f;
  }
  if (!(norm > 1e-28 * free_norm)) {
    throw DegenerateScan("filters block the whole biphoton band");
  }

  std::vector<double> rates;
  rates.reserve(delays.size());
  for (const double tau : delays) {
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const cplx phase = std::exp(cplx(0.0, -detuning[i] * tau));
      const cplx mirrored = pair[m - 1 - i] * std::conj(phase);
      sum += weight[i] * std::norm(pair[i] * phase - mirrored);
    }
    rates.push_back(sum / (2.0 * norm));
  }
  return rates;
}

namespace {

struct Model {
  static double value(const Eigen::Vector4d& p, double tau) {
    const double u = (tau - p[0]) / p[1];
    return p[3] * (1.0 - p[2] * std::exp(-0.5 * u * u));
  }
  static Eigen::Vector4d gradient(const Eigen::Vector4d& p, double tau) {
    const double dt = tau - p[0];
    const double s = p[1];
    const double g = std::exp(-0.5 * dt * dt / (s * s));
    const double bv = p[3] * p[2] * g;
    return {-bv * dt / (s * s), -bv * dt * dt / (s * s * s), -p[3] * g, 1.0 - p[2] * g};
  }
};

double cost(const Eigen::Vector4d& p, const std::vector<double>& x, const std::vector<double>& y) {
  double c = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - Model::value(p, x[i]);
    c += r * r;
  }
  return c;
}

DipFit to_fit(const Eigen::Vector4d& p, double c, std::size_t n, int iterations, bool converged) {
  DipFit f;
  f.center = p[0];
  f.width = std::abs(p[1]);
  f.visibility = std::clamp(p[2], 0.0, 1.0);
  f.baseline = p[3];
  f.rms_residual = std::sqrt(c / static_cast<double>(n));
  f.iterations = iterations;
  f.converged = converged;
  return f;
}

}  // namespace

DipFit fit_dip(const std::vector<double>& delays, const std::vector<double>& rates) {
  if (delays.size() != rates.size()) throw InvalidArgument("delays and rates differ in length");
  const std::size_t n = delays.size();
  if (n < 7) throw InvalidArgument("dip fit needs at least 7 points");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return delays[a] < delays[b]; });
  std::vector<double> x(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = delays[order[i]];
    y[i] = rates[order[i]];
  }

  // Initial guess: baseline from the outer 10%, depth and centre from the minimum.
  const std::size_t edge = std::max<std::size_t>(1, n / 20);
  double baseline = 0.0;
  for (std::size_t i = 0; i < edge; ++i) baseline += y[i] + y[n - 1 - i];
  baseline /= static_cast<double>(2 * edge);
  const auto imin = static_cast<std::size_t>(std::min_element(y.begin(), y.end()) - y.begin());
  const double depth = baseline > 0.0 ? 1.0 - y[imin] / baseline : 0.0;

  double center = x[imin];
  if (imin > 0 && imin + 1 < n) {
    const double a = y[imin - 1], b = y[imin], c = y[imin + 1];
    const double curvature = a - 2.0 * b + c;
    if (curvature > 0.0) center += 0.5 * (a - c) / curvature * 0.5 * (x[imin + 1] - x[imin - 1]);
  }
  const double level = baseline * (1.0 - 0.5 * depth);
  double lo = x[imin];
  double hi = x[imin];
  for (std::size_t i = imin; i-- > 0 && y[i] < level;) lo = x[i];
  for (std::size_t i = imin; i < n && y[i] < level; ++i) hi = x[i];
  const double spacing = (x.back() - x.front()) / static_cast<double>(n - 1);
  const double sigma0 = std::max(hi - lo + spacing, spacing) / 2.3548;

  Eigen::Vector4d p(center, sigma0, depth, baseline);
  if (depth < 1e-3) {
    DipFit flat = to_fit(p, cost(p, x, y), n, 0, true);
    flat.visibility = std::max(depth, 0.0);
    flat.reliable = false;
    return flat;
  }

  double c = cost(p, x, y);
  double lambda = 1e-3;
  bool converged = false;
  int it = 0;
  constexpr int kMaxIterations = 500;
  for (; it < kMaxIterations && !converged; ++it) {
    Eigen::Matrix4d jtj = Eigen::Matrix4d::Zero();
    Eigen::Vector4d jtr = Eigen::Vector4d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Vector4d g = Model::gradient(p, x[i]);
      jtj += g * g.transpose();
      jtr += g * (y[i] - Model::value(p, x[i]));
    }
    bool stepped = false;
    while (!stepped && lambda < 1e12) {
      Eigen::Matrix4d a = jtj;
      a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-30);
      const Eigen::Vector4d delta = a.ldlt().solve(jtr);
      const Eigen::Vector4d trial = p + delta;
      const double trial_cost = cost(trial, x, y);
      if (std::isfinite(trial_cost) && trial_cost <= c) {
        const bool tiny_step = delta.norm() <= 1e-12 * (p.norm() + 1e-12);
        const bool flat_cost = c - trial_cost <= 1e-14 * c || trial_cost < 1e-28;
        p = trial;
        c = trial_cost;
        lambda = std::max(lambda * 0.1, 1e-12);
        stepped = true;
        converged = tiny_step || flat_cost;
      } else {
        lambda *= 10.0;
      }
    }
    if (!stepped) converged = true;  // no descent direction left: at a minimum
  }

  DipFit fit = to_fit(p, c, n, it, converged);
  if (!converged) throw FitError("dip fit did not converge", fit);
  fit.reliable = fit.visibility > 1e-3 && fit.center >= x.front() && fit.center <= x.back();
  return fit;
}

CoincidenceScan coincidence_scan(const ArmFilters& filters, const BiphotonSpectrum& spectrum,
                                 const std::vector<double>& delays, const ScanOptions& options) {
  if (delays.empty()) throw InvalidArgument("empty delay grid");
  const auto [lo, hi] = std::minmax_element(delays.begin(), delays.end());
  const double reach = 3.0 * spectrum.dip_sigma();
  if (*lo > -reach || *hi < reach) {
    throw InvalidArgument("delay grid must span at least +-3 dip widths");
  }
  CoincidenceScan scan;
  scan.delays = delays;
  scan.rates = coincidence_rates(filters, spectrum, delays, options);
  scan.fit = fit_dip(scan.delays, scan.rates);
  return scan;
}

std::vector<double> trombone_delay_grid(double half_span_fs, double position_step_nm) {
  if (!(half_span_fs > 0.0) || !(position_step_nm > 0.0)) {
    throw InvalidArgument("delay span and prism step must be positive");
  }
  const double step = 2.0 * position_step_nm / kSpeedOfLight;
  const auto count = static_cast<long>(std::ceil(half_span_fs / step));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(2 * count + 1));
  for (long i = -count; i <= count; ++i) grid.push_back(static_cast<double>(i) * step);
  return grid;
}

std::vector<double> default_delay_grid(const BiphotonSpectrum& spectrum) {
  return trombone_delay_grid(6.0 * spectrum.dip_sigma());
}

double relative_tunneling_time(const ArmFilters& filters, const BiphotonSpectrum& spectrum,
                               const std::vector<double>& delays, const ScanOptions& options) {
  const auto measured = coincidence_scan(filters, spectrum, delays, options);
  const auto reference = coincidence_scan(ArmFilters{}, spectrum, delays, options);
  if (!measured.fit.reliable) throw UnreliableDelay("no usable dip in the barrier scan");
  return measured.fit.center - reference.fit.center;
}

double relative_tunneling_time(const ArmFilters& filters, const BiphotonSpectrum& spectrum) {
  return relative_tunneling_time(filters, spectrum, default_delay_grid(spectrum));
}

}  // namespace tunnel::hom
