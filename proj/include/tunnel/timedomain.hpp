#pragma once

#include <variant>
#include <vector>

#include "tunnel/optics.hpp"

namespace tunnel::fdtd {

/// Gaussian wavepacket; fwhm is the intensity FWHM in fs.
struct GaussianPulse {
  double center_wavelength = 702.0;
  double fwhm = 40.0;
};

/// sin(omega (t - t_on)) switched on abruptly at t_on: a signal with a sharp front.
struct SharpFrontSinusoid {
  double wavelength = 702.0;
};

using Source = std::variant<GaussianPulse, SharpFrontSinusoid>;

struct GridConfig {
  double spatial_step = 1.0;     // nm
  double courant = 1.0;          // c dt / dz; 1 is the magic step in vacuum
  double lead_in = 400.0;        // nm of vacuum between source plane and stack
  double tail = 2000.0;          // nm of substrate beyond the stack
  int absorber_cells = 300;      // graded matched absorber at each end
  double absorber_strength = 0.1;  // peak loss per half step at the outer edge
  double duration = 0.0;         // fs; 0 picks a window covering the whole signal
  double min_points_per_wavelength = 40.0;
};

/// Sampled index profile and step sizes; construction enforces the
/// Courant bound and the points-per-wavelength resolution.
class Grid1D {
 public:
  Grid1D(const LayerStack& stack, const Source& source, const GridConfig& config);

  double spatial_step() const noexcept { return dz_; }
  double time_step() const noexcept { return dt_; }
  std::size_t size() const noexcept { return permittivity_.size(); }
  const std::vector<double>& permittivity() const noexcept { return permittivity_; }

  std::size_t source_node() const noexcept { return source_; }
  std::size_t entry_node() const noexcept { return entry_; }
  std::size_t exit_node() const noexcept { return exit_; }
  std::size_t steps() const noexcept { return steps_; }
  double absorber(std::size_t i) const;

 private:
  double dz_;
  double dt_;
  std::vector<double> permittivity_;
  std::vector<double> loss_;
  std::size_t source_;
  std::size_t entry_;
  std::size_t exit_;
  std::size_t steps_;
};

/// Electric field at the stack entry and exit planes, sampled every time step
/// starting at t = 0 (source switch-on).
struct ProbeRecord {
  double time_step = 0.0;  // fs
  std::vector<double> entry;
  std::vector<double> exit;
  double exit_index = 1.0;          // refractive index at the exit monitor
  double carrier_wavelength = 0.0;  // nm
  double exit_light_time = 0.0;     // fs: source switch-on + straight path at c
};

/// Same geometry with n = 1 everywhere: the vacuum reference on an identical grid.
LayerStack vacuum_twin(const LayerStack& stack);

ProbeRecord propagate(const LayerStack& stack, const Source& source, const GridConfig& config = {});

/// Envelope-peak time of a record channel: E^2 smoothed over an optical cycle
/// (Gaussian kernel, sigma = half a period), least-squares parabola at the max.
/// Throws DistortedRecord if the envelope has more than one lobe above half max.
double envelope_peak_time(const std::vector<double>& field, double time_step,
                          double carrier_wavelength);

/// Difference of exit-plane envelope-peak times, record minus reference.
double peak_delay(const ProbeRecord& record, const ProbeRecord& reference);

/// RMS difference of the peak-normalised, peak-aligned exit envelopes.
double envelope_distortion(const ProbeRecord& record, const ProbeRecord& reference);

struct EnergyBalance {
  double incident;
  double reflected;
  double transmitted;
  double relative_error() const { return (reflected + transmitted - incident) / incident; }
};

EnergyBalance energy_balance(const ProbeRecord& record, const ProbeRecord& vacuum);

/// n_exit |E_exit(omega)|^2 / |E_incident(omega)|^2 from the two runs.
std::vector<double> spectral_transmission(const ProbeRecord& record, const ProbeRecord& vacuum,
                                          const std::vector<double>& omegas);

/// Angular frequencies where the incident spectral intensity is at least
/// `fraction` of its maximum, `count` points evenly spaced.
std::vector<double> source_band(const ProbeRecord& vacuum, double fraction, int count);

struct FrontCheck {
  double front_time;            // first exit sample above threshold * peak, fs
  double causal_limit;          // exit_light_time, fs
  double max_precursor_ratio;   // max |E| before the limit / max |E|
  bool causal;
};

FrontCheck check_front(const ProbeRecord& record, double threshold = 1e-8);

struct PulseComparison {
  ProbeRecord barrier;
  ProbeRecord vacuum;
  double peak_delay;
  double distortion;
  EnergyBalance energy;
};

/// Runs the stack and its vacuum twin (concurrently) and compares them.
PulseComparison compare_with_vacuum(const LayerStack& stack, const GaussianPulse& pulse,
                                    const GridConfig& config = {});

}  // namespace tunnel::fdtd
