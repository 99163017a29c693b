#pragma once

#include <functional>
#include <vector>

#include "tunnel/error.hpp"
#include "tunnel/optics.hpp"

namespace tunnel::hom {

/// Complex amplitude transfer function of one arm, as a function of omega.
using SpectralFilter = std::function<cplx(double omega)>;

SpectralFilter identity_filter();
/// A * exp(i omega delay): a nondispersive element with group delay `delay`.
SpectralFilter delay_filter(double delay_fs, cplx amplitude = 1.0);
/// Transmission amplitude t(omega) of a stack at a fixed angle.
SpectralFilter stack_filter(LayerStack stack, double angle, Polarization pol);

/// The uncoated half of the mirror substrate: the films replaced by a vacuum
/// layer of the same total thickness on the same substrate.
LayerStack uncoated_control(const LayerStack& coated);

struct ArmFilters {
  SpectralFilter barrier_arm = identity_filter();
  SpectralFilter reference_arm = identity_filter();
};

/// Degenerate, frequency-anticorrelated photon pair: detunings (+W, -W)
/// about omega0 with a Gaussian per-photon intensity spectrum.
class BiphotonSpectrum {
 public:
  enum class Shape { Gaussian };

  BiphotonSpectrum(double center_wavelength_nm, double bandwidth_fwhm_nm,
                   Shape shape = Shape::Gaussian);

  /// Bandwidth of a transform-limited Gaussian wavepacket of this duration
  /// (intensity FWHM, fs).
  static BiphotonSpectrum from_pulse_duration(double center_wavelength_nm, double fwhm_fs);

  double center_wavelength() const noexcept { return center_wavelength_; }
  double bandwidth() const noexcept { return bandwidth_; }
  Shape shape() const noexcept { return shape_; }

  double omega0() const;
  /// Standard deviation of the per-photon intensity spectrum, rad/fs.
  double sigma_omega() const;
  /// Standard deviation of the ideal coincidence dip in delay, 1 / (2 sigma_omega).
  double dip_sigma() const;
  /// Pair amplitude at detuning W: exp(-W^2 / (4 sigma_omega^2)).
  double amplitude(double detuning) const;

 private:
  double center_wavelength_;
  double bandwidth_;
  Shape shape_;
};

/// |r^2 + t^2|^2 for a lossless beamsplitter (|r|^2 + |t|^2 = 1 within 1e-9).
double beamsplitter_coincidence(cplx r, cplx t);

struct DipFit {
  double center = 0.0;      // fs
  double width = 0.0;       // Gaussian sigma, fs
  double visibility = 0.0;  // in [0, 1]
  double baseline = 1.0;
  double rms_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  bool reliable = false;  // false for flat data or an off-grid center
};

class FitError : public Error {
 public:
  FitError(const std::string& what, DipFit best) : Error(what), best_(best) {}
  const DipFit& best() const noexcept { return best_; }

 private:
  DipFit best_;
};

/// Least-squares fit of baseline * (1 - V exp(-(tau - tau0)^2 / (2 sigma^2))).
/// Needs at least 7 points; throws FitError (with the best parameters so far)
/// when Levenberg-Marquardt does not converge.
DipFit fit_dip(const std::vector<double>& delays, const std::vector<double>& rates);

struct ScanOptions {
  int grid_points = 1025;     // detuning samples, odd, >= 513
  double span_sigmas = 4.0;   // detuning grid covers +-span_sigmas * sigma_omega
};

struct CoincidenceScan {
  std::vector<double> delays;  // fs
  std::vector<double> rates;   // normalised, baseline -> 1
  DipFit fit;
};

/// Noiseless coincidence rates. Delay tau is added to the reference arm, so
/// a barrier-arm group delay tau_g puts the dip at tau = tau_g.
std::vector<double> coincidence_rates(const ArmFilters& filters, const BiphotonSpectrum& spectrum,
                                      const std::vector<double>& delays,
                                      const ScanOptions& options = {});

/// Rates plus dip fit; the grid must reach -3 and +3 dip widths.
CoincidenceScan coincidence_scan(const ArmFilters& filters, const BiphotonSpectrum& spectrum,
                                 const std::vector<double>& delays,
                                 const ScanOptions& options = {});

/// Delays produced by a double-pass trombone prism stepped in position
/// increments (delay = 2 x / c), covering at least [-half_span, half_span].
std::vector<double> trombone_delay_grid(double half_span_fs, double position_step_nm = 100.0);

/// Default delay grid for a spectrum: +-6 dip widths at encoder resolution.
std::vector<double> default_delay_grid(const BiphotonSpectrum& spectrum);

/// fit_center(barrier vs reference) - fit_center(identity vs identity).
/// Negative: the barrier photon arrives earlier.
double relative_tunneling_time(const ArmFilters& filters, const BiphotonSpectrum& spectrum,
                               const std::vector<double>& delays, const ScanOptions& options = {});
double relative_tunneling_time(const ArmFilters& filters, const BiphotonSpectrum& spectrum);

}  // namespace tunnel::hom
