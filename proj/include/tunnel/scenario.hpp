#pragma once

#include <filesystem>
#include <string>

#include "tunnel/optics.hpp"

namespace tunnel {

/// Inclusive range MIN:MAX:STEP.
struct ScanRange {
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;

  std::vector<double> values() const;
  static ScanRange parse(const std::string& text);
};

/// Named experiment preset. Paths in the file are resolved relative to it.
struct Scenario {
  std::string name;
  std::filesystem::path stack_file;
  LayerStack stack;
  double wavelength = 702.0;        // probe, nm
  double bandwidth = 36.0;          // biphoton FWHM, nm
  double pulse_duration = 20.0;     // fs, informational knob
  double brewster_probe_angle = 55.0;  // deg
  ScanRange spectrum{500.0, 1000.0, 1.0};  // nm
  ScanRange angles{0.0, 70.0, 1.0};        // deg
  std::filesystem::path output_dir = ".";
};

/// Loads and validates a JSON scenario; the stack file must exist.
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace tunnel
