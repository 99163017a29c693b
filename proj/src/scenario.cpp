#include "tunnel/scenario.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "tunnel/error.hpp"
#include "tunnel/stack_io.hpp"

namespace tunnel {

std::vector<double> ScanRange::values() const {
  if (!(step > 0.0)) throw InvalidArgument("scan step must be positive");
  if (!(max >= min)) throw InvalidArgument("scan maximum below minimum");
  // Count from the endpoints so rounding never drops or duplicates MAX.
  const auto n = static_cast<long>(std::floor((max - min) / step + 1e-9)) + 1;
  if (n > 10'000'000) throw InvalidArgument("scan has too many points");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) out.push_back(min + step * static_cast<double>(i));
  return out;
}

ScanRange ScanRange::parse(const std::string& text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos || text.find(':', b + 1) != std::string::npos) {
    throw InvalidArgument("scan must be MIN:MAX:STEP, got '" + text + "'");
  }
  ScanRange r;
  try {
    r.min = parse_number(std::string_view(text).substr(0, a));
    r.max = parse_number(std::string_view(text).substr(a + 1, b - a - 1));
    r.step = parse_number(std::string_view(text).substr(b + 1));
  } catch (const InvalidArgument& e) {
    throw InvalidArgument("scan '" + text + "': " + e.what());
  }
  r.values();  // validates
  return r;
}

namespace {

ScanRange range_from(const nlohmann::json& j, const char* key, ScanRange fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_string()) return ScanRange::parse(v.get<std::string>());
  ScanRange r{v.at("min").get<double>(), v.at("max").get<double>(), v.at("step").get<double>()};
  r.values();
  return r;
}

}  // namespace

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }

  Scenario s;
  try {
    s.name = j.value("name", path.stem().string());
    const auto base = path.parent_path();
    s.stack_file = base / j.at("stack").get<std::string>();
    s.wavelength = j.value("wavelength_nm", s.wavelength);
    s.bandwidth = j.value("bandwidth_nm", s.bandwidth);
    s.pulse_duration = j.value("pulse_duration_fs", s.pulse_duration);
    s.brewster_probe_angle = j.value("brewster_probe_angle_deg", s.brewster_probe_angle);
    s.spectrum = range_from(j, "spectrum_nm", s.spectrum);
    s.angles = range_from(j, "angles_deg", s.angles);
    s.output_dir = base / j.value("output_dir", std::string("."));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }

  if (!std::filesystem::exists(s.stack_file)) {
    throw InvalidArgument("scenario references missing stack file '" + s.stack_file.string() + "'");
  }
  s.stack = read_stack_file(s.stack_file);
  if (!(s.wavelength > 0.0) || !(s.bandwidth > 0.0) || !(s.pulse_duration > 0.0)) {
    throw InvalidArgument("scenario wavelength, bandwidth and pulse duration must be positive");
  }
  if (!(s.brewster_probe_angle >= 0.0 && s.brewster_probe_angle < 90.0) ||
      !(s.angles.min >= 0.0 && s.angles.max < 90.0)) {
    throw InvalidArgument("scenario angles must lie in [0, 90) degrees");
  }
  if (!(s.spectrum.min > 0.0)) throw InvalidArgument("scenario spectrum must start above 0 nm");
  return s;
}

}  // namespace tunnel
