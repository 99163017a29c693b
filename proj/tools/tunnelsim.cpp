// tunnelsim: command-line front end for the tunnelling-time simulator.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tunnel/csv.hpp"
#include "tunnel/delay.hpp"
#include "tunnel/error.hpp"
#include "tunnel/ftir.hpp"
#include "tunnel/hom.hpp"
#include "tunnel/qm_barrier.hpp"
#include "tunnel/scenario.hpp"
#include "tunnel/stack_io.hpp"
#include "tunnel/timedomain.hpp"

namespace fs = std::filesystem;
using namespace tunnel;

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kParse = 3,
  kPrecondition = 4,
  kNumerical = 5,
  kIo = 6,
};

constexpr const char* kExitHelp =
    "Exit status:\n"
    "  0  success\n"
    "  1  unexpected internal error\n"
    "  2  usage error (unknown flag, bad flag value)\n"
    "  3  malformed stack or scenario file\n"
    "  4  precondition violated (argument out of range, grid too coarse)\n"
    "  5  numerical failure (undefined delay, degenerate scan, fit failure)\n"
    "  6  file could not be read or written";

// Bad flag value detected after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Where a CSV goes: --out PATH or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw IoError("cannot write " + path);
    path_ = path;
  }
  ~Sink() noexcept(false) {
    if (file_ && std::uncaught_exceptions() == 0) {
      file_->flush();
      if (!*file_) throw IoError("write failed for " + path_);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::string path_;
};

struct CommonFlags {
  std::string stack_path;
  double lambda = 702.0;
  double angle_deg = 0.0;
  std::string pol = "s";
  std::string scan;
  std::string out;
};

Polarization to_pol(const std::string& s) { return (s == "p" || s == "P") ? Polarization::P : Polarization::S; }

LayerStack load_stack(const CommonFlags& f) {
  return f.stack_path.empty() ? berkeley_mirror() : read_stack_file(f.stack_path);
}

std::string stack_label(const CommonFlags& f) {
  return f.stack_path.empty() ? "builtin:berkeley_mirror" : f.stack_path;
}

std::vector<double> scan_values(const std::string& text) {
  try {
    return ScanRange::parse(text).values();
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("--scan: ") + e.what());
  }
}

void add_stack_flag(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--stack", f.stack_path, "Stack definition file (default: built-in Berkeley mirror)");
}

void add_probe_flags(CLI::App* sub, CommonFlags& f, double default_angle, const char* default_pol) {
  f.angle_deg = default_angle;
  f.pol = default_pol;
  sub->add_option("--lambda", f.lambda, "Vacuum wavelength, nm")->capture_default_str();
  sub->add_option("--angle", f.angle_deg, "Angle of incidence, degrees")->capture_default_str();
  sub->add_option("--pol", f.pol, "Polarization s|p")
      ->check(CLI::IsMember({"s", "p", "S", "P"}))
      ->capture_default_str();
}

void add_out_flag(CLI::App* sub, CommonFlags& f, const char* what = "Output CSV (default stdout)") {
  sub->add_option("--out", f.out, what);
}

CsvWriter::Params probe_params(const CommonFlags& f) {
  return {{"stack", stack_label(f)},
          {"lambda_nm", fmt_num(f.lambda)},
          {"angle_deg", fmt_num(f.angle_deg)},
          {"pol", to_string(to_pol(f.pol))}};
}

std::string opt_num(const std::optional<double>& v) { return v ? fmt_num(*v) : ""; }

// ---------------------------------------------------------------- spectrum

void run_spectrum(const CommonFlags& f) {
  const auto stack = load_stack(f);
  const auto lambdas = scan_values(f.scan.empty() ? "500:1000:1" : f.scan);
  auto params = probe_params(f);
  params.erase(params.begin() + 1);
  params.emplace_back("scan_lambda_nm", f.scan.empty() ? "500:1000:1" : f.scan);
  Sink sink(f.out);
  CsvWriter csv(sink.stream(), params,
                {"lambda_nm", "omega_rad_per_fs", "re_r", "im_r", "re_t", "im_t", "T_flux", "R_flux"});
  for (const double lam : lambdas) {
    const Incidence inc(lam, radians(f.angle_deg), to_pol(f.pol));
    const auto r = stack_response(stack, inc);
    csv.row({fmt_num(lam), fmt_num(inc.omega()), fmt_num(r.r.real()), fmt_num(r.r.imag()),
             fmt_num(r.t.real()), fmt_num(r.t.imag()), fmt_num(r.flux_transmission),
             fmt_num(r.flux_reflection)});
  }
}

// ------------------------------------------------------------ delay / scan

const std::vector<std::string> kAngleColumns = {"theta_deg", "pol",        "T_flux",       "transit_fs",
                                                "vacuum_fs", "relative_fs", "v_eff_over_c", "bl_fs",
                                                "larmor_fs"};

std::vector<std::string> angle_row(double theta_deg, Polarization pol, const PhotonicDelayReport& r) {
  return {fmt_num(theta_deg),          to_string(pol),          fmt_num(r.flux_transmission),
          fmt_num(r.transit_time),     fmt_num(r.vacuum_time),  fmt_num(r.relative_delay),
          fmt_num(r.effective_velocity), opt_num(r.bl_time),    fmt_num(r.larmor_total)};
}

void run_delay(const CommonFlags& f) {
  const auto stack = load_stack(f);
  const auto pol = to_pol(f.pol);
  const auto r = photonic_wigner(stack, Incidence(f.lambda, radians(f.angle_deg), pol));
  Sink sink(f.out);
  CsvWriter csv(sink.stream(), probe_params(f),
                {"lambda_nm", "theta_deg", "pol", "T_flux", "transit_fs", "vacuum_fs", "relative_fs",
                 "v_eff_over_c", "bl_fs", "larmor_y_fs", "larmor_z_fs", "larmor_fs"});
  csv.row({fmt_num(f.lambda), fmt_num(f.angle_deg), to_string(pol), fmt_num(r.flux_transmission),
           fmt_num(r.transit_time), fmt_num(r.vacuum_time), fmt_num(r.relative_delay),
           fmt_num(r.effective_velocity), opt_num(r.bl_time), fmt_num(r.larmor_y),
           fmt_num(r.larmor_z), fmt_num(r.larmor_total)});
}

void write_angle_scan(std::ostream& out, const CsvWriter::Params& params, const LayerStack& stack,
                      double lambda, Polarization pol, const std::vector<double>& degs) {
  std::vector<double> rads;
  for (const double d : degs) rads.push_back(radians(d));
  const auto points = angle_scan(stack, lambda, pol, rads);
  CsvWriter csv(out, params, kAngleColumns);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].report) {
      csv.row(angle_row(degs[i], pol, *points[i].report));
    } else {
      csv.comment("theta_deg=" + fmt_num(degs[i]) + " skipped: " + points[i].error);
    }
  }
}

void run_angle_scan(const CommonFlags& f) {
  const auto stack = load_stack(f);
  const std::string scan = f.scan.empty() ? "0:70:1" : f.scan;
  const auto degs = scan_values(scan);
  for (const double d : degs) {
    if (!(d >= 0.0 && d < 90.0)) throw InvalidArgument("scan angles must lie in [0, 90) degrees");
  }
  CsvWriter::Params params{{"stack", stack_label(f)},
                           {"lambda_nm", fmt_num(f.lambda)},
                           {"pol", to_string(to_pol(f.pol))},
                           {"scan_theta_deg", scan}};
  Sink sink(f.out);
  write_angle_scan(sink.stream(), params, stack, f.lambda, to_pol(f.pol), degs);
}

// ---------------------------------------------------------------- qm

struct QmFlags {
  double height = 1.0;
  double energy = 0.5;
  double width = 10.0;
  double hbar = 1.0;
  double mass = 1.0;
};

const std::vector<std::string> kQmColumns = {"d",          "E",           "V0",
                                             "tau_wigner", "tau_bl",      "tau_larmor_y",
                                             "tau_larmor_z", "tau_larmor_total", "tau_reference",
                                             "relative_delay"};

std::vector<std::string> qm_row(const qm::RectangularBarrier& b, const qm::DelayReport& r) {
  return {fmt_num(b.width()),     fmt_num(b.energy()),        fmt_num(b.height()),
          fmt_num(r.wigner_time), opt_num(r.bl_time),         fmt_num(r.larmor_y),
          fmt_num(r.larmor_z),    fmt_num(r.larmor_total),    fmt_num(r.reference_time),
          fmt_num(r.relative_delay)};
}

CsvWriter::Params qm_params(const QmFlags& q) {
  return {{"V0", fmt_num(q.height)}, {"E", fmt_num(q.energy)}, {"d", fmt_num(q.width)},
          {"hbar", fmt_num(q.hbar)}, {"mass", fmt_num(q.mass)}};
}

void run_qm(const QmFlags& q, const CommonFlags& f) {
  const qm::RectangularBarrier base(q.height, q.width, q.energy, {q.hbar, q.mass});
  auto params = qm_params(q);
  std::vector<double> energies{q.energy};
  if (!f.scan.empty()) {
    energies = scan_values(f.scan);
    params.emplace_back("scan_E", f.scan);
  }
  Sink sink(f.out);
  CsvWriter csv(sink.stream(), params, kQmColumns);
  for (const double e : energies) {
    const auto b = base.with_energy(e);
    csv.row(qm_row(b, qm::delay_report(b)));
  }
}

void write_hartman(std::ostream& out, const QmFlags& q, const std::string& scan_kd) {
  const qm::RectangularBarrier base(q.height, q.width, q.energy, {q.hbar, q.mass});
  if (!(base.kappa() > 0.0)) throw InvalidArgument("hartman scan needs E < V0");
  std::vector<double> widths;
  for (const double kd : scan_values(scan_kd)) widths.push_back(kd / base.kappa());
  auto params = qm_params(q);
  params.erase(params.begin() + 2);
  params.emplace_back("scan_kappa_d", scan_kd);
  const auto reports = qm::hartman_scan(base, widths);
  CsvWriter csv(out, params, kQmColumns);
  for (std::size_t i = 0; i < widths.size(); ++i) csv.row(qm_row(base.with_width(widths[i]), reports[i]));
  csv.comment("opaque_limit_hbar_over_V0_minus_E=" + fmt_num(q.hbar / (q.height - q.energy)));
}

void run_hartman(const QmFlags& q, const CommonFlags& f) {
  Sink sink(f.out);
  write_hartman(sink.stream(), q, f.scan.empty() ? "1:10:0.5" : f.scan);
}

// ---------------------------------------------------------------- hom

struct HomFlags {
  double bandwidth = 36.0;
  std::string reference = "control";
};

hom::ArmFilters hom_filters(const LayerStack& stack, double angle, Polarization pol,
                            const std::string& reference) {
  hom::ArmFilters arms;
  arms.barrier_arm = hom::stack_filter(stack, angle, pol);
  arms.reference_arm = reference == "control" ? hom::stack_filter(hom::uncoated_control(stack), angle, pol)
                                              : hom::identity_filter();
  return arms;
}

void write_hom_scan(std::ostream& out, CsvWriter::Params params, const hom::ArmFilters& arms,
                    const hom::BiphotonSpectrum& spec, const std::vector<double>& delays) {
  const auto scan = hom::coincidence_scan(arms, spec, delays);
  CsvWriter csv(out, params, {"delay_fs", "rate_normalized"});
  for (std::size_t i = 0; i < delays.size(); ++i) csv.row({fmt_num(delays[i]), fmt_num(scan.rates[i])});
  csv.comment("center_fs=" + fmt_num(scan.fit.center) + " width_fs=" + fmt_num(scan.fit.width) +
              " visibility=" + fmt_num(scan.fit.visibility));
}

void run_hom(const HomFlags& h, const CommonFlags& f) {
  const auto stack = load_stack(f);
  const hom::BiphotonSpectrum spec(f.lambda, h.bandwidth);
  const auto delays = f.scan.empty() ? hom::default_delay_grid(spec) : scan_values(f.scan);
  auto params = probe_params(f);
  params.emplace_back("bandwidth_nm", fmt_num(h.bandwidth));
  params.emplace_back("reference_arm", h.reference);
  if (!f.scan.empty()) params.emplace_back("scan_delay_fs", f.scan);
  const auto arms = hom_filters(stack, radians(f.angle_deg), to_pol(f.pol), h.reference);
  Sink sink(f.out);
  write_hom_scan(sink.stream(), params, arms, spec, delays);
  const double shift = hom::relative_tunneling_time(arms, spec, delays);
  sink.stream() << "# relative_fs=" << fmt_num(shift) << '\n';
  if (!f.out.empty()) {
    const auto fit = hom::coincidence_scan(arms, spec, delays).fit;
    std::cout << "hom: center_fs=" << fmt_num(fit.center) << " width_fs=" << fmt_num(fit.width)
              << " visibility=" << fmt_num(fit.visibility) << " relative_fs=" << fmt_num(shift) << '\n';
  }
}

// ---------------------------------------------------------------- ftir

struct FtirFlags {
  double prism_index = 1.52;
  double waist = 30000.0;
};

void write_ftir(std::ostream& out, const ftir::FtirGeometry& g, const ftir::GaussianBeam& beam,
                const std::string& scan, bool scan_is_kappa_g) {
  g.validate();
  if (!g.is_tunneling()) throw InvalidArgument("FTIR needs an angle beyond the critical angle");
  std::vector<double> gaps = scan_values(scan);
  if (scan_is_kappa_g) {
    for (auto& x : gaps) x /= g.kappa_gap();
  }
  CsvWriter::Params params{{"prism_index", fmt_num(g.prism_index)},
                           {"lambda_nm", fmt_num(g.vacuum_wavelength)},
                           {"angle_deg", fmt_num(degrees(g.incidence_angle))},
                           {"critical_angle_deg", fmt_num(degrees(g.critical_angle()))},
                           {"pol", to_string(g.polarization)},
                           {"waist_nm", fmt_num(beam.waist)},
                           {scan_is_kappa_g ? "scan_kappa_gap" : "scan_gap_nm", scan}};
  CsvWriter csv(out, params, {"gap_nm", "abs_t", "displacement_nm", "deflection_rad", "kappa_per_nm"});
  for (const auto& r : ftir::gap_scan(g, gaps, beam)) {
    csv.row({fmt_num(r.gap), fmt_num(r.abs_t), fmt_num(r.displacement), fmt_num(r.deflection),
             fmt_num(r.kappa)});
  }
}

void run_ftir(const FtirFlags& x, const CommonFlags& f) {
  ftir::FtirGeometry g;
  g.prism_index = x.prism_index;
  g.vacuum_wavelength = f.lambda;
  g.incidence_angle = radians(f.angle_deg);
  g.polarization = to_pol(f.pol);
  Sink sink(f.out);
  write_ftir(sink.stream(), g, ftir::GaussianBeam{x.waist}, f.scan.empty() ? "5:10:0.5" : f.scan,
             f.scan.empty());
}

// ---------------------------------------------------------------- fdtd

struct FdtdFlags {
  double fwhm = 40.0;
  double dz = 1.0;
  std::string source = "gaussian";
};

void write_monitor(const fs::path& path, const CsvWriter::Params& params, const fdtd::ProbeRecord& rec,
                   bool exit_plane) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  auto p = params;
  p.emplace_back("monitor", exit_plane ? "exit" : "entry");
  CsvWriter csv(out, p, {"t_fs", "field"});
  const auto& x = exit_plane ? rec.exit : rec.entry;
  for (std::size_t i = 0; i < x.size(); ++i) {
    csv.row({fmt_num(static_cast<double>(i) * rec.time_step), fmt_num(x[i])});
  }
  if (!out) throw IoError("write failed for " + path.string());
}

void run_fdtd(const FdtdFlags& d, const CommonFlags& f) {
  const auto stack = load_stack(f);
  fdtd::GridConfig cfg;
  cfg.spatial_step = d.dz;
  const fdtd::GaussianPulse pulse{f.lambda, d.fwhm};
  const fdtd::SharpFrontSinusoid front{f.lambda};

  const auto cmp = fdtd::compare_with_vacuum(stack, pulse, cfg);
  const auto sharp = fdtd::propagate(stack, front, cfg);
  const auto verdict = fdtd::check_front(sharp);

  CsvWriter::Params params{{"stack", stack_label(f)},    {"lambda_nm", fmt_num(f.lambda)},
                           {"fwhm_fs", fmt_num(d.fwhm)},  {"dz_nm", fmt_num(d.dz)},
                           {"source", d.source}};
  const auto& shown = d.source == "front" ? sharp : cmp.barrier;
  const std::string summary =
      "peak_delay_fs=" + fmt_num(cmp.peak_delay) + " energy_error=" + fmt_num(cmp.energy.relative_error()) +
      " distortion=" + fmt_num(cmp.distortion) + " front_fs=" + fmt_num(verdict.front_time) +
      " causal_limit_fs=" + fmt_num(verdict.causal_limit) +
      " precursor_ratio=" + fmt_num(verdict.max_precursor_ratio) +
      " front_causal=" + (verdict.causal ? "yes" : "no");

  if (f.out.empty() || f.out == "-") {
    auto p = params;
    p.emplace_back("monitor", "exit");
    CsvWriter csv(std::cout, p, {"t_fs", "field"});
    for (std::size_t i = 0; i < shown.exit.size(); ++i) {
      csv.row({fmt_num(static_cast<double>(i) * shown.time_step), fmt_num(shown.exit[i])});
    }
    csv.comment(summary);
    return;
  }
  write_monitor(f.out + "_entry.csv", params, shown, false);
  write_monitor(f.out + "_exit.csv", params, shown, true);
  std::cout << summary << '\n';
}

// ---------------------------------------------------------------- stack

struct StackFlags {
  double design = 700.0;
  double n_high = 2.22;
  double n_low = 1.45;
  int layers = 11;
  double ambient = 1.0;
  double substrate = 1.45;
};

void run_stack(const StackFlags& s, const CommonFlags& f) {
  const auto stack = f.stack_path.empty()
                         ? quarter_wave_stack(s.design, s.n_high, s.n_low, s.layers, Medium(s.ambient),
                                              Medium(s.substrate))
                         : read_stack_file(f.stack_path);
  const std::string comment =
      f.stack_path.empty() ? "quarter-wave stack: design " + fmt_num(s.design) + " nm, nH " +
                                 fmt_num(s.n_high) + ", nL " + fmt_num(s.n_low) + ", " +
                                 std::to_string(s.layers) + " layers"
                           : "copied from " + f.stack_path;
  if (f.out.empty() || f.out == "-") {
    std::cout << format_stack(stack, comment);
  } else {
    write_stack_file(f.out, stack, comment);
  }
}

// ---------------------------------------------------------------- reproduce

fs::path default_scenario() { return fs::path(TUNNELSIM_SCENARIO_DIR) / "berkeley.json"; }

void reproduce(const std::string& figure, const std::string& scenario_path, const std::string& out_dir) {
  const auto sc = load_scenario(scenario_path.empty() ? default_scenario() : fs::path(scenario_path));
  const fs::path dir = out_dir.empty() ? sc.output_dir : fs::path(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  auto open = [&](const std::string& name) {
    auto p = dir / name;
    auto out = std::make_unique<std::ofstream>(p);
    if (!*out) throw IoError("cannot write " + p.string());
    return std::pair{std::move(out), p};
  };
  auto finish = [](std::ofstream& out, const fs::path& p) {
    out.flush();
    if (!out) throw IoError("write failed for " + p.string());
    std::cout << "wrote " << p.string() << '\n';
  };
  CsvWriter::Params base{{"scenario", sc.name}, {"stack", sc.stack_file.filename().string()}};

  if (figure == "fig3") {
    const hom::BiphotonSpectrum spec(sc.wavelength, sc.bandwidth);
    const auto delays = hom::default_delay_grid(spec);
    const auto control = hom::uncoated_control(sc.stack);
    struct Case {
      const char* tag;
      double angle_deg;
      Polarization pol;
    };
    for (const Case c : {Case{"0deg_s", 0.0, Polarization::S},
                         Case{"55deg_p", sc.brewster_probe_angle, Polarization::P}}) {
      double centers[2];
      int k = 0;
      for (const bool coated : {true, false}) {
        auto params = base;
        params.emplace_back("lambda_nm", fmt_num(sc.wavelength));
        params.emplace_back("bandwidth_nm", fmt_num(sc.bandwidth));
        params.emplace_back("angle_deg", fmt_num(c.angle_deg));
        params.emplace_back("pol", to_string(c.pol));
        params.emplace_back("arm", coated ? "barrier" : "control");
        hom::ArmFilters arms;
        arms.barrier_arm = hom::stack_filter(coated ? sc.stack : control, radians(c.angle_deg), c.pol);
        const auto scan = hom::coincidence_scan(arms, spec, delays);
        centers[k++] = scan.fit.center;
        auto [out, path] = open(std::string("fig3_") + (coated ? "barrier_" : "control_") + c.tag + ".csv");
        write_hom_scan(*out, params, arms, spec, delays);
        finish(*out, path);
      }
      std::cout << "fig3 " << c.tag << ": barrier_center_fs=" << fmt_num(centers[0])
                << " control_center_fs=" << fmt_num(centers[1])
                << " shift_fs=" << fmt_num(centers[0] - centers[1]) << '\n';
    }
  } else if (figure == "fig4") {
    auto params = base;
    params.emplace_back("lambda_nm", fmt_num(sc.wavelength));
    params.emplace_back("pol", "p");
    params.emplace_back("scan_theta_deg", fmt_num(sc.angles.min) + ":" + fmt_num(sc.angles.max) + ":" +
                                              fmt_num(sc.angles.step));
    auto [out, path] = open("fig4_angle_scan.csv");
    write_angle_scan(*out, params, sc.stack, sc.wavelength, Polarization::P, sc.angles.values());
    finish(*out, path);
  } else if (figure == "hartman") {
    auto [out, path] = open("hartman.csv");
    write_hartman(*out, QmFlags{}, "1:10:0.5");
    finish(*out, path);
  } else if (figure == "ftir") {
    ftir::FtirGeometry g;
    g.vacuum_wavelength = sc.wavelength;
    auto [out, path] = open("ftir_gap_scan.csv");
    write_ftir(*out, g, ftir::GaussianBeam{}, "5:10:0.5", true);
    finish(*out, path);
  } else {
    throw UsageError("unknown figure '" + figure + "' (expected fig3, fig4, hartman or ftir)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tunnelsim: photonic and quantum tunnelling-time simulator"};
  app.footer(kExitHelp);
  app.require_subcommand(1);

  CommonFlags f_spec, f_delay, f_ascan, f_qm, f_hartman, f_hom, f_ftir, f_fdtd, f_stack, f_repro;
  QmFlags q;
  HomFlags h;
  FtirFlags x;
  FdtdFlags d;
  StackFlags s;
  std::string figure, scenario;

  auto* spectrum = app.add_subcommand("spectrum", "Complex r, t and flux R, T over a wavelength scan");
  add_stack_flag(spectrum, f_spec);
  add_probe_flags(spectrum, f_spec, 0.0, "s");
  spectrum->add_option("--scan", f_spec.scan, "Wavelengths MIN:MAX:STEP, nm (default 500:1000:1)");
  add_out_flag(spectrum, f_spec);

  auto* delay = app.add_subcommand("delay", "Wigner, Larmor and BL times at one probe");
  add_stack_flag(delay, f_delay);
  add_probe_flags(delay, f_delay, 0.0, "s");
  add_out_flag(delay, f_delay);

  auto* ascan = app.add_subcommand("angle-scan", "Delay report versus angle of incidence");
  add_stack_flag(ascan, f_ascan);
  add_probe_flags(ascan, f_ascan, 0.0, "p");
  ascan->add_option("--scan", f_ascan.scan, "Angles MIN:MAX:STEP, degrees (default 0:70:1)");
  add_out_flag(ascan, f_ascan);

  auto add_qm_flags = [&](CLI::App* sub, CommonFlags& cf) {
    sub->add_option("--V0", q.height, "Barrier height")->capture_default_str();
    sub->add_option("--energy", q.energy, "Particle energy")->capture_default_str();
    sub->add_option("--hbar", q.hbar, "Reduced Planck constant")->capture_default_str();
    sub->add_option("--mass", q.mass, "Particle mass")->capture_default_str();
    add_out_flag(sub, cf);
  };
  auto* qmc = app.add_subcommand("qm", "Rectangular-barrier tunnelling times");
  add_qm_flags(qmc, f_qm);
  qmc->add_option("--width", q.width, "Barrier width")->capture_default_str();
  qmc->add_option("--scan", f_qm.scan, "Energies MIN:MAX:STEP (default: --energy only)");

  auto* hartman = app.add_subcommand("hartman", "Times versus barrier width");
  add_qm_flags(hartman, f_hartman);
  hartman->add_option("--scan", f_hartman.scan, "kappa*d MIN:MAX:STEP (default 1:10:0.5)");

  auto* homc = app.add_subcommand("hom", "Hong-Ou-Mandel coincidence scan through the stack");
  add_stack_flag(homc, f_hom);
  add_probe_flags(homc, f_hom, 0.0, "s");
  homc->add_option("--bandwidth", h.bandwidth, "Per-photon FWHM bandwidth, nm")->capture_default_str();
  homc->add_option("--reference", h.reference, "Reference arm: control (uncoated substrate) or free")
      ->check(CLI::IsMember({"control", "free"}))
      ->capture_default_str();
  homc->add_option("--scan", f_hom.scan, "Delays MIN:MAX:STEP, fs (default +-6 dip widths)");
  add_out_flag(homc, f_hom);

  auto* ftirc = app.add_subcommand("ftir", "Frustrated-TIR gap scan: beam displacement and deflection");
  add_probe_flags(ftirc, f_ftir, 55.0, "s");
  ftirc->add_option("--prism", x.prism_index, "Prism index")->capture_default_str();
  ftirc->add_option("--waist", x.waist, "Beam waist, nm")->capture_default_str();
  ftirc->add_option("--scan", f_ftir.scan, "Gaps MIN:MAX:STEP, nm (default kappa*g from 5 to 10)");
  add_out_flag(ftirc, f_ftir);

  auto* fdtdc = app.add_subcommand("fdtd", "1D time-domain run: pulse delay and front causality");
  add_stack_flag(fdtdc, f_fdtd);
  fdtdc->add_option("--lambda", f_fdtd.lambda, "Carrier wavelength, nm")->capture_default_str();
  fdtdc->add_option("--fwhm", d.fwhm, "Pulse intensity FWHM, fs")->capture_default_str();
  fdtdc->add_option("--dz", d.dz, "Spatial step, nm")->capture_default_str();
  fdtdc->add_option("--source", d.source, "Field written out: gaussian or front")
      ->check(CLI::IsMember({"gaussian", "front"}))
      ->capture_default_str();
  add_out_flag(fdtdc, f_fdtd, "Output prefix: PREFIX_entry.csv and PREFIX_exit.csv (default: exit on stdout)");

  auto* stackc = app.add_subcommand("stack", "Write a quarter-wave stack file (or re-emit --stack)");
  add_stack_flag(stackc, f_stack);
  stackc->add_option("--design", s.design, "Design wavelength, nm")->capture_default_str();
  stackc->add_option("--nh", s.n_high, "High index")->capture_default_str();
  stackc->add_option("--nl", s.n_low, "Low index")->capture_default_str();
  stackc->add_option("--layers", s.layers, "Layer count")->capture_default_str();
  stackc->add_option("--ambient", s.ambient, "Ambient index")->capture_default_str();
  stackc->add_option("--substrate", s.substrate, "Substrate index")->capture_default_str();
  add_out_flag(stackc, f_stack, "Output stack file (default stdout)");

  auto* repro = app.add_subcommand("reproduce", "Write the CSVs behind a figure: fig3, fig4, hartman, ftir");
  repro->add_option("figure", figure, "fig3 | fig4 | hartman | ftir")->required();
  repro->add_option("--scenario", scenario, "Scenario JSON (default: bundled berkeley.json)");
  repro->add_option("--out", f_repro.out, "Output directory (default: scenario output_dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "tunnelsim: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*spectrum) run_spectrum(f_spec);
    else if (*delay) run_delay(f_delay);
    else if (*ascan) run_angle_scan(f_ascan);
    else if (*qmc) run_qm(q, f_qm);
    else if (*hartman) run_hartman(q, f_hartman);
    else if (*homc) run_hom(h, f_hom);
    else if (*ftirc) run_ftir(x, f_ftir);
    else if (*fdtdc) run_fdtd(d, f_fdtd);
    else if (*stackc) run_stack(s, f_stack);
    else if (*repro) reproduce(figure, scenario, f_repro.out);
    std::cout.flush();
    if (!std::cout) throw IoError("write to stdout failed");
    return kOk;
  } catch (const UsageError& e) {
    std::cerr << "tunnelsim: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "tunnelsim: " << e.what() << '\n';
    return kParse;
  } catch (const IoError& e) {
    std::cerr << "tunnelsim: " << e.what() << '\n';
    return kIo;
  } catch (const InvalidArgument& e) {
    std::cerr << "tunnelsim: " << e.what() << '\n';
    return kPrecondition;
  } catch (const GridError& e) {
    std::cerr << "tunnelsim: " << e.what() << '\n';
    return kPrecondition;
  } catch (const OutsideStopBand& e) {
    std::cerr << "tunnelsim: " << e.what() << '\n';
    return kPrecondition;
  } catch (const Error& e) {
    // UnreliableDelay, DegenerateScan, FitError, DistortedRecord.
    std::cerr << "tunnelsim: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "tunnelsim: internal error: " << e.what() << '\n';
    return kFailure;
  }
}
