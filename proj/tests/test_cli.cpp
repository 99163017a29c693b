#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "tunnel/stack_io.hpp"

namespace fs = std::filesystem;

namespace {

fs::path workdir() {
  const auto dir = fs::temp_directory_path() / "tunnelsim_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run(const std::string& args) {
  const auto out = workdir() / "stdout.txt";
  const auto err = workdir() / "stderr.txt";
  const std::string cmd = std::string(TUNNELSIM_BIN) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
}

int count_lines(const std::string& s) {
  int n = 0;
  for (const char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("help documents every exit status") {
    const auto r = run("--help");
    CHECK(r.status == 0);
    for (const char* code : {"  2  ", "  3  ", "  4  ", "  5  ", "  6  "}) CHECK(r.out.find(code) != std::string::npos);
    for (const char* sub : {"spectrum", "delay", "angle-scan", "qm", "hartman", "hom", "ftir", "fdtd", "reproduce"}) {
      CHECK(r.out.find(sub) != std::string::npos);
    }
  }

  TEST_CASE("CSV headers and provenance block") {
    const auto spec = run("spectrum --scan 600:700:50");
    CHECK(spec.status == 0);
    CHECK(spec.out.rfind("# tunnelsim ", 0) == 0);
    CHECK(spec.out.find("\nlambda_nm,omega_rad_per_fs,re_r,im_r,re_t,im_t,T_flux,R_flux\n") != std::string::npos);
    CHECK(run("qm").out.find("\nd,E,V0,tau_wigner,tau_bl,tau_larmor_y,tau_larmor_z,tau_larmor_total,tau_reference,"
                             "relative_delay\n") != std::string::npos);
    CHECK(run("angle-scan --scan 0:2:1").out.find(
              "\ntheta_deg,pol,T_flux,transit_fs,vacuum_fs,relative_fs,v_eff_over_c,bl_fs,larmor_fs\n") !=
          std::string::npos);
    const auto hom = run("hom");
    CHECK(hom.out.find("\ndelay_fs,rate_normalized\n") != std::string::npos);
    CHECK(hom.out.find("# center_fs=") != std::string::npos);
    CHECK(run("ftir").out.find("\ngap_nm,abs_t,displacement_nm,deflection_rad,kappa_per_nm\n") != std::string::npos);
  }

  TEST_CASE("empty stack transmits everything") {
    const auto stack = workdir() / "empty.stack";
    std::ofstream(stack) << "ambient 1\nsubstrate 1\n";
    const auto r = run("spectrum --stack " + stack.string() + " --scan 500:900:100");
    REQUIRE(r.status == 0);
    std::istringstream in(r.out);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line[0] == 'l') continue;
      CHECK(line.substr(line.find_last_of(',', line.rfind(',') - 1) + 1) == "1,0");
      ++rows;
    }
    CHECK(rows == 5);
  }

  TEST_CASE("identical inputs give byte-identical output") {
    const auto a = workdir() / "a.csv";
    const auto b = workdir() / "b.csv";
    REQUIRE(run("angle-scan --scan 0:60:5 --out " + a.string()).status == 0);
    REQUIRE(run("angle-scan --scan 0:60:5 --out " + b.string()).status == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(count_lines(slurp(a)) > 13);
  }

  TEST_CASE("stack files written by the tool parse back identically") {
    const auto p = workdir() / "qw.stack";
    REQUIRE(run("stack --design 650 --nh 2.3 --nl 1.38 --layers 9 --substrate 1.52 --out " + p.string()).status == 0);
    CHECK(tunnel::read_stack_file(p) ==
          tunnel::quarter_wave_stack(650, 2.3, 1.38, 9, tunnel::Medium(1.0), tunnel::Medium(1.52)));
    const auto copy = workdir() / "copy.stack";
    REQUIRE(run("stack --stack " + p.string() + " --out " + copy.string()).status == 0);
    CHECK(tunnel::read_stack_file(copy) == tunnel::read_stack_file(p));
  }

  TEST_CASE("distinct exit statuses") {
    CHECK(run("spectrum --bogus").status == 2);
    CHECK(run("").status == 2);
    CHECK(run("spectrum --scan 1:2").status == 2);
    CHECK(run("delay --pol x").status == 2);
    CHECK(run("reproduce fig9 --out " + (workdir() / "r").string()).status == 2);

    const auto bad = workdir() / "bad.stack";
    std::ofstream(bad) << "ambient 1\nlayer 2.0\nsubstrate 1\n";
    const auto parse = run("delay --stack " + bad.string());
    CHECK(parse.status == 3);
    CHECK(parse.err.find("line 2") != std::string::npos);
    CHECK(count_lines(parse.err) == 1);

    CHECK(run("delay --angle 95").status == 4);
    CHECK(run("ftir --angle 20").status == 4);
    CHECK(run("fdtd --dz 20").status == 4);

    const auto opaque = workdir() / "opaque.stack";
    REQUIRE(run("stack --layers 201 --design 702 --out " + opaque.string()).status == 0);
    CHECK(run("delay --stack " + opaque.string()).status == 5);

    CHECK(run("delay --stack " + (workdir() / "nope.stack").string()).status == 6);
    CHECK(run("spectrum --out /nonexistent-dir/x.csv").status == 6);
  }

  TEST_CASE("reproduce writes the figure CSVs") {
    const auto dir = workdir() / "figs";
    fs::remove_all(dir);
    const auto r = run("reproduce fig3 --out " + dir.string());
    REQUIRE(r.status == 0);
    for (const char* f : {"fig3_barrier_0deg_s.csv", "fig3_control_0deg_s.csv", "fig3_barrier_55deg_p.csv",
                          "fig3_control_55deg_p.csv"}) {
      CHECK(fs::exists(dir / f));
    }
    CHECK(r.out.find("0deg_s: barrier_center_fs=") != std::string::npos);
    CHECK(run("reproduce fig4 --out " + dir.string()).status == 0);
    const auto fig4 = slurp(dir / "fig4_angle_scan.csv");
    CHECK(fig4.find("transit_fs") != std::string::npos);
    CHECK(fig4.find("larmor_fs") != std::string::npos);
    CHECK(fig4.find("T_flux") != std::string::npos);
    CHECK(run("reproduce hartman --out " + dir.string()).status == 0);
    CHECK(run("reproduce ftir --out " + dir.string()).status == 0);
    CHECK(fs::exists(dir / "hartman.csv"));
    CHECK(fs::exists(dir / "ftir_gap_scan.csv"));
  }
}
