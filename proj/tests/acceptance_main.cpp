// Acceptance suite: one pass/fail line per criterion. Criteria 5-8 are
// Monte Carlo checks at the stated sizes; criterion 9 drives the CLI binary
// (path in argv[1], default ./bbmld) and compares bytes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bbm/mc.hpp"
#include "bbm/params.hpp"
#include "bbm/ratefn.hpp"
#include "bbm/validation.hpp"

namespace {

int g_failures = 0;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

void report(int criterion, const std::string& name, bool pass,
            const std::string& details) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL",
              criterion, name.c_str(), details.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& cli, const std::string& args,
            const std::string& stdout_path) {
  const std::string cmd =
      "'" + cli + "' " + args + " > " + stdout_path + " 2>/dev/null";
  return std::system(cmd.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "./bbmld";
  const std::uint64_t seed = 20250810;
  using clock = std::chrono::steady_clock;

  // Criteria 1-4 and 10 are the deterministic closed-form checks.
  {
    const auto start = clock::now();
    const auto checks = bbm::consistency_checks(seed);
    const double elapsed = seconds_since(start);
    report(1, "closed-form/oracle agreement, 1000 samples per region",
           checks[0].pass && elapsed < 10.0,
           checks[0].details + fmt(", elapsed %.2fs (limit 10s)", elapsed));
    report(2, "threshold continuity of adjacent closed forms", checks[1].pass,
           checks[1].details);
    report(3, "A(1) = 0 in every region", checks[2].pass, checks[2].details);
    report(4, "switching-strategy exponent identity", checks[3].pass,
           checks[3].details);
    report(10, "region classifier metamorphic test", checks[4].pass,
           checks[4].details);
  }

  // Criterion 5: many-to-one, type 1.
  {
    const auto start = clock::now();
    const auto r = bbm::validate_first_moment_type1(
        bbm::ModelParams{1.0, 1.0, 1.0}, 1.0, 0.0, 10000, seed);
    const double elapsed = seconds_since(start);
    report(5, "many-to-one type 1 at (beta=1, sigma2=1, t=1, x=0)",
           r.pass && elapsed < 30.0,
           fmt("target %.5f, empirical %.5f, z %.2f", r.target, r.empirical,
               r.z) +
               fmt(", elapsed %.1fs (limit 30s)", elapsed));
  }

  // Criterion 6: many-to-one, type 2.
  {
    const auto start = clock::now();
    const auto r = bbm::validate_first_moment_type2(
        bbm::ModelParams{2.0, 0.8, 1.0}, 1.0, 0.0, 10000, seed);
    const double elapsed = seconds_since(start);
    report(6, "many-to-one type 2 at (beta=2, sigma2=0.8, alpha=1, t=1, x=0)",
           r.pass && elapsed < 60.0,
           fmt("target %.5f, empirical %.5f, z %.2f", r.target, r.empirical,
               r.z) +
               fmt(", elapsed %.1fs (limit 60s)", elapsed));
  }

  // Criterion 7: level-set growth law.
  {
    const auto start = clock::now();
    const auto r = bbm::level_set_rate(1.0, 1.0, 0.5, 8.0, 1000, seed);
    const double elapsed = seconds_since(start);
    report(7, "level-set law at (sigma2=1, beta=1, x=0.5, t=8)",
           r.pass && elapsed < 300.0,
           fmt("target %.3f, empirical %.4f", r.target, r.empirical) +
               fmt(", elapsed %.1fs (limit 300s)", elapsed));
  }

  // Criterion 8: empirical LDP slope against the closed form.
  {
    const auto start = clock::now();
    const bbm::ModelParams p{1.0, 2.0, 1.0};
    const double target = bbm::rate(p, 1.1).A;  // -0.21
    bool pass = false;
    std::string details;
    try {
      const auto fit =
          bbm::empirical_rate(p, 1.1, {4.0, 6.0, 8.0}, 100000, seed);
      pass = std::fabs(fit.slope - target) <= 0.15;
      details = fmt("target %.3f, fitted slope %.4f +- %.4f", target,
                    fit.slope, fit.stderr_slope);
      details += fmt(", ln p: %.3f %.3f %.3f", fit.points[0].log_p_hat,
                     fit.points[1].log_p_hat, fit.points[2].log_p_hat);
    } catch (const std::exception& e) {
      details = std::string("error: ") + e.what();
    }
    const double elapsed = seconds_since(start);
    if (elapsed >= 900.0) pass = false;
    report(8, "empirical LDP slope at (beta=1, sigma2=2, alpha=1, theta=1.1)",
           pass, details + fmt(", elapsed %.0fs (limit 900s)", elapsed));
  }

  // Criterion 9: CLI reproducibility (same bytes twice; same bytes for 1
  // and 4 workers).
  {
    bool pass = true;
    std::string details;
    const std::string dir = "acceptance_tmp";
    std::system(("mkdir -p " + dir).c_str());
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"classify", "classify --beta 3 --sigma2 0.5"},
        {"rate", "rate --beta 3 --sigma2 0.5 --theta 1.2"},
        {"simulate",
         "simulate --beta 1 --sigma2 2 --alpha 1 --t 2 --runs 50 --seed 7 "
         "--threshold 4 --levels 0,1"},
        {"validate_consistency", "validate --suite consistency --seed 42"},
        {"validate_moments",
         "validate --suite moments --runs 400 --seed 42 --workers 1"},
        {"validate_moments_w4",
         "validate --suite moments --runs 400 --seed 42 --workers 4"},
    };
    std::vector<std::string> outputs;
    for (const auto& [name, args] : commands) {
      const std::string out_a = dir + "/" + name + "_a.txt";
      const std::string out_b = dir + "/" + name + "_b.txt";
      const int rc_a = run_cli(cli, args, out_a);
      const int rc_b = run_cli(cli, args, out_b);
      const std::string bytes_a = read_file(out_a);
      if (rc_a != rc_b || bytes_a != read_file(out_b) || bytes_a.empty()) {
        pass = false;
        details += name + " not reproducible; ";
      }
      outputs.push_back(bytes_a);
    }
    // 1 vs 4 workers, byte-identical.
    if (outputs.size() >= 2 &&
        outputs[outputs.size() - 2] != outputs[outputs.size() - 1]) {
      pass = false;
      details += "worker count changed validate output; ";
    }
    // sweep writes a file; compare the two files.
    const std::string sweep_args =
        "sweep --beta-range 0.5:3:4 --sigma2-range 0.5:2:4 "
        "--theta-range 1.1:1.5:3 --output ";
    run_cli(cli, sweep_args + dir + "/sweep_a.csv", dir + "/sweep_a_out.txt");
    run_cli(cli, sweep_args + dir + "/sweep_b.csv", dir + "/sweep_b_out.txt");
    const std::string sweep_a = read_file(dir + "/sweep_a.csv");
    if (sweep_a.empty() || sweep_a != read_file(dir + "/sweep_b.csv")) {
      pass = false;
      details += "sweep not reproducible; ";
    }
    if (pass) details = "all commands byte-identical across reruns and worker counts";
    report(9, "CLI reproducibility with fixed seeds", pass, details);
  }

  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return 1;
}
