// mhs: command-line front end for exact cyclotomic multiple harmonic sums.
//
// Exit codes: 0 success, 1 usage or parse error, 2 internal verification failure,
// 3 conjecture assertion failed (scan --assert-conjecture only).

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mhs/mhs.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSoundness = 2;
constexpr int kExitConjecture = 3;

void print(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

int run_eval(const std::string& text, unsigned approx_digits) {
  const auto index = mhs::parse_index(text);
  const auto value = mhs::mhs_fast(index);
  nlohmann::json out = {{"index", mhs::render_index(index)}, {"value", mhs::cyc_to_json(value)}};
  if (approx_digits > 0) {
    const auto z = mhs::complex_embed(value, approx_digits);
    out["approx"] = {{"real", z.real}, {"imag", z.imag}, {"digits", z.digits}, {"approximate", true}};
  }
  if (auto pp = mhs::as_prime_power(index.bound())) {
    out["scaled"] = {{"p", pp->prime}, {"alpha", pp->exponent},
                     {"value", mhs::cyc_to_json(mhs::mhs_scaled(index, pp->prime, pp->exponent))}};
  }
  print(out);
  return kExitOk;
}

int run_certify(const std::string& text, std::uint64_t prime_cap) {
  const auto index = mhs::parse_index(text);
  const auto assessment = mhs::assess(index, prime_cap);
  nlohmann::json certs = nlohmann::json::array();
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& c : assessment.certificates()) certs.push_back(mhs::certificate_to_json(c));
  for (const auto& r : assessment.reports()) reports.push_back(mhs::report_to_json(r));
  nlohmann::json out = {{"index", mhs::render_index(index)},
                        {"value", mhs::cyc_to_json(assessment.value())},
                        {"verdict", mhs::to_string(assessment.verdict())},
                        {"certificates", certs},
                        {"verification", reports}};
  if (auto pp = mhs::as_prime_power(index.bound())) {
    try {
      out["adjoint_statement"] =
          mhs::statement_to_json(mhs::implied_adjoint_statement(index, pp->prime, pp->exponent, assessment));
    } catch (const mhs::AdjointRefusal& e) {
      out["adjoint_statement"] = nullptr;
      out["adjoint_refusal"] = e.what();
    }
  } else {
    out["adjoint_statement"] = nullptr;
    out["adjoint_refusal"] = "m = " + std::to_string(index.bound()) + " is not a prime power";
  }
  print(out);
  if (assessment.soundness_violation()) {
    std::cerr << "mhs: SOUNDNESS FAILURE: a certificate attached to a value that fails verification\n";
    return kExitSoundness;
  }
  return kExitOk;
}

int run_distribution(const std::string& text, unsigned M, std::uint64_t prime_cap) {
  const auto index = mhs::parse_index(text);
  auto out = mhs::report_to_json(mhs::distribution_check(index, M, prime_cap));
  out["index"] = mhs::render_index(index);
  print(out);
  return kExitOk;
}

int run_density(std::uint64_t prime, unsigned depth, unsigned levels) {
  print(mhs::report_to_json(mhs::window_density(prime, depth, levels)));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact cyclotomic multiple harmonic sums and non-vanishing certificates", "mhs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mhs::kToolVersion));

  std::string index_text;
  unsigned approx_digits = 0;
  auto* eval = app.add_subcommand("eval", "Exact value of one harmonic sum");
  eval->add_option("--index", index_text, "N=<int>;m=<int>;n=<int>,...;xi=<int>,...")->required();
  eval->add_option("--approx", approx_digits, "Also print a complex approximation with DIGITS digits (default 30)")
      ->expected(0, 1)
      ->default_str("30");

  std::uint64_t prime_cap = 100;
  auto* certify = app.add_subcommand("certify", "All non-vanishing certificates with verification");
  certify->add_option("--index", index_text, "Index in N=..;m=..;n=..;xi=.. form")->required();
  certify->add_option("--prime-cap", prime_cap, "Largest prime listed for the m = d+1 window family");

  mhs::ScanParams params;
  std::string out_path;
  std::string format = "json";
  std::string twist_mode = "auto";
  bool assert_conjecture = false;
  bool timing = false;
  auto* scan = app.add_subcommand("scan", "Scan prime powers p^alpha for vanishing harmonic sums");
  scan->add_option("--pmax", params.pmax, "Largest prime p");
  scan->add_option("--amax", params.amax, "Largest exponent alpha");
  scan->add_option("--mmax", params.mmax, "Skip prime powers above this bound");
  scan->add_option("--prime-powers", params.prime_powers, "Explicit prime powers (overrides --pmax/--amax)")
      ->delimiter(',');
  scan->add_option("--dmax", params.dmax, "Largest depth d")->required();
  scan->add_option("--nmax", params.nmax, "Largest weight n_i")->required();
  scan->add_option("--levels", params.levels, "Cyclotomic levels N")->delimiter(',')->required();
  scan->add_option("--seed", params.seed, "Seed for sampled twist tuples");
  scan->add_option("--twists", twist_mode, "auto | exhaustive | random")
      ->check(CLI::IsMember({"auto", "exhaustive", "random"}));
  scan->add_option("--sample-size", params.sample_size, "Exhaustive threshold and sample size for twists");
  scan->add_option("--prime-cap", params.prime_cap, "Largest prime listed for window families");
  scan->add_option("--max-records", params.max_records, "Truncate the scan after this many indices");
  scan->add_option("--threads", params.threads, "Worker threads (0 = all cores)");
  scan->add_option("--out", out_path, "Output file, or - for stdout")->required();
  scan->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  scan->add_flag("--assert-conjecture", assert_conjecture, "Exit 3 on any counterexample at N = 1");
  scan->add_flag("--timing", timing, "Include elapsed time in JSON output");

  unsigned M = 1;
  auto* distribution = app.add_subcommand("distribution", "Check the twist-averaging distribution relation");
  distribution->add_option("--index", index_text, "Index in N=..;m=..;n=..;xi=.. form")->required();
  distribution->add_option("--M", M, "Order of the averaging roots of unity")->required();
  distribution->add_option("--prime-cap", prime_cap, "Prime cap for certifying the smaller index");

  std::uint64_t density_prime = 2;
  unsigned density_depth = 1;
  unsigned density_levels = 1;
  auto* density = app.add_subcommand("density", "Exact share of [1, p^A] covered by p-adic windows");
  density->add_option("--prime", density_prime, "Prime p'")->required();
  density->add_option("--depth", density_depth, "Depth d < p'")->required();
  density->add_option("--levels-exp", density_levels, "Exponent A")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*eval) return run_eval(index_text, approx_digits);
    if (*certify) return run_certify(index_text, prime_cap);
    if (*distribution) return run_distribution(index_text, M, prime_cap);
    if (*density) return run_density(density_prime, density_depth, density_levels);
    if (*scan) {
      params.twist_mode = twist_mode == "exhaustive" ? mhs::TwistMode::Exhaustive
                          : twist_mode == "random"   ? mhs::TwistMode::Random
                                                     : mhs::TwistMode::Auto;
      const auto report = mhs::scan_conjecture(params);
      mhs::emit_report(report, format == "csv" ? mhs::ReportFormat::Csv : mhs::ReportFormat::Json, out_path, timing);
      const auto& s = report.summary;
      std::cerr << "mhs scan: " << s.records << " indices, " << s.certified_nonzero << " certified nonzero, "
                << s.uncertified_nonzero << " nonzero uncertified, " << s.zero << " zero, " << s.counterexamples
                << " counterexample candidates" << (report.truncated ? " (TRUNCATED: " + report.truncation_reason + ")" : "")
                << '\n';
      for (const auto* r : report.counterexamples()) {
        std::cerr << "  counterexample candidate: " << mhs::render_index(r->index) << '\n';
      }
      if (s.soundness_violations > 0) {
        std::cerr << "mhs: SOUNDNESS FAILURE in " << s.soundness_violations << " records\n";
        return kExitSoundness;
      }
      if (assert_conjecture) {
        for (const auto* r : report.counterexamples()) {
          if (r->index.level() == 1) return kExitConjecture;
        }
      }
      return kExitOk;
    }
  } catch (const mhs::ReportIOError& e) {
    std::cerr << "mhs: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "mhs: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "mhs: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
