// Acceptance gate: one PASS/FAIL line per criterion, exit 2 on any soundness violation.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "mhs/mhs.hpp"

#ifndef MHS_CLI_PATH
#error "MHS_CLI_PATH must point at the mhs executable"
#endif
#ifndef MHS_WORK_DIR
#define MHS_WORK_DIR "."
#endif

namespace {

using namespace mhs;

struct Gate {
  std::uint64_t soundness = 0;
  std::vector<std::string> soundness_examples;

  // Any verifiable certificate on a zero value, or a wrong valuation, is recorded here.
  void audit(const MHSIndex& idx, const CycNumber& value, std::uint64_t cap = 50) {
    if (idx.bound() <= idx.depth()) return;
    std::vector<Certificate> certs;
    if (auto g = certify_galois(idx)) certs.emplace_back(*g);
    for (auto& w : certify_padic_window(idx, cap)) certs.emplace_back(w);
    if (auto c = certify_complex(idx.bound(), static_cast<unsigned>(idx.depth()), idx.weights().back())) {
      certs.emplace_back(*c);
    }
    for (const auto& c : certs) {
      if (verify_certificate(c, idx, value).soundness_violation()) flag(idx, kind_name(c));
    }
  }
  void flag(const MHSIndex& idx, const std::string& what) {
    ++soundness;
    if (soundness_examples.size() < 5) soundness_examples.push_back(render_index(idx) + " [" + what + "]");
  }
};

Gate gate;

struct Outcome {
  bool ok = true;
  std::uint64_t checks = 0;
  std::string detail;
  void expect(bool cond, const std::string& msg) {
    ++checks;
    if (!cond && ok) {
      ok = false;
      detail = msg;
    }
  }
};

void for_each_weights(unsigned d, unsigned nmax, const std::function<void(const std::vector<unsigned>&)>& f) {
  std::vector<unsigned> w(d, 1);
  for (;;) {
    f(w);
    std::size_t i = d;
    while (i > 0 && w[i - 1] == nmax) w[--i] = 1;
    if (i == 0) return;
    ++w[i - 1];
  }
}

void for_each_twists(unsigned level, std::size_t slots, const std::function<void(const std::vector<long long>&)>& f) {
  std::vector<long long> t(slots, 0);
  for (;;) {
    f(t);
    std::size_t i = slots;
    while (i > 0 && t[i - 1] == static_cast<long long>(level) - 1) t[--i] = 0;
    if (i == 0) return;
    ++t[i - 1];
  }
}

std::vector<std::vector<long long>> criterion1_twists(unsigned level, unsigned d, std::mt19937_64& rng) {
  std::vector<std::vector<long long>> out;
  if (level <= 4) {
    for_each_twists(level, d + 1, [&](const auto& t) { out.push_back(t); });
  } else {
    std::set<std::vector<long long>> seen;
    const std::size_t total = static_cast<std::size_t>(std::pow(level, d + 1));
    while (seen.size() < std::min<std::size_t>(200, total)) {
      std::vector<long long> t(d + 1);
      for (auto& e : t) e = static_cast<long long>(rng() % level);
      seen.insert(t);
    }
    out.assign(seen.begin(), seen.end());
  }
  return out;
}

// Criteria 1 and 8 share the grid.
std::pair<Outcome, Outcome> criteria_1_and_8() {
  Outcome c1, c8;
  std::mt19937_64 rng(20241016);
  for (unsigned level : {1U, 2U, 3U, 4U, 6U, 7U}) {
    for (unsigned d = 1; d <= 3; ++d) {
      const auto tuples = criterion1_twists(level, d, rng);
      std::vector<std::vector<unsigned>> grid;
      for_each_weights(d, 3, [&](const auto& w) { grid.push_back(w); });
      for (std::size_t k = 0; k < tuples.size(); ++k) {
        // Exhaustive levels pair every tuple with every weight vector; sampled levels rotate through them.
        const std::size_t wfirst = level <= 4 ? 0 : k % grid.size();
        const std::size_t wlast = level <= 4 ? grid.size() : wfirst + 1;
        for (std::size_t wi = wfirst; wi < wlast; ++wi) {
          for (std::uint64_t m = 1; m <= 12; ++m) {
            const MHSIndex idx(level, m, grid[wi], tuples[k]);
            const auto fast = mhs_fast(idx);
            c1.expect(fast == mhs_naive(idx), "fast != naive at " + render_index(idx));
            if (m <= d) {
              c8.expect(fast.is_zero(), "nonzero empty sum at " + render_index(idx));
            } else if (level == 1) {
              c8.expect(fast[0] > 0, "non-positive value at " + render_index(idx));
            }
            gate.audit(idx, fast);
          }
        }
      }
    }
  }
  return {c1, c8};
}

Outcome criterion_2() {
  Outcome c;
  c.expect(padic_valuation_rational(mhs_fast(MHSIndex(1, 4, {1}, {0, 0}))[0], 2) == -1, "v_2(h_4((1))) != -1");
  c.expect(padic_valuation_rational(mhs_fast(MHSIndex(1, 4, {2}, {0, 0}))[0], 2) == -2, "v_2(h_4((2))) != -2");
  std::uint64_t windows = 0;
  for (unsigned d = 1; d <= 2; ++d) {
    for (std::uint64_t m = d + 1; m <= 16; ++m) {
      // Independent window enumeration: p' prime, p' > d, p'^a d < m <= p'^a (d+1).
      std::set<std::pair<std::uint64_t, unsigned>> expected;
      for (std::uint64_t p = d + 1; p <= 31; ++p) {
        if (!is_prime(p)) continue;
        std::uint64_t q = 1;
        for (unsigned a = 0; q * d < m; ++a, q *= p) {
          if (m <= q * (d + 1)) expected.insert({p, a});
        }
      }
      std::set<std::pair<std::uint64_t, unsigned>> found;
      for (const auto& w : certify_padic_window(m, d, 31)) {
        if (w.family) {
          for (auto p : w.family_primes) found.insert({p, 0});
        } else {
          found.insert({w.prime, w.exponent});
        }
      }
      c.expect(found == expected, "window set mismatch at m=" + std::to_string(m) + " d=" + std::to_string(d));
      for_each_weights(d, 3, [&](const std::vector<unsigned>& w) {
        const MHSIndex idx(1, m, w, std::vector<long long>(d + 1, 0));
        const auto value = mhs_fast(idx);
        gate.audit(idx, value);
        for (auto [p, a] : expected) {
          ++windows;
          const bool nonzero = !value.is_zero();
          c.expect(nonzero, "zero value in a window at " + render_index(idx));
          if (!nonzero) {
            gate.flag(idx, "padic_window");
            continue;
          }
          const auto v = padic_valuation_rational(value[0], p);
          const std::int64_t want = -static_cast<std::int64_t>(a) * idx.weight().value;
          c.expect(v == want, "v_" + std::to_string(p) + " = " + std::to_string(v) + " != " +
                                  std::to_string(want) + " at " + render_index(idx));
        }
      });
    }
  }
  c.expect(windows > 300, "too few windows exercised");
  c.detail = c.ok ? std::to_string(windows) + " (index, window) pairs" : c.detail;
  return c;
}

Outcome criterion_3() {
  Outcome c;
  std::uint64_t certified = 0;
  for (unsigned d = 1; d <= 2; ++d) {
    for (std::uint64_t m = 1; m <= 5; ++m) {
      for_each_weights(d, 3, [&](const std::vector<unsigned>& w) {
        for_each_twists(7, d + 1, [&](const std::vector<long long>& t) {
          const MHSIndex idx(7, m, w, t);
          const auto cert = certify_galois(idx);
          if (!cert) return;
          ++certified;
          const auto value = mhs_fast(idx);
          const bool nonzero = !value.is_zero();
          c.expect(nonzero, "Galois-certified index is zero: " + render_index(idx));
          if (!nonzero) gate.flag(idx, "galois");
          c.expect(verify_certificate(*cert, idx, value).passed(), "certificate fails verification");
        });
      });
    }
  }
  c.expect(certified > 100, "too few Galois certificates");
  if (c.ok) c.detail = std::to_string(certified) + " certified indices";
  return c;
}

Outcome criterion_4() {
  Outcome c;
  for (unsigned n = 1; n <= 6; ++n) {
    const auto cert = certify_complex(4, 1, n);
    c.expect(cert.has_value() == (n >= 2), "grant/refuse mismatch at n_d=" + std::to_string(n));
    if (!cert) continue;
    for (unsigned level = 1; level <= 4; ++level) {
      for_each_twists(level, 2, [&](const std::vector<long long>& t) {
        const MHSIndex idx(level, 4, {n}, t);
        const auto value = mhs_fast(idx);
        const bool nonzero = !value.is_zero();
        c.expect(nonzero, "complex-certified index is zero: " + render_index(idx));
        if (!nonzero) gate.flag(idx, "complex");
        c.expect(verify_certificate(*cert, idx, value).passed(), "certificate fails at " + render_index(idx));
      });
    }
  }
  return c;
}

Outcome criterion_5() {
  Outcome c;
  const auto anchor = distribution_check(MHSIndex(1, 4, {1}, {0, 0}), 2);
  c.expect(anchor.left == CycNumber::from_rational(2, 2), "L != 2 at the anchor");
  c.expect(anchor.right_times_m == CycNumber::from_rational(2, 2), "M h_2((1)) != 2");
  c.expect(anchor.residual_times_m.is_zero(), "residual against M h_2 nonzero at the anchor");
  c.expect(!anchor.residual_plain.is_zero(), "form without M not reported as mismatching");
  c.expect(anchor.matched_side() == "times_m", "anchor matched side is " + anchor.matched_side());
  std::uint64_t cases = 0;
  for (unsigned M = 1; M <= 3; ++M) {
    for (unsigned level = 1; level <= 3; ++level) {
      for (unsigned d = 1; d <= 2; ++d) {
        for_each_weights(d, 2, [&](const std::vector<unsigned>& w) {
          for_each_twists(level, d + 1, [&](const std::vector<long long>& t) {
            for (std::uint64_t m = 1; m <= 9; ++m) {
              const MHSIndex idx(level, m, w, t);
              const auto r = distribution_check(idx, M);
              ++cases;
              c.expect(r.residual_times_m.is_zero(), "residual nonzero at M=" + std::to_string(M) + " " +
                                                           render_index(idx));
              if (m % M != 0) c.expect(r.left.is_zero(), "L nonzero with M not dividing m at " + render_index(idx));
              if (r.smaller_certificate) {
                const auto smaller = idx.with_bound(m / M).with_twists_powered(M);
                const auto v = mhs_fast(smaller);
                if (verify_certificate(*r.smaller_certificate, smaller, v).soundness_violation()) {
                  gate.flag(smaller, kind_name(*r.smaller_certificate));
                }
              }
            }
          });
        });
      }
    }
  }
  if (c.ok) c.detail = std::to_string(cases) + " cases, form without M mismatches at M=2,m=4";
  return c;
}

Outcome criterion_6() {
  Outcome c;
  std::uint64_t cases = 0;
  for (unsigned level : {3U, 4U, 5U, 7U}) {
    for (unsigned a = 1; a < level; ++a) {
      if (std::gcd(a, level) != 1) continue;
      for (unsigned d = 1; d <= 2; ++d) {
        for_each_weights(d, 2, [&](const std::vector<unsigned>& w) {
          for_each_twists(level, d + 1, [&](const std::vector<long long>& t) {
            for (std::uint64_t m = 1; m <= 8; ++m) {
              const MHSIndex idx(level, m, w, t);
              ++cases;
              c.expect(galois_conjugation_check(idx, a).equal,
                       "sigma_" + std::to_string(a) + " mismatch at " + render_index(idx));
            }
          });
        });
      }
    }
  }
  if (c.ok) c.detail = std::to_string(cases) + " cases";
  return c;
}

Outcome criterion_7() {
  Outcome c;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL}) {
    for (unsigned d = 1; d < p; ++d) {
      Rational previous_gap(-1);
      for (unsigned A = 1; A <= 6; ++A) {
        const auto r = window_density(p, d, A);
        const std::uint64_t pa = checked_pow(p, A);
        c.expect(r.count == (pa - 1) / (p - 1), "count mismatch p=" + std::to_string(p) + " d=" +
                                                     std::to_string(d) + " A=" + std::to_string(A));
        c.expect(r.limit == Rational(1, static_cast<unsigned long>(p - 1)), "limit mismatch");
        c.expect(r.gap == r.limit - r.fraction, "gap mismatch");
        if (A > 1) c.expect(r.gap < previous_gap, "gap does not decrease");
        previous_gap = r.gap;
      }
    }
  }
  c.expect(window_density(2, 1, 3).fraction == Rational(7, 8), "(2,1,3) fraction != 7/8");
  return c;
}

std::string slurp(const std::filesystem::path& f) {
  std::ifstream in(f, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome criterion_9() {
  Outcome c;
  const std::filesystem::path dir = std::filesystem::path(MHS_WORK_DIR) / "acceptance_scan";
  std::filesystem::create_directories(dir);
  const std::string base = std::string("\"") + MHS_CLI_PATH +
                           "\" scan --prime-powers 2,3,4,5,7,8,9 --dmax 8 --nmax 2 --levels 1,2,3,4"
                           " --twists auto --sample-size 16 --seed 7";
  int codes[4];
  int slot = 0;
  for (const char* run_name : {"a", "b"}) {
    for (const char* fmt : {"json", "csv"}) {
      const auto out = dir / (std::string(run_name) + "." + fmt);
      codes[slot++] = run(base + " --format " + fmt + " --out \"" + out.string() + "\" 2>/dev/null");
    }
  }
  for (int code : codes) {
    if (code == 2) ++gate.soundness;
    c.expect(code == 0, "mhs scan exited with " + std::to_string(code));
  }
  if (!c.ok) return c;

  const auto ja = slurp(dir / "a.json"), jb = slurp(dir / "b.json");
  const auto ca = slurp(dir / "a.csv"), cb = slurp(dir / "b.csv");
  c.expect(ja == jb, "JSON output differs across runs");
  c.expect(ca == cb, "CSV output differs across runs");

  const auto j = nlohmann::json::parse(ja);
  const auto problems = validate_scan_json(j);
  c.expect(problems.empty(), problems.empty() ? "" : "schema: " + problems.front());
  c.expect(!j["truncated"].get<bool>(), "scan was truncated");

  std::uint64_t level_one = 0, counterexamples = 0, violations = 0;
  std::set<std::tuple<std::uint64_t, std::uint64_t>> covered;  // (m, d)
  for (const auto& r : j["records"]) {
    covered.insert({r["m"].get<std::uint64_t>(), r["d"].get<std::uint64_t>()});
    if (r["soundness_violation"].get<bool>()) ++violations;
    if (r["N"] == 1) {
      ++level_one;
      if (r["is_zero"].get<bool>()) ++counterexamples;
    }
  }
  gate.soundness += violations;
  std::size_t expected_pairs = 0;
  for (std::uint64_t m : {2, 3, 4, 5, 7, 8, 9}) expected_pairs += m - 1;
  c.expect(covered.size() == expected_pairs, "some (p^alpha, d) pair with d < p^alpha is missing");
  c.expect(counterexamples == 0, std::to_string(counterexamples) + " counterexample(s) at N = 1");
  c.expect(violations == 0 && j["summary"]["soundness_violations"] == 0, "soundness violation in scan");

  // CSV: header, one row per JSON record, nine fields each.
  std::istringstream lines(ca);
  std::string line;
  std::getline(lines, line);
  c.expect(line == "N,m,d,n_list,xi_list,is_zero,cert_kinds,verified,valuation_checked", "bad CSV header");
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    if (std::count(line.begin(), line.end(), ',') != 8) {
      c.expect(false, "bad CSV row: " + line);
      break;
    }
  }
  c.expect(rows == j["records"].size(), "CSV and JSON record counts differ");
  if (c.ok) {
    std::filesystem::remove_all(dir);
    c.detail = std::to_string(rows) + " records, " + std::to_string(level_one) + " at N=1, 0 counterexamples there, " +
               std::to_string(j["summary"]["zero"].get<std::uint64_t>()) + " zeros at N>1";
  }
  return c;
}

void report(int number, const std::string& title, const Outcome& o, double seconds) {
  std::ostringstream t;
  t.precision(1);
  t << std::fixed << seconds;
  std::cout << (o.ok ? "[PASS] " : "[FAIL] ") << "criterion " << number << ": " << title << " (" << o.checks
            << " checks, " << t.str() << "s)";
  if (!o.detail.empty()) std::cout << " - " << o.detail;
  std::cout << std::endl;
}

template <class F>
auto timed(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  auto result = f();
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
  return std::pair{result, dt.count()};
}

}  // namespace

int main() {
  bool all = true;
  auto [c18, t18] = timed(criteria_1_and_8);
  report(1, "fast evaluation equals naive evaluation", c18.first, t18);
  auto [c2, t2] = timed(criterion_2);
  report(2, "p'-adic windows: nonzero with exact valuation", c2, t2);
  auto [c3, t3] = timed(criterion_3);
  report(3, "Galois certificates at N=7 imply nonzero", c3, t3);
  auto [c4, t4] = timed(criterion_4);
  report(4, "complex dominance at d=1, m=4", c4, t4);
  auto [c5, t5] = timed(criterion_5);
  report(5, "distribution relation with factor M", c5, t5);
  auto [c6, t6] = timed(criterion_6);
  report(6, "Galois equivariance", c6, t6);
  auto [c7, t7] = timed(criterion_7);
  report(7, "window density", c7, t7);
  report(8, "emptiness and positivity", c18.second, 0.0);
  auto [c9, t9] = timed(criterion_9);
  report(9, "conjecture scan via the CLI", c9, t9);
  all = c18.first.ok && c2.ok && c3.ok && c4.ok && c5.ok && c6.ok && c7.ok && c18.second.ok && c9.ok;

  Outcome c10;
  c10.expect(gate.soundness == 0, std::to_string(gate.soundness) + " certificate(s) on zero or misvalued sums");
  for (const auto& e : gate.soundness_examples) c10.detail += " " + e;
  report(10, "soundness gate", c10, 0.0);

  if (gate.soundness != 0) return 2;
  return all ? 0 : 1;
}
