#pragma once

// Empirical scan of h_{p^alpha}((n_i)_d; (xi_i)_{d+1}) != 0 for p^alpha > d, with certificates,
// verification, and the implied statements about adjoint p-adic cyclotomic multiple zeta values.
//
// Output bytes depend only on the parameters and the seed: records are sorted by
// (N, m, d, weights, twists) before emission and timing is opt-in.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "mhs/certifiers.hpp"
#include "mhs/harmonic.hpp"
#include "mhs/index_text.hpp"
#include "mhs/number_theory.hpp"
#include "json.hpp"

namespace mhs {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr unsigned kScanSchemaVersion = 1;

// ---------------------------------------------------------------------------------------------
// Adjoint statements

class AdjointRefusal : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct AdjointStatement {
  std::uint64_t prime = 0;
  unsigned alpha = 0;
  unsigned level = 1;
  std::vector<unsigned> weights;
  std::vector<unsigned> twists;  // all d+1 exponents of zeta_N used on the harmonic side
  std::string text;
};

/// The weighted sum (p^alpha)^{n_1+...+n_d} h_{p^alpha}(index) equals the sum over l of the
/// adjoint components; a verified nonzero sum therefore makes the adjoint value nonzero.
inline AdjointStatement implied_adjoint_statement(const MHSIndex& index, std::uint64_t p, unsigned alpha,
                                                  const Assessment& evidence) {
  if (!is_prime(p)) throw AdjointRefusal("adjoint statement refused: " + std::to_string(p) + " is not prime");
  if (alpha == 0) throw AdjointRefusal("adjoint statement refused: alpha must be positive");
  if (!detail::pow_at_most(p, alpha, index.bound()) || checked_pow(p, alpha) != index.bound()) {
    throw AdjointRefusal("adjoint statement refused: m = " + std::to_string(index.bound()) + " is not " +
                         std::to_string(p) + "^" + std::to_string(alpha));
  }
  if (!(evidence.index() == index)) throw AdjointRefusal("adjoint statement refused: evidence is for another index");
  if (evidence.is_zero()) {
    throw AdjointRefusal("adjoint statement refused: h_" + std::to_string(index.bound()) + " is zero");
  }

  AdjointStatement s{p, alpha, index.level(), index.weights(), index.twist_exponents(), {}};
  std::string weights, adj_twists, all_twists;
  for (std::size_t i = 0; i < index.depth(); ++i) {
    weights += (i ? "," : "") + std::to_string(index.weights()[i]);
    adj_twists += (i ? "," : "") + std::string("z") + std::to_string(index.level()) + "^" +
                  std::to_string(index.twists()[i].exponent());
  }
  for (std::size_t i = 0; i < index.twists().size(); ++i) {
    all_twists += (i ? "," : "") + std::to_string(index.twists()[i].exponent());
  }
  const std::string tag = "zeta^Ad_{p=" + std::to_string(p) + ",alpha=" + std::to_string(alpha) + "}((" +
                          weights + ");(" + adj_twists + ")";
  s.text = "sum_l " + tag + ";l) != 0, hence " + tag + ") != 0 and some l-component is nonzero " +
           "[from h_" + std::to_string(index.bound()) + " != 0 at N=" + std::to_string(index.level()) +
           ", twist exponents (" + all_twists + ")]";
  return s;
}

inline nlohmann::json statement_to_json(const AdjointStatement& s) {
  return {{"p", s.prime}, {"alpha", s.alpha}, {"N", s.level}, {"n", s.weights}, {"xi", s.twists}, {"text", s.text}};
}

// ---------------------------------------------------------------------------------------------
// Parameters and records

enum class TwistMode { Auto, Exhaustive, Random };

struct ScanParams {
  std::vector<std::uint64_t> prime_powers;  // explicit list; when empty, derived from pmax/amax
  std::uint64_t pmax = 0;
  unsigned amax = 0;
  std::uint64_t mmax = 0;                   // optional cap on p^alpha, 0 = none
  unsigned dmax = 1;
  unsigned nmax = 1;
  std::vector<unsigned> levels{1};
  TwistMode twist_mode = TwistMode::Auto;
  std::uint64_t seed = 0;
  std::uint64_t sample_size = 10000;        // Auto: exhaustive up to this many tuples
  std::uint64_t prime_cap = 50;
  std::uint64_t max_records = 2'000'000;
  unsigned threads = 0;                     // 0 = hardware concurrency

  /// Sorted prime powers to scan; validates the caps.
  std::vector<PrimePower> resolved_prime_powers() const {
    if (dmax == 0 || nmax == 0) throw std::invalid_argument("scan: caps must be at least 1");
    if (levels.empty()) throw std::invalid_argument("scan: at least one level is required");
    for (auto n : levels) checked_level(n);
    if (sample_size == 0 || max_records == 0) throw std::invalid_argument("scan: caps must be at least 1");
    std::vector<PrimePower> out;
    if (!prime_powers.empty()) {
      for (auto q : prime_powers) {
        auto pp = as_prime_power(q);
        if (!pp) throw std::invalid_argument("scan: " + std::to_string(q) + " is not a prime power");
        out.push_back(*pp);
      }
    } else {
      if (pmax < 2 || amax == 0) throw std::invalid_argument("scan: need --pmax >= 2 and --amax >= 1");
      for (std::uint64_t p = 2; p <= pmax; ++p) {
        if (!is_prime(p)) continue;
        for (unsigned a = 1; a <= amax && detail::pow_at_most(p, a, UINT64_MAX / 2); ++a) {
          const std::uint64_t q = checked_pow(p, a);
          if (mmax != 0 && q > mmax) break;
          out.push_back({p, a});
        }
      }
    }
    auto value = [](const PrimePower& pp) { return checked_pow(pp.prime, pp.exponent); };
    std::sort(out.begin(), out.end(), [&](const auto& x, const auto& y) { return value(x) < value(y); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

struct ScanRecord {
  MHSIndex index;
  std::uint64_t prime = 0;
  unsigned alpha = 0;
  bool is_zero = false;
  Verdict verdict = Verdict::EvaluatedZero;
  std::vector<Certificate> certificates;
  bool verified = true;
  bool valuation_checked = false;
  bool counterexample = false;        // exact zero with m = p^alpha > d
  bool soundness_violation = false;   // certificate on a zero, wrong valuation, or nonpositive value at N = 1
  bool implies_adjoint_nonzero = false;

  auto key() const {
    return std::make_tuple(index.level(), index.bound(), index.depth(), index.weights(), index.twist_exponents());
  }
};

struct ScanSummary {
  std::uint64_t records = 0;
  std::uint64_t zero = 0;
  std::uint64_t certified_nonzero = 0;
  std::uint64_t uncertified_nonzero = 0;
  std::uint64_t counterexamples = 0;
  std::uint64_t soundness_violations = 0;
  std::uint64_t adjoint_statements = 0;
  std::map<std::string, std::uint64_t> certificates_by_kind;
};

struct ScanReport {
  ScanParams params;
  std::vector<ScanRecord> records;
  ScanSummary summary;
  bool truncated = false;
  std::string truncation_reason;
  double elapsed_seconds = 0.0;

  std::vector<const ScanRecord*> counterexamples() const {
    std::vector<const ScanRecord*> out;
    for (const auto& r : records) {
      if (r.counterexample) out.push_back(&r);
    }
    return out;
  }
};

/// Scores one index: exact value, certificates, verification and N = 1 positivity.
inline ScanRecord scan_one(const MHSIndex& index, const PrimePower& pp, std::uint64_t prime_cap) {
  const Assessment a = assess(index, prime_cap);
  ScanRecord r{.index = index, .prime = pp.prime, .alpha = pp.exponent};
  r.is_zero = a.is_zero();
  r.verdict = a.verdict();
  r.certificates = a.certificates();
  r.verified = a.all_verified();
  r.valuation_checked = a.valuation_checked();
  r.soundness_violation = a.soundness_violation();
  const bool nonempty = index.bound() > index.depth();
  if (index.level() == 1 && nonempty && !(a.value()[0] > 0)) r.soundness_violation = true;
  r.counterexample = r.is_zero && nonempty;
  r.implies_adjoint_nonzero = !r.is_zero;
  return r;
}

namespace detail {

struct ScanTask {
  MHSIndex index;
  PrimePower pp;
};

inline void for_each_weight_vector(unsigned d, unsigned nmax, const std::function<void(const std::vector<unsigned>&)>& f) {
  std::vector<unsigned> w(d, 1);
  for (;;) {
    f(w);
    std::size_t i = d;
    while (i > 0 && w[i - 1] == nmax) w[--i] = 1;
    if (i == 0) return;
    ++w[i - 1];
  }
}

inline std::uint64_t group_seed(std::uint64_t seed, unsigned level, std::uint64_t m, const std::vector<unsigned>& w) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32U), level,
                    static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(m >> 32U),
                    static_cast<std::uint32_t>(w.size())};
  std::vector<std::uint32_t> out(2);
  seq.generate(out.begin(), out.end());
  std::uint64_t s = (static_cast<std::uint64_t>(out[0]) << 32U) | out[1];
  for (auto x : w) s = s * 1000003ULL + x;
  return s;
}

}  // namespace detail

inline ScanReport scan_conjecture(const ScanParams& params) {
  const auto start = std::chrono::steady_clock::now();
  ScanReport report;
  report.params = params;
  const auto prime_powers = params.resolved_prime_powers();

  std::vector<detail::ScanTask> tasks;
  auto push = [&](detail::ScanTask t) {
    if (tasks.size() >= params.max_records) {
      if (!report.truncated) {
        report.truncated = true;
        report.truncation_reason = "max_records=" + std::to_string(params.max_records) + " reached";
      }
      return false;
    }
    tasks.push_back(std::move(t));
    return true;
  };

  bool stop = false;
  for (const auto& pp : prime_powers) {
    const std::uint64_t m = checked_pow(pp.prime, pp.exponent);
    // Depths d < m only: for m <= d the sum is empty and outside the conjecture.
    const unsigned dtop = static_cast<unsigned>(std::min<std::uint64_t>(params.dmax, m - 1));
    for (unsigned d = 1; d <= dtop && !stop; ++d) {
      detail::for_each_weight_vector(d, params.nmax, [&](const std::vector<unsigned>& weights) {
        if (stop) return;
        for (auto level : params.levels) {
          if (stop) return;
          const std::size_t slots = d + 1;
          const bool fits = detail::pow_at_most(level, static_cast<unsigned>(slots), params.sample_size);
          const bool exhaustive = params.twist_mode == TwistMode::Exhaustive ||
                                  (params.twist_mode == TwistMode::Auto && fits);
          std::vector<std::vector<long long>> tuples;
          if (exhaustive) {
            std::vector<long long> t(slots, 0);
            for (;;) {
              tuples.push_back(t);
              if (tuples.size() > params.max_records) break;
              std::size_t i = slots;
              while (i > 0 && t[i - 1] == static_cast<long long>(level) - 1) t[--i] = 0;
              if (i == 0) break;
              ++t[i - 1];
            }
          } else {
            std::mt19937_64 rng(detail::group_seed(params.seed, level, m, weights));
            for (std::uint64_t s = 0; s < params.sample_size; ++s) {
              std::vector<long long> t(slots);
              for (auto& e : t) e = static_cast<long long>(rng() % level);
              tuples.push_back(std::move(t));
            }
            std::sort(tuples.begin(), tuples.end());
            tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
          }
          for (const auto& t : tuples) {
            if (!push({MHSIndex(level, m, weights, t), pp})) {
              stop = true;
              return;
            }
          }
        }
      });
    }
    if (stop) break;
  }

  // Stateless workers over a shared task list; results land in their task slot.
  std::vector<std::optional<ScanRecord>> results(tasks.size());
  unsigned workers = params.threads ? params.threads : std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(tasks.size(), 1)));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](unsigned id) {
    try {
      for (std::size_t i = next++; i < tasks.size(); i = next++) {
        results[i] = scan_one(tasks[i].index, tasks[i].pp, params.prime_cap);
      }
    } catch (...) {
      errors[id] = std::current_exception();
      next = tasks.size();
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned id = 0; id < workers; ++id) pool.emplace_back(work, id);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  report.records.reserve(results.size());
  for (auto& r : results) report.records.push_back(std::move(*r));
  std::sort(report.records.begin(), report.records.end(),
            [](const ScanRecord& a, const ScanRecord& b) { return a.key() < b.key(); });

  auto& s = report.summary;
  for (const auto& r : report.records) {
    ++s.records;
    if (r.is_zero) ++s.zero;
    if (r.verdict == Verdict::CertifiedNonzero) ++s.certified_nonzero;
    if (r.verdict == Verdict::EvaluatedNonzeroUncertified) ++s.uncertified_nonzero;
    if (r.counterexample) ++s.counterexamples;
    if (r.soundness_violation) ++s.soundness_violations;
    if (r.implies_adjoint_nonzero) ++s.adjoint_statements;
    for (const auto& c : r.certificates) ++s.certificates_by_kind[kind_name(c)];
  }
  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// ---------------------------------------------------------------------------------------------
// Emission

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

template <typename T>
std::string join_numbers(const std::vector<T>& xs, const std::string& sep) {
  std::vector<std::string> parts;
  for (const auto& x : xs) parts.push_back(std::to_string(x));
  return join(parts, sep);
}

inline std::string to_string(TwistMode mode) {
  switch (mode) {
    case TwistMode::Exhaustive: return "exhaustive";
    case TwistMode::Random: return "random";
    default: return "auto";
  }
}

inline nlohmann::json params_to_json(const ScanParams& p) {
  nlohmann::json pp = nlohmann::json::array();
  for (const auto& x : p.resolved_prime_powers()) pp.push_back(checked_pow(x.prime, x.exponent));
  return {{"prime_powers", pp}, {"dmax", p.dmax},           {"nmax", p.nmax},
          {"levels", p.levels}, {"twist_mode", to_string(p.twist_mode)},
          {"seed", p.seed},     {"sample_size", p.sample_size}, {"prime_cap", p.prime_cap},
          {"max_records", p.max_records}};
}

inline nlohmann::json record_to_json(const ScanRecord& r) {
  nlohmann::json certs = nlohmann::json::array();
  for (const auto& c : r.certificates) certs.push_back(certificate_to_json(c));
  return {{"index", render_index(r.index)},
          {"N", r.index.level()},
          {"m", r.index.bound()},
          {"d", r.index.depth()},
          {"n", r.index.weights()},
          {"xi", r.index.twist_exponents()},
          {"p", r.prime},
          {"alpha", r.alpha},
          {"is_zero", r.is_zero},
          {"verdict", to_string(r.verdict)},
          {"certificates", certs},
          {"verified", r.verified},
          {"valuation_checked", r.valuation_checked},
          {"counterexample", r.counterexample},
          {"soundness_violation", r.soundness_violation},
          {"implies_adjoint_nonzero", r.implies_adjoint_nonzero}};
}

inline nlohmann::json scan_report_to_json(const ScanReport& report, bool include_timing = false) {
  const auto& s = report.summary;
  nlohmann::json records = nlohmann::json::array();
  nlohmann::json counterexamples = nlohmann::json::array();
  for (const auto& r : report.records) {
    records.push_back(record_to_json(r));
    if (r.counterexample) counterexamples.push_back(render_index(r.index));
  }
  nlohmann::json j = {
      {"schema_version", kScanSchemaVersion},
      {"tool", "mhs"},
      {"version", kToolVersion},
      {"params", params_to_json(report.params)},
      {"truncated", report.truncated},
      {"truncation_reason", report.truncation_reason},
      {"summary",
       {{"records", s.records},
        {"zero", s.zero},
        {"certified_nonzero", s.certified_nonzero},
        {"uncertified_nonzero", s.uncertified_nonzero},
        {"counterexamples", s.counterexamples},
        {"soundness_violations", s.soundness_violations},
        {"adjoint_statements", s.adjoint_statements},
        {"certificates_by_kind", s.certificates_by_kind}}},
      {"counterexamples", counterexamples},
      {"records", records}};
  if (include_timing) j["elapsed_seconds"] = report.elapsed_seconds;
  return j;
}

inline std::string scan_report_to_csv(const ScanReport& report) {
  std::ostringstream out;
  out << "N,m,d,n_list,xi_list,is_zero,cert_kinds,verified,valuation_checked\n";
  for (const auto& r : report.records) {
    std::vector<std::string> kinds;
    for (const auto& c : r.certificates) kinds.push_back(kind_name(c));
    out << r.index.level() << ',' << r.index.bound() << ',' << r.index.depth() << ','
        << join_numbers(r.index.weights(), "|") << ',' << join_numbers(r.index.twist_exponents(), "|") << ','
        << (r.is_zero ? "true" : "false") << ',' << join(kinds, "|") << ','
        << (r.verified ? "true" : "false") << ',' << (r.valuation_checked ? "true" : "false") << '\n';
  }
  return out.str();
}

enum class ReportFormat { Json, Csv };

class ReportIOError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes the report to `destination`, or to stdout when destination is "-".
inline void emit_report(const ScanReport& report, ReportFormat format, const std::string& destination,
                        bool include_timing = false) {
  const std::string body = format == ReportFormat::Json
                               ? scan_report_to_json(report, include_timing).dump(2) + "\n"
                               : scan_report_to_csv(report);
  if (destination == "-") {
    std::cout << body;
    if (!std::cout) throw ReportIOError("failed writing report to stdout");
    return;
  }
  std::ofstream file(destination, std::ios::binary | std::ios::trunc);
  if (!file) throw ReportIOError("cannot open report destination: " + destination);
  file << body;
  file.close();
  if (!file) throw ReportIOError("failed writing report to " + destination);
}

/// Structural check of a JSON scan report against schema version 1 (docs/scan_report.schema.json).
inline std::vector<std::string> validate_scan_json(const nlohmann::json& j) {
  std::vector<std::string> problems;
  auto need = [&](const nlohmann::json& obj, const std::string& key, auto pred, const std::string& what) {
    if (!obj.is_object() || !obj.contains(key) || !pred(obj.at(key))) {
      problems.push_back("'" + key + "' missing or not " + what);
      return false;
    }
    return true;
  };
  auto is_uint = [](const nlohmann::json& v) { return v.is_number_unsigned(); };
  auto is_bool = [](const nlohmann::json& v) { return v.is_boolean(); };
  auto is_str = [](const nlohmann::json& v) { return v.is_string(); };
  auto is_arr = [](const nlohmann::json& v) { return v.is_array(); };
  auto is_obj = [](const nlohmann::json& v) { return v.is_object(); };

  if (!j.is_object()) return {"top level is not an object"};
  if (need(j, "schema_version", is_uint, "an unsigned integer") && j["schema_version"] != kScanSchemaVersion) {
    problems.push_back("unsupported schema_version");
  }
  need(j, "tool", is_str, "a string");
  need(j, "version", is_str, "a string");
  need(j, "params", is_obj, "an object");
  need(j, "truncated", is_bool, "a boolean");
  need(j, "truncation_reason", is_str, "a string");
  need(j, "counterexamples", is_arr, "an array");
  if (need(j, "summary", is_obj, "an object")) {
    for (const char* k : {"records", "zero", "certified_nonzero", "uncertified_nonzero", "counterexamples",
                          "soundness_violations", "adjoint_statements"}) {
      need(j["summary"], k, is_uint, "an unsigned integer");
    }
    need(j["summary"], "certificates_by_kind", is_obj, "an object");
  }
  if (need(j, "records", is_arr, "an array")) {
    static const std::vector<std::string> verdicts = {"certified nonzero", "evaluated nonzero, uncertified",
                                                      "evaluated zero"};
    for (const auto& r : j["records"]) {
      need(r, "index", is_str, "a string");
      for (const char* k : {"N", "m", "d", "p", "alpha"}) need(r, k, is_uint, "an unsigned integer");
      need(r, "n", is_arr, "an array");
      need(r, "xi", is_arr, "an array");
      for (const char* k : {"is_zero", "verified", "valuation_checked", "counterexample", "soundness_violation",
                            "implies_adjoint_nonzero"}) {
        need(r, k, is_bool, "a boolean");
      }
      if (need(r, "verdict", is_str, "a string") &&
          std::find(verdicts.begin(), verdicts.end(), r["verdict"].get<std::string>()) == verdicts.end()) {
        problems.push_back("unknown verdict " + r["verdict"].dump());
      }
      if (need(r, "certificates", is_arr, "an array")) {
        for (const auto& c : r["certificates"]) {
          if (need(c, "kind", is_str, "a string")) {
            const auto kind = c["kind"].get<std::string>();
            if (kind != "galois" && kind != "padic_window" && kind != "complex") {
              problems.push_back("unknown certificate kind " + kind);
            }
          }
        }
      }
      if (problems.size() > 20) return problems;
    }
  }
  return problems;
}

}  // namespace mhs
