#pragma once

// Non-vanishing certificates for cyclotomic multiple harmonic sums h_m((n_i)_d; (xi_i)_{d+1}),
// valid for 0 < d < m:
//
//   galois        the ratios xi_{i+1}/xi_i are powers xi^{l_i} of one primitive root xi with
//                 (l_1 + ... + l_d) * m < phi(N); every monomial of the sum then lies in the
//                 basis {xi^l : l < phi(N)} with positive coefficients.
//   padic_window  p'^a d < m <= p'^a (d+1) for a prime p' > d; the tuple (p'^a, ..., d p'^a)
//                 is the unique term of minimal p'-adic valuation -a (n_1 + ... + n_d).
//   complex       |S| d^{n_d} < (d+1)^{n_d} with |S| = C(m-1, d) - 1; the term (1, ..., d)
//                 dominates the rest in absolute value.
//
// A missing certificate never means the sum vanishes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mhs/cyclotomic.hpp"
#include "mhs/harmonic.hpp"
#include "mhs/number_theory.hpp"
#include "json.hpp"

namespace mhs {

struct GaloisCertificate {
  unsigned level = 1;
  std::uint64_t bound = 0;
  unsigned unit = 1;                    // xi = zeta_N^unit, gcd(unit, N) = 1
  std::vector<std::uint64_t> exponents; // l_i with xi^{l_i} = xi_{i+1}/xi_i
  std::uint64_t budget = 0;             // (l_1 + ... + l_d) * m
  std::uint64_t phi = 1;

  friend bool operator==(const GaloisCertificate&, const GaloisCertificate&) = default;
};

struct PAdicWindowCertificate {
  std::uint64_t bound = 0;
  unsigned depth = 0;
  std::uint64_t prime = 0;
  unsigned exponent = 0;
  std::optional<std::int64_t> claimed_valuation;  // -a * (n_1 + ... + n_d), once weights are known
  bool family = false;                            // a = 0: every prime p' > d qualifies
  std::vector<std::uint64_t> family_primes;       // enumeration d < p' <= prime_cap

  friend bool operator==(const PAdicWindowCertificate&, const PAdicWindowCertificate&) = default;
};

struct ComplexDominanceCertificate {
  std::uint64_t bound = 0;
  unsigned depth = 0;
  unsigned last_weight = 0;
  Integer dominated_count;  // |S_{m,d}| = C(m-1, d) - 1
  Integer lhs;              // |S| * d^{n_d}
  Integer rhs;              // (d+1)^{n_d}

  friend bool operator==(const ComplexDominanceCertificate& a, const ComplexDominanceCertificate& b) {
    return a.bound == b.bound && a.depth == b.depth && a.last_weight == b.last_weight &&
           a.dominated_count == b.dominated_count && a.lhs == b.lhs && a.rhs == b.rhs;
  }
};

using Certificate = std::variant<GaloisCertificate, PAdicWindowCertificate, ComplexDominanceCertificate>;

inline std::string kind_name(const Certificate& cert) {
  switch (cert.index()) {
    case 0: return "galois";
    case 1: return "padic_window";
    default: return "complex";
  }
}

/// Raised when a certificate is checked against an index it was not issued for.
class CertificateMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------------------------
// Galois criterion

namespace detail {

inline unsigned inverse_mod(unsigned u, unsigned n) {
  long long t = 0, new_t = 1, r = n, new_r = u % n;
  while (new_r != 0) {
    const long long q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  return reduce_exponent(t, n);
}

// Largest monomial exponent sum_i l_i m_i over admissible tuples: m_i = m - d + i - 1.
inline unsigned __int128 max_basis_exponent(const std::vector<std::uint64_t>& l, std::uint64_t m) {
  const std::size_t d = l.size();
  unsigned __int128 total = 0;
  for (std::size_t i = 0; i < d; ++i) {
    total += static_cast<unsigned __int128>(l[i]) * (m - d + i);
  }
  return total;
}

}  // namespace detail

/// Exhaustive search over primitive roots xi = zeta_N^u. Among all units u that succeed, the
/// one with the smallest budget is returned (ties broken by smallest u).
inline std::optional<GaloisCertificate> certify_galois(const MHSIndex& index) {
  const unsigned n = index.level();
  const std::size_t d = index.depth();
  const std::uint64_t m = index.bound();
  if (m <= d) return std::nullopt;
  const std::uint64_t phi = totient(n);
  std::optional<GaloisCertificate> best;
  for (unsigned u = (n == 1 ? 0U : 1U); u < std::max(n, 1U); ++u) {
    if (std::gcd(u, n) != 1) continue;
    const unsigned inv = n == 1 ? 0U : detail::inverse_mod(u, n);
    std::vector<std::uint64_t> l(d);
    unsigned __int128 sum = 0;
    for (std::size_t i = 0; i < d; ++i) {
      l[i] = static_cast<std::uint64_t>(index.ratio_exponent(i)) * inv % n;
      sum += l[i];
    }
    const unsigned __int128 budget = sum * m;
    if (budget >= phi) continue;
    if (!best || budget < best->budget) {
      best = GaloisCertificate{n, m, u, std::move(l), static_cast<std::uint64_t>(budget), phi};
    }
  }
  return best;
}

// ---------------------------------------------------------------------------------------------
// p'-adic window criterion

namespace detail {

// base^exp <= limit, without overflow.
inline bool pow_at_most(std::uint64_t base, unsigned exp, std::uint64_t limit) {
  unsigned __int128 r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    r *= base;
    if (r > limit) return false;
  }
  return true;
}

inline std::uint64_t iroot_floor(std::uint64_t x, unsigned k) {
  if (k == 1 || x < 2) return x;
  auto r = static_cast<std::uint64_t>(std::pow(static_cast<long double>(x), 1.0L / k));
  while (r > 0 && !pow_at_most(r, k, x)) --r;
  while (pow_at_most(r + 1, k, x)) ++r;
  return r;
}

inline bool in_window(std::uint64_t m, unsigned d, std::uint64_t prime, unsigned a) {
  if (!pow_at_most(prime, a, m)) return false;
  const unsigned __int128 q = checked_pow(prime, a);
  return q * d < m && m <= q * (d + 1);
}

}  // namespace detail

/// All windows (p', a) with p' > d prime, a >= 1 and p'^a d < m <= p'^a (d+1), ordered by a then
/// p'. When m = d + 1 a family certificate (a = 0) is appended listing the primes d < p' <= cap.
inline std::vector<PAdicWindowCertificate> certify_padic_window(std::uint64_t m, unsigned d,
                                                                std::uint64_t prime_cap) {
  if (m == 0 || d == 0) throw std::invalid_argument("certify_padic_window: m and d must be positive");
  if (prime_cap < static_cast<std::uint64_t>(d) + 2) {
    throw std::invalid_argument("certify_padic_window: prime_cap must be at least d + 2");
  }
  std::vector<PAdicWindowCertificate> out;
  if (m <= d) return out;
  // Window condition on q = p'^a:  ceil(m / (d+1)) <= q <= floor((m - 1) / d).
  const std::uint64_t q_lo = (m + d) / (d + 1);
  const std::uint64_t q_hi = (m - 1) / d;
  for (unsigned a = 1; detail::pow_at_most(2, a, q_hi); ++a) {
    // Smallest p with p^a >= q_lo.
    std::uint64_t p_lo = detail::iroot_floor(q_lo, a);
    if (detail::pow_at_most(p_lo, a, q_lo - 1)) ++p_lo;
    p_lo = std::max<std::uint64_t>(p_lo, static_cast<std::uint64_t>(d) + 1);
    const std::uint64_t p_hi = detail::iroot_floor(q_hi, a);
    for (std::uint64_t p = p_lo; p <= p_hi; ++p) {
      if (is_prime(p) && detail::in_window(m, d, p, a)) {
        out.push_back({m, d, p, a, std::nullopt, false, {}});
      }
    }
  }
  if (m == static_cast<std::uint64_t>(d) + 1) {
    PAdicWindowCertificate family{m, d, 0, 0, std::nullopt, true, {}};
    for (std::uint64_t p = static_cast<std::uint64_t>(d) + 1; p <= prime_cap; ++p) {
      if (is_prime(p)) family.family_primes.push_back(p);
    }
    family.prime = family.family_primes.empty() ? 0 : family.family_primes.front();
    out.push_back(std::move(family));
  }
  return out;
}

/// Same enumeration, with the claimed valuation filled in from the index weights.
inline std::vector<PAdicWindowCertificate> certify_padic_window(const MHSIndex& index,
                                                                std::uint64_t prime_cap) {
  auto certs = certify_padic_window(index.bound(), static_cast<unsigned>(index.depth()), prime_cap);
  for (auto& c : certs) {
    c.claimed_valuation = -static_cast<std::int64_t>(c.exponent) * static_cast<std::int64_t>(index.weight().value);
  }
  return certs;
}

// ---------------------------------------------------------------------------------------------
// Complex dominance criterion

/// Exact form of n_d > log(C(m-1, d) - 1) / log(1 + 1/d). Requires m > d.
inline std::optional<ComplexDominanceCertificate> certify_complex(std::uint64_t m, unsigned d,
                                                                  unsigned last_weight) {
  if (d == 0 || last_weight == 0) throw std::invalid_argument("certify_complex: d and n_d must be positive");
  if (m <= d) throw std::domain_error("certify_complex: m <= d, value is identically zero");
  ComplexDominanceCertificate c;
  c.bound = m;
  c.depth = d;
  c.last_weight = last_weight;
  c.dominated_count = binomial(m - 1, d) - 1;
  c.lhs = c.dominated_count * integer_pow(d, last_weight);
  c.rhs = integer_pow(static_cast<std::uint64_t>(d) + 1, last_weight);
  if (c.lhs < c.rhs) return c;
  return std::nullopt;
}

// ---------------------------------------------------------------------------------------------
// Verification

struct VerificationReport {
  std::string kind;
  bool side_conditions_ok = false;
  bool value_nonzero = false;
  bool valuation_checked = false;
  bool valuation_ok = true;
  std::vector<std::pair<std::uint64_t, std::int64_t>> measured_valuations;  // (p', v_p'(value))
  std::vector<std::string> failures;

  bool passed() const { return side_conditions_ok && value_nonzero && valuation_ok; }
  /// Valid certificate attached to a zero (or wrongly valued) sum: a bug, never a math result.
  bool soundness_violation() const { return side_conditions_ok && (!value_nonzero || !valuation_ok); }
};

namespace detail {

inline void require(bool ok, VerificationReport& report, std::string message) {
  if (!ok) {
    report.side_conditions_ok = false;
    report.failures.push_back(std::move(message));
  }
}

inline void check_structure(const GaloisCertificate& c, const MHSIndex& index) {
  if (c.level != index.level() || c.bound != index.bound() || c.exponents.size() != index.depth()) {
    throw CertificateMismatch("galois certificate does not match index (level, bound or depth)");
  }
}

inline void check_structure(const PAdicWindowCertificate& c, const MHSIndex& index) {
  if (c.bound != index.bound() || c.depth != index.depth()) {
    throw CertificateMismatch("padic_window certificate does not match index (bound or depth)");
  }
}

inline void check_structure(const ComplexDominanceCertificate& c, const MHSIndex& index) {
  if (c.bound != index.bound() || c.depth != index.depth() || c.last_weight != index.weights().back()) {
    throw CertificateMismatch("complex certificate does not match index (bound, depth or n_d)");
  }
}

inline void check_side_conditions(const GaloisCertificate& c, const MHSIndex& index,
                                  VerificationReport& r) {
  const unsigned n = index.level();
  const std::uint64_t m = index.bound();
  require(m > index.depth(), r, "galois: requires m > d");
  require(std::gcd(c.unit, n) == 1, r, "galois: unit is not coprime to N");
  require(c.phi == totient(n), r, "galois: recorded phi(N) is wrong");
  unsigned __int128 sum = 0;
  for (std::size_t i = 0; i < c.exponents.size(); ++i) {
    const auto lhs = static_cast<unsigned __int128>(c.unit) * c.exponents[i] % n;
    require(lhs == index.ratio_exponent(i), r,
            "galois: xi^l_" + std::to_string(i + 1) + " differs from xi_{i+1}/xi_i");
    sum += c.exponents[i];
  }
  require(sum * m == c.budget, r, "galois: budget is not (sum l_i) * m");
  require(c.budget < totient(n), r, "galois: budget is not below phi(N)");
  // Every monomial exponent sum_i l_i m_i must already lie in [0, phi(N) - 1].
  require(m <= index.depth() || detail::max_basis_exponent(c.exponents, m) < totient(n), r,
          "galois: monomial exponent escapes the basis range");
}

inline void check_side_conditions(const PAdicWindowCertificate& c, const MHSIndex& index,
                                  VerificationReport& r) {
  const unsigned d = static_cast<unsigned>(index.depth());
  const std::uint64_t m = index.bound();
  if (c.family) {
    require(c.exponent == 0, r, "padic_window: family certificate must have a = 0");
    require(m == static_cast<std::uint64_t>(d) + 1, r, "padic_window: family requires m = d + 1");
    require(!c.family_primes.empty(), r, "padic_window: family enumeration is empty");
    for (auto p : c.family_primes) {
      require(is_prime(p) && p > d, r, "padic_window: " + std::to_string(p) + " is not a prime > d");
    }
  } else {
    require(c.exponent >= 1, r, "padic_window: non-family certificate needs a >= 1");
    require(is_prime(c.prime), r, "padic_window: p' is not prime");
    require(c.prime > d, r, "padic_window: p' must exceed d");
    require(in_window(m, d, c.prime, c.exponent), r, "padic_window: m outside (p'^a d, p'^a (d+1)]");
  }
  if (c.claimed_valuation) {
    require(*c.claimed_valuation == -static_cast<std::int64_t>(c.exponent) *
                                        static_cast<std::int64_t>(index.weight().value),
            r, "padic_window: claimed valuation is not -a * sum(n_i)");
  }
}

inline void check_side_conditions(const ComplexDominanceCertificate& c, const MHSIndex& index,
                                  VerificationReport& r) {
  const std::uint64_t m = index.bound();
  const unsigned d = static_cast<unsigned>(index.depth());
  require(m > d, r, "complex: requires m > d");
  if (m <= d) return;
  require(c.dominated_count == binomial(m - 1, d) - 1, r, "complex: |S| is not C(m-1, d) - 1");
  require(c.lhs == c.dominated_count * integer_pow(d, c.last_weight), r, "complex: lhs is not |S| d^n_d");
  require(c.rhs == integer_pow(static_cast<std::uint64_t>(d) + 1, c.last_weight), r,
          "complex: rhs is not (d+1)^n_d");
  require(c.lhs < c.rhs, r, "complex: dominance inequality fails");
}

}  // namespace detail

/// Re-checks the certificate arithmetic, the exact non-vanishing of `value` and, for padic
/// windows at level 1, the exact p'-adic valuation -a * (n_1 + ... + n_d). `value` must be the
/// exact sum for `index`.
inline VerificationReport verify_certificate(const Certificate& cert, const MHSIndex& index,
                                             const CycNumber& value) {
  VerificationReport report;
  report.kind = kind_name(cert);
  report.side_conditions_ok = true;
  std::visit([&](const auto& c) {
    detail::check_structure(c, index);
    detail::check_side_conditions(c, index, report);
  }, cert);

  report.value_nonzero = !value.is_zero();
  if (!report.value_nonzero) report.failures.push_back("exact value is zero");

  if (const auto* window = std::get_if<PAdicWindowCertificate>(&cert);
      window && index.level() == 1 && report.value_nonzero) {
    report.valuation_checked = true;
    const auto expected = -static_cast<std::int64_t>(window->exponent) *
                          static_cast<std::int64_t>(index.weight().value);
    std::vector<std::uint64_t> primes =
        window->family ? window->family_primes : std::vector<std::uint64_t>{window->prime};
    for (auto p : primes) {
      if (!is_prime(p)) continue;
      const std::int64_t v = padic_valuation_rational(value[0], p);
      report.measured_valuations.emplace_back(p, v);
      if (v != expected) {
        report.valuation_ok = false;
        report.failures.push_back("v_" + std::to_string(p) + "(value) = " + std::to_string(v) +
                                  ", expected " + std::to_string(expected));
      }
    }
  }
  return report;
}

inline VerificationReport verify_certificate(const Certificate& cert, const MHSIndex& index) {
  return verify_certificate(cert, index, mhs_fast(index));
}

// ---------------------------------------------------------------------------------------------
// Combined assessment

enum class Verdict { CertifiedNonzero, EvaluatedNonzeroUncertified, EvaluatedZero };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::CertifiedNonzero: return "certified nonzero";
    case Verdict::EvaluatedNonzeroUncertified: return "evaluated nonzero, uncertified";
    default: return "evaluated zero";
  }
}

/// Exact value of one index with every applicable certificate and its verification.
/// Only `assess` builds these, so holding one is evidence that the evaluation happened.
class Assessment {
 public:
  const MHSIndex& index() const { return index_; }
  const CycNumber& value() const { return value_; }
  bool is_zero() const { return value_.is_zero(); }
  const std::vector<Certificate>& certificates() const { return certificates_; }
  const std::vector<VerificationReport>& reports() const { return reports_; }

  Verdict verdict() const {
    if (is_zero()) return Verdict::EvaluatedZero;
    const bool certified = std::any_of(reports_.begin(), reports_.end(),
                                       [](const VerificationReport& r) { return r.passed(); });
    return certified ? Verdict::CertifiedNonzero : Verdict::EvaluatedNonzeroUncertified;
  }

  bool all_verified() const {
    return std::all_of(reports_.begin(), reports_.end(), [](const VerificationReport& r) { return r.passed(); });
  }

  bool soundness_violation() const {
    return std::any_of(reports_.begin(), reports_.end(),
                       [](const VerificationReport& r) { return r.soundness_violation(); });
  }

  bool valuation_checked() const {
    return std::any_of(reports_.begin(), reports_.end(),
                       [](const VerificationReport& r) { return r.valuation_checked; });
  }

 private:
  friend Assessment assess(const MHSIndex& index, std::uint64_t prime_cap);
  Assessment(MHSIndex index, CycNumber value) : index_(std::move(index)), value_(std::move(value)) {}

  MHSIndex index_;
  CycNumber value_;
  std::vector<Certificate> certificates_;
  std::vector<VerificationReport> reports_;
};

/// Evaluates exactly, runs all three certifiers and verifies every certificate found.
inline Assessment assess(const MHSIndex& index, std::uint64_t prime_cap) {
  Assessment a(index, mhs_fast(index));
  const unsigned d = static_cast<unsigned>(index.depth());
  if (index.bound() > d) {
    if (auto g = certify_galois(index)) a.certificates_.emplace_back(std::move(*g));
    for (auto& w : certify_padic_window(index, std::max<std::uint64_t>(prime_cap, d + 2))) {
      a.certificates_.emplace_back(std::move(w));
    }
    if (auto c = certify_complex(index.bound(), d, index.weights().back())) {
      a.certificates_.emplace_back(std::move(*c));
    }
  }
  for (const auto& cert : a.certificates_) a.reports_.push_back(verify_certificate(cert, index, a.value_));
  return a;
}

// ---------------------------------------------------------------------------------------------
// JSON

inline void to_json(nlohmann::json& j, const GaloisCertificate& c) {
  j = {{"kind", "galois"}, {"level", c.level}, {"bound", c.bound}, {"unit", c.unit},
       {"exponents", c.exponents}, {"budget", c.budget}, {"phi", c.phi}};
}

inline void from_json(const nlohmann::json& j, GaloisCertificate& c) {
  j.at("level").get_to(c.level);
  j.at("bound").get_to(c.bound);
  j.at("unit").get_to(c.unit);
  j.at("exponents").get_to(c.exponents);
  j.at("budget").get_to(c.budget);
  j.at("phi").get_to(c.phi);
}

inline void to_json(nlohmann::json& j, const PAdicWindowCertificate& c) {
  j = {{"kind", "padic_window"}, {"bound", c.bound}, {"depth", c.depth}, {"prime", c.prime},
       {"exponent", c.exponent}, {"family", c.family}, {"family_primes", c.family_primes}};
  j["claimed_valuation"] = c.claimed_valuation ? nlohmann::json(*c.claimed_valuation) : nlohmann::json(nullptr);
}

inline void from_json(const nlohmann::json& j, PAdicWindowCertificate& c) {
  j.at("bound").get_to(c.bound);
  j.at("depth").get_to(c.depth);
  j.at("prime").get_to(c.prime);
  j.at("exponent").get_to(c.exponent);
  j.at("family").get_to(c.family);
  j.at("family_primes").get_to(c.family_primes);
  const auto& v = j.at("claimed_valuation");
  c.claimed_valuation = v.is_null() ? std::nullopt : std::optional<std::int64_t>(v.get<std::int64_t>());
}

inline void to_json(nlohmann::json& j, const ComplexDominanceCertificate& c) {
  j = {{"kind", "complex"}, {"bound", c.bound}, {"depth", c.depth}, {"last_weight", c.last_weight},
       {"dominated_count", c.dominated_count.get_str()}, {"lhs", c.lhs.get_str()}, {"rhs", c.rhs.get_str()}};
}

inline void from_json(const nlohmann::json& j, ComplexDominanceCertificate& c) {
  j.at("bound").get_to(c.bound);
  j.at("depth").get_to(c.depth);
  j.at("last_weight").get_to(c.last_weight);
  c.dominated_count = Integer(j.at("dominated_count").get<std::string>());
  c.lhs = Integer(j.at("lhs").get<std::string>());
  c.rhs = Integer(j.at("rhs").get<std::string>());
}

inline nlohmann::json certificate_to_json(const Certificate& cert) {
  return std::visit([](const auto& c) { return nlohmann::json(c); }, cert);
}

inline Certificate certificate_from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "galois") return j.get<GaloisCertificate>();
  if (kind == "padic_window") return j.get<PAdicWindowCertificate>();
  if (kind == "complex") return j.get<ComplexDominanceCertificate>();
  throw std::invalid_argument("unknown certificate kind: " + kind);
}

inline nlohmann::json report_to_json(const VerificationReport& r) {
  nlohmann::json vals = nlohmann::json::array();
  for (const auto& [p, v] : r.measured_valuations) vals.push_back({{"prime", p}, {"valuation", v}});
  return {{"kind", r.kind},
          {"passed", r.passed()},
          {"side_conditions_ok", r.side_conditions_ok},
          {"value_nonzero", r.value_nonzero},
          {"valuation_checked", r.valuation_checked},
          {"valuation_ok", r.valuation_ok},
          {"measured_valuations", vals},
          {"failures", r.failures}};
}

}  // namespace mhs
