#pragma once

// Structural relations between multiple harmonic sums: twist averaging over M-th roots of unity
// (distribution), transport of Galois conjugation to the twists, and the density of the
// p'-adic windows (p'^a d, p'^a (d+1)].

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mhs/certifiers.hpp"
#include "mhs/cyclotomic.hpp"
#include "mhs/harmonic.hpp"
#include "mhs/number_theory.hpp"
#include "json.hpp"

namespace mhs {

/// L = M^{sum(n_i - 1)} * sum over (rho_1, ..., rho_{d+1}), rho_i^M = 1, of h_m((n_i); (rho_i xi_i)),
/// compared against the plain right side h_{m/M}((n_i); (xi_i^M)) (0 when M does not divide m)
/// and against M times it. The brute-force sum matches the second form.
struct DistributionReport {
  unsigned M = 1;
  MHSIndex base;
  unsigned common_level = 1;
  bool divides = true;
  CycNumber left;
  CycNumber right_plain;
  CycNumber right_times_m;
  CycNumber residual_plain;
  CycNumber residual_times_m;
  /// Certificate for the bound-m/M sum, when one exists and verifies.
  std::optional<Certificate> smaller_certificate;

  /// "plain", "times_m", "both_zero" (both residuals vanish) or "neither".
  std::string matched_side() const {
    const bool plain = residual_plain.is_zero();
    const bool times_m = residual_times_m.is_zero();
    if (plain && times_m) return "both_zero";
    if (plain) return "plain";
    if (times_m) return "times_m";
    return "neither";
  }

  /// A certified nonzero right side, matched exactly by L, forces some twisted summand
  /// h_m((n_i); (rho_i xi_i)) to be nonzero.
  bool implies_some_summand_nonzero() const {
    return smaller_certificate.has_value() && residual_times_m.is_zero() && !left.is_zero();
  }
};

inline DistributionReport distribution_check(const MHSIndex& index, unsigned M,
                                             std::uint64_t prime_cap = 100) {
  if (M == 0) throw std::invalid_argument("distribution_check: M must be positive");
  const unsigned n = index.level();
  const unsigned level = std::lcm(n, M);
  const std::size_t slots = index.depth() + 1;

  DistributionReport r{.M = M, .base = index, .common_level = level};
  r.divides = index.bound() % M == 0;

  // Every rho tuple, as exponents of zeta_level in steps of level / M.
  const MHSIndex lifted = index.lifted(level);
  const unsigned step = level / M;
  std::vector<unsigned> rho(slots, 0);
  CycNumber total(level);
  for (;;) {
    std::vector<long long> exps;
    for (std::size_t i = 0; i < slots; ++i) {
      exps.push_back(static_cast<long long>(lifted.twists()[i].exponent()) + static_cast<long long>(rho[i]) * step);
    }
    total += mhs_fast(MHSIndex(level, index.bound(), index.weights(), exps));
    std::size_t i = 0;
    while (i < slots && ++rho[i] == M) rho[i++] = 0;
    if (i == slots) break;
  }
  std::uint64_t excess = 0;
  for (auto w : index.weights()) excess += w - 1;
  r.left = scale(Rational(integer_pow(M, excess)), total);

  r.right_plain = CycNumber(level);
  if (r.divides) {
    const MHSIndex smaller = index.with_twists_powered(M).with_bound(index.bound() / M);
    r.right_plain = level_lift(mhs_fast(smaller), level);
    const Assessment a = assess(smaller, prime_cap);
    for (std::size_t k = 0; k < a.certificates().size(); ++k) {
      if (a.reports()[k].passed()) {
        r.smaller_certificate = a.certificates()[k];
        break;
      }
    }
  }
  r.right_times_m = scale(Rational(M), r.right_plain);
  r.residual_plain = r.left - r.right_plain;
  r.residual_times_m = r.left - r.right_times_m;
  return r;
}

struct GaloisConjugationReport {
  long long a = 1;
  CycNumber conjugated_value;  // sigma_a(h_m(index))
  CycNumber twisted_value;     // h_m(index with xi_i -> xi_i^a)
  bool equal = false;
};

inline GaloisConjugationReport galois_conjugation_check(const MHSIndex& index, long long a) {
  const unsigned ar = reduce_exponent(a, index.level());
  if (std::gcd(ar, index.level()) != 1) {
    throw std::invalid_argument("galois_conjugation_check: " + std::to_string(a) +
                                " is not coprime to N = " + std::to_string(index.level()));
  }
  GaloisConjugationReport r;
  r.a = a;
  r.conjugated_value = galois_apply(a, mhs_fast(index));
  r.twisted_value = mhs_fast(index.with_twists_powered(a));
  r.equal = r.conjugated_value == r.twisted_value;
  return r;
}

/// Share of [1, p'^A] covered by the union of windows (p'^a d, p'^a (d+1)], a >= 0.
struct DensityReport {
  std::uint64_t prime = 2;
  unsigned depth = 1;
  unsigned levels = 1;
  std::uint64_t count = 0;
  std::uint64_t closed_form = 0;  // (p'^A - 1) / (p' - 1)
  Rational fraction;
  Rational limit;
  Rational gap;
  bool consistent = false;
};

inline DensityReport window_density(std::uint64_t prime, unsigned depth, unsigned levels) {
  if (!is_prime(prime)) throw std::invalid_argument("window_density: " + std::to_string(prime) + " is not prime");
  if (depth == 0 || levels == 0) throw std::invalid_argument("window_density: d and A must be positive");
  if (prime <= depth) throw std::invalid_argument("window_density: requires p' > d");
  DensityReport r{.prime = prime, .depth = depth, .levels = levels};
  const std::uint64_t top = checked_pow(prime, levels);

  // Direct membership test for each integer, scanning every window that can reach it.
  for (std::uint64_t v = 1; v <= top; ++v) {
    for (std::uint64_t q = 1; q * depth < v; q *= prime) {
      if (v <= q * (depth + 1)) {
        ++r.count;
        break;
      }
    }
  }
  r.closed_form = (top - 1) / (prime - 1);
  r.fraction = Rational(Integer(r.count), Integer(top));
  r.fraction.canonicalize();
  r.limit = Rational(Integer(1), Integer(prime - 1));
  r.limit.canonicalize();
  r.gap = r.limit - r.fraction;
  r.consistent = r.count == r.closed_form;
  return r;
}

// ---------------------------------------------------------------------------------------------
// JSON

inline nlohmann::json cyc_to_json(const CycNumber& x) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : x.coefficients()) coeffs.push_back(c.get_str());
  return {{"level", x.level()}, {"coefficients", coeffs}, {"is_zero", x.is_zero()}, {"text", to_string(x)}};
}

inline nlohmann::json report_to_json(const DistributionReport& r) {
  nlohmann::json j = {{"M", r.M},
                      {"common_level", r.common_level},
                      {"divides", r.divides},
                      {"left", cyc_to_json(r.left)},
                      {"right_plain", cyc_to_json(r.right_plain)},
                      {"right_times_m", cyc_to_json(r.right_times_m)},
                      {"residual_plain", cyc_to_json(r.residual_plain)},
                      {"residual_times_m", cyc_to_json(r.residual_times_m)},
                      {"matched_side", r.matched_side()},
                      {"implies_some_summand_nonzero", r.implies_some_summand_nonzero()}};
  j["smaller_certificate"] = r.smaller_certificate ? certificate_to_json(*r.smaller_certificate) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json report_to_json(const DensityReport& r) {
  return {{"prime", r.prime},         {"depth", r.depth},
          {"levels_exp", r.levels},   {"count", r.count},
          {"closed_form", r.closed_form}, {"fraction", r.fraction.get_str()},
          {"limit", r.limit.get_str()},   {"gap", r.gap.get_str()},
          {"consistent", r.consistent}};
}

}  // namespace mhs
