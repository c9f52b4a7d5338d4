#pragma once

// Cyclotomic multiple harmonic sums
//
//   h_m((n_i)_d; (xi_i)_{d+1}) = sum_{0<m_1<...<m_d<m}
//       (xi_2/xi_1)^{m_1} ... (xi_{d+1}/xi_d)^{m_d} (1/xi_{d+1})^m / (m_1^{n_1} ... m_d^{n_d})
//
// evaluated exactly in Q(zeta_N).

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mhs/cyclotomic.hpp"
#include "mhs/number_theory.hpp"

namespace mhs {

/// Sum of the weights n_1 + ... + n_d.
struct Weight {
  std::uint64_t value = 0;
  friend bool operator==(const Weight&, const Weight&) = default;
};

/// Full argument of a cyclotomic multiple harmonic sum: bound m, weights (n_i)_d and d+1
/// twists, all N-th roots of unity at one level N.
class MHSIndex {
 public:
  MHSIndex(unsigned level, std::uint64_t bound, std::vector<unsigned> weights,
           const std::vector<long long>& twist_exponents)
      : level_(checked_level(level)), bound_(bound), weights_(std::move(weights)) {
    if (bound_ == 0) throw std::invalid_argument("MHSIndex: bound m must be positive");
    if (weights_.empty()) throw std::invalid_argument("MHSIndex: depth must be positive");
    for (auto n : weights_) {
      if (n == 0) throw std::invalid_argument("MHSIndex: weights must be positive");
    }
    if (twist_exponents.size() != weights_.size() + 1) {
      throw std::invalid_argument("MHSIndex: " + std::to_string(weights_.size()) +
                                  " weights require " + std::to_string(weights_.size() + 1) +
                                  " twists, got " + std::to_string(twist_exponents.size()));
    }
    twists_.reserve(twist_exponents.size());
    for (auto k : twist_exponents) twists_.emplace_back(level_, k);
  }

  MHSIndex(std::uint64_t bound, std::vector<unsigned> weights, const std::vector<RootOfUnity>& twists)
      : MHSIndex(common_level(twists), bound, std::move(weights), exponents_at(twists)) {}

  unsigned level() const { return level_; }
  std::uint64_t bound() const { return bound_; }
  std::size_t depth() const { return weights_.size(); }
  const std::vector<unsigned>& weights() const { return weights_; }
  const std::vector<RootOfUnity>& twists() const { return twists_; }

  std::vector<unsigned> twist_exponents() const {
    std::vector<unsigned> out;
    for (const auto& t : twists_) out.push_back(t.exponent());
    return out;
  }

  Weight weight() const {
    Weight w;
    for (auto n : weights_) w.value += n;
    return w;
  }

  /// Exponent of the ratio xi_{j+1}/xi_j, 0-based j < d.
  unsigned ratio_exponent(std::size_t j) const {
    return reduce_exponent(static_cast<long long>(twists_[j + 1].exponent()) - twists_[j].exponent(),
                           level_);
  }

  MHSIndex with_bound(std::uint64_t m) const {
    MHSIndex copy = *this;
    if (m == 0) throw std::invalid_argument("MHSIndex: bound m must be positive");
    copy.bound_ = m;
    return copy;
  }

  /// Same index with every twist raised to the power a (level unchanged).
  MHSIndex with_twists_powered(long long a) const {
    std::vector<long long> exps;
    for (const auto& t : twists_) exps.push_back(static_cast<long long>(t.exponent()) * reduce_exponent(a, level_));
    return {level_, bound_, weights_, exps};
  }

  /// Same twists re-expressed at a multiple of the level.
  MHSIndex lifted(unsigned new_level) const {
    std::vector<RootOfUnity> tw;
    for (const auto& t : twists_) tw.push_back(t.lifted(new_level));
    return {bound_, weights_, tw};
  }

  friend bool operator==(const MHSIndex& a, const MHSIndex& b) {
    return a.level_ == b.level_ && a.bound_ == b.bound_ && a.weights_ == b.weights_ &&
           a.twist_exponents() == b.twist_exponents();
  }

 private:
  static unsigned common_level(const std::vector<RootOfUnity>& twists) {
    if (twists.empty()) throw std::invalid_argument("MHSIndex: no twists");
    for (const auto& t : twists) {
      if (t.level() != twists.front().level()) {
        throw std::invalid_argument("MHSIndex: twists must share one level");
      }
    }
    return twists.front().level();
  }

  static std::vector<long long> exponents_at(const std::vector<RootOfUnity>& twists) {
    std::vector<long long> out;
    for (const auto& t : twists) out.push_back(t.exponent());
    return out;
  }

  unsigned level_;
  std::uint64_t bound_;
  std::vector<unsigned> weights_;
  std::vector<RootOfUnity> twists_;
};

namespace detail {

inline Rational inverse_power(std::uint64_t base, unsigned exp) {
  return Rational(Integer(1), integer_pow(base, exp));
}

}  // namespace detail

/// Direct enumeration of all tuples 0 < m_1 < ... < m_d < m, accumulated through field
/// operations only. Kept as the reference evaluator.
inline CycNumber mhs_naive(const MHSIndex& index) {
  const unsigned n = index.level();
  const std::size_t d = index.depth();
  const std::uint64_t m = index.bound();
  CycNumber total(n);
  if (m <= d) return total;

  std::vector<CycNumber> powers;
  powers.reserve(n);
  for (unsigned k = 0; k < n; ++k) powers.push_back(root_power(n, k));
  const long long final_exp = -static_cast<long long>((m % n) * index.twists()[d].exponent());

  std::vector<std::uint64_t> tuple(d);
  std::function<void(std::size_t, std::uint64_t)> visit = [&](std::size_t slot, std::uint64_t lo) {
    if (slot == d) {
      long long exp = final_exp;
      Rational coefficient(1);
      for (std::size_t i = 0; i < d; ++i) {
        exp += static_cast<long long>(index.ratio_exponent(i)) * static_cast<long long>(tuple[i] % n);
        coefficient *= detail::inverse_power(tuple[i], index.weights()[i]);
      }
      total += scale(coefficient, powers[reduce_exponent(exp, n)]);
      return;
    }
    // Leave room for the remaining d - slot - 1 strictly larger entries below m.
    for (std::uint64_t v = lo; v + (d - slot - 1) < m; ++v) {
      tuple[slot] = v;
      visit(slot + 1, v + 1);
    }
  };
  visit(0, 1);
  return total;
}

/// Prefix recurrence S_j(t) = S_j(t-1) + S_{j-1}(t-1) * r_j^{t-1} / (t-1)^{n_j}, run in
/// Q[x]/(x^N - 1) where multiplication by a root of unity is a rotation; one reduction modulo
/// Phi_N at the end. O(m * d * N) rational operations.
inline CycNumber mhs_fast(const MHSIndex& index) {
  const unsigned n = index.level();
  const std::size_t d = index.depth();
  const std::uint64_t m = index.bound();
  if (m <= d) return CycNumber(n);

  // partial[j] holds S_j(t) for j = 0..d; S_0 = 1.
  std::vector<std::vector<Rational>> partial(d + 1, std::vector<Rational>(n, Rational(0)));
  partial[0][0] = 1;
  std::vector<unsigned> ratios(d);
  for (std::size_t j = 0; j < d; ++j) ratios[j] = index.ratio_exponent(j);

  Rational term;
  for (std::uint64_t t = 2; t <= m; ++t) {
    const std::uint64_t s = t - 1;  // the new summation value m_j = t - 1
    // Descending j so that partial[j - 1] still holds S_{j-1}(t - 1).
    const std::size_t top = std::min<std::uint64_t>(d, s);
    for (std::size_t j = top; j >= 1; --j) {
      const Rational inv = detail::inverse_power(s, index.weights()[j - 1]);
      const unsigned shift = static_cast<unsigned>((s % n) * ratios[j - 1] % n);
      const auto& prev = partial[j - 1];
      auto& cur = partial[j];
      for (unsigned k = 0; k < n; ++k) {
        if (prev[k] == 0) continue;
        term = prev[k] * inv;
        cur[(k + shift) % n] += term;
      }
    }
  }
  // Global unit factor (1/xi_{d+1})^m.
  const unsigned final_shift = reduce_exponent(
      -static_cast<long long>((m % n) * index.twists()[d].exponent() % n), n);
  std::vector<Rational> rotated(n, Rational(0));
  for (unsigned k = 0; k < n; ++k) rotated[(k + final_shift) % n] = partial[d][k];
  return from_cyclic(n, std::move(rotated));
}

/// (p^alpha)^{n_1+...+n_d} * h_{p^alpha}(index): the right-hand side of the inversion formula
/// relating multiple harmonic sums to adjoint p-adic cyclotomic multiple zeta values.
inline CycNumber mhs_scaled(const MHSIndex& index, std::uint64_t p, unsigned alpha) {
  if (!is_prime(p)) throw std::invalid_argument("mhs_scaled: " + std::to_string(p) + " is not prime");
  if (alpha == 0) throw std::invalid_argument("mhs_scaled: alpha must be positive");
  const std::uint64_t q = checked_pow(p, alpha);
  if (index.bound() != q) {
    throw std::invalid_argument("mhs_scaled: bound m = " + std::to_string(index.bound()) +
                                " is not p^alpha = " + std::to_string(q));
  }
  const Integer factor = integer_pow(q, index.weight().value);
  return scale(Rational(factor), mhs_fast(index));
}

struct MzvTruncation {
  ComplexApprox value;
  CycNumber exact;
  bool convergence_guaranteed = true;
};

/// Partial sum over 0 < m_1 < ... < m_d < m of the complex cyclotomic multiple zeta value with
/// d twists, i.e. the multiple harmonic sum with xi_{d+1} = 1. The limit m -> infinity exists
/// unless n_d = 1 and the last ratio 1/xi_d is 1; in that case the flag is cleared.
inline MzvTruncation complex_mzv_truncation(const std::vector<unsigned>& weights,
                                            const std::vector<RootOfUnity>& twists,
                                            std::uint64_t m, unsigned digits) {
  if (twists.size() != weights.size()) {
    throw std::invalid_argument("complex_mzv_truncation: need exactly one twist per weight");
  }
  std::vector<RootOfUnity> extended = twists;
  extended.emplace_back(twists.empty() ? 1U : twists.front().level(), 0);
  MHSIndex index(m, weights, extended);
  MzvTruncation out{.value = {}, .exact = mhs_fast(index)};
  out.value = complex_embed(out.exact, digits);
  out.convergence_guaranteed = !(weights.back() == 1 && twists.back().exponent() == 0);
  return out;
}

}  // namespace mhs
