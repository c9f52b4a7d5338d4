#pragma once

// Exact arithmetic in the cyclotomic field Q(zeta_N).
//
// Elements are stored in the power basis 1, zeta, ..., zeta^{phi(N)-1} modulo the N-th
// cyclotomic polynomial, with every rational coefficient in lowest terms. Two elements at the
// same level are equal iff their coordinate vectors are equal. Elements at different levels
// compare equal iff they agree after lifting to the lcm of the levels.

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mhs/number_theory.hpp"

namespace mhs {

/// Raised when two field elements at different levels meet in a binary operation.
class LevelMismatch : public std::invalid_argument {
 public:
  LevelMismatch(unsigned lhs, unsigned rhs)
      : std::invalid_argument("cyclotomic level mismatch: " + std::to_string(lhs) + " vs " +
                              std::to_string(rhs) + " (lift both operands to a common level)") {}
};

inline unsigned checked_level(unsigned level) {
  if (level == 0) throw std::invalid_argument("cyclotomic level must be positive");
  return level;
}

inline unsigned reduce_exponent(long long k, unsigned level) {
  const long long n = static_cast<long long>(level);
  return static_cast<unsigned>(((k % n) + n) % n);
}

/// zeta_N^k, kept as an exponent. No embedding is ever used to decide equality.
class RootOfUnity {
 public:
  RootOfUnity() = default;
  RootOfUnity(unsigned level, long long exponent)
      : level_(checked_level(level)), exponent_(reduce_exponent(exponent, level)) {}

  unsigned level() const { return level_; }
  unsigned exponent() const { return exponent_; }

  RootOfUnity lifted(unsigned new_level) const {
    if (new_level % level_ != 0) {
      throw std::invalid_argument("RootOfUnity::lifted: " + std::to_string(level_) +
                                  " does not divide " + std::to_string(new_level));
    }
    return {new_level, static_cast<long long>(exponent_) * (new_level / level_)};
  }

  RootOfUnity pow(long long k) const {
    return {level_, static_cast<long long>(exponent_) * reduce_exponent(k, level_)};
  }

  RootOfUnity inverse() const { return {level_, -static_cast<long long>(exponent_)}; }

  friend RootOfUnity operator*(const RootOfUnity& a, const RootOfUnity& b) {
    const unsigned l = std::lcm(a.level_, b.level_);
    return {l, static_cast<long long>(a.lifted(l).exponent_) + b.lifted(l).exponent_};
  }

  friend bool operator==(const RootOfUnity& a, const RootOfUnity& b) {
    const unsigned l = std::lcm(a.level_, b.level_);
    return a.lifted(l).exponent_ == b.lifted(l).exponent_;
  }

 private:
  unsigned level_ = 1;
  unsigned exponent_ = 0;
};

/// The N-th cyclotomic polynomial with integer coefficients in ascending degree order.
struct CycPoly {
  unsigned level = 1;
  std::vector<std::int64_t> coefficients;

  std::size_t degree() const { return coefficients.size() - 1; }
  friend bool operator==(const CycPoly&, const CycPoly&) = default;
};

namespace detail {

// Exact quotient of `dividend` by a monic integer polynomial; throws on a nonzero remainder.
inline std::vector<std::int64_t> divide_exact_monic(std::vector<std::int64_t> dividend,
                                                    const std::vector<std::int64_t>& divisor) {
  const std::size_t dd = divisor.size() - 1;
  if (dividend.size() < divisor.size()) throw std::logic_error("divide_exact_monic: degree");
  std::vector<std::int64_t> quotient(dividend.size() - dd, 0);
  for (std::size_t k = dividend.size(); k-- > dd;) {
    const std::int64_t c = dividend[k];
    quotient[k - dd] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dd; ++j) dividend[k - dd + j] -= c * divisor[j];
  }
  for (std::size_t j = 0; j < dd; ++j) {
    if (dividend[j] != 0) throw std::logic_error("divide_exact_monic: nonzero remainder");
  }
  return quotient;
}

inline std::shared_ptr<const CycPoly> cached_cyclotomic(unsigned level) {
  static std::mutex mutex;
  static std::map<unsigned, std::shared_ptr<const CycPoly>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(level); it != cache.end()) return it->second;
  }
  // x^N - 1 divided by every Phi_d with d | N, d < N.
  std::vector<std::int64_t> poly(level + 1, 0);
  poly[0] = -1;
  poly[level] = 1;
  for (auto d : divisors(level)) {
    if (d == level) continue;
    poly = divide_exact_monic(std::move(poly), cached_cyclotomic(static_cast<unsigned>(d))->coefficients);
  }
  auto result = std::make_shared<const CycPoly>(CycPoly{level, std::move(poly)});
  std::lock_guard lock(mutex);
  return cache.emplace(level, std::move(result)).first->second;
}

}  // namespace detail

/// Phi_N by exact division of x^N - 1 by the lower cyclotomic factors.
inline CycPoly cyclotomic_polynomial(unsigned level) {
  return *detail::cached_cyclotomic(checked_level(level));
}

class CycNumber;
CycNumber from_cyclic(unsigned level, std::vector<Rational> cyclic);

/// An element of Q(zeta_N) in canonical power-basis coordinates.
class CycNumber {
 public:
  /// Zero at level 1.
  CycNumber() : CycNumber(1U) {}

  /// Zero at the given level.
  explicit CycNumber(unsigned level)
      : level_(checked_level(level)), coeffs_(totient(level), Rational(0)) {}

  static CycNumber from_rational(unsigned level, const Rational& q) {
    CycNumber x(level);
    x.coeffs_[0] = q;
    x.coeffs_[0].canonicalize();
    return x;
  }

  /// Takes power-basis coordinates; the vector length must be phi(level).
  static CycNumber from_coefficients(unsigned level, std::vector<Rational> coeffs) {
    if (coeffs.size() != totient(checked_level(level))) {
      throw std::invalid_argument("CycNumber: expected " + std::to_string(totient(level)) +
                                  " coordinates at level " + std::to_string(level));
    }
    CycNumber x(level);
    x.coeffs_ = std::move(coeffs);
    for (auto& c : x.coeffs_) c.canonicalize();
    return x;
  }

  unsigned level() const { return level_; }
  std::span<const Rational> coefficients() const { return coeffs_; }
  const Rational& operator[](std::size_t k) const { return coeffs_[k]; }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c == 0; });
  }

  bool is_rational() const {
    return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const Rational& c) { return c == 0; });
  }

  /// Coordinates in Q[x]/(x^N - 1), i.e. the same polynomial padded to length N.
  std::vector<Rational> cyclic_coordinates() const {
    std::vector<Rational> out(level_, Rational(0));
    std::copy(coeffs_.begin(), coeffs_.end(), out.begin());
    return out;
  }

  friend CycNumber add(const CycNumber& x, const CycNumber& y) {
    require_same_level(x, y);
    CycNumber r = x;
    for (std::size_t k = 0; k < r.coeffs_.size(); ++k) r.coeffs_[k] += y.coeffs_[k];
    return r;
  }

  friend CycNumber neg(const CycNumber& x) {
    CycNumber r = x;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }

  friend CycNumber scale(const Rational& q, const CycNumber& x) {
    CycNumber r = x;
    for (auto& c : r.coeffs_) c *= q;
    return r;
  }

  friend CycNumber mul(const CycNumber& x, const CycNumber& y) {
    require_same_level(x, y);
    const std::size_t deg = x.coeffs_.size();
    std::vector<Rational> product(x.level_, Rational(0));
    // Products of degree < 2*phi(N) - 1 are first folded through x^N = 1, then reduced.
    for (std::size_t i = 0; i < deg; ++i) {
      if (x.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < deg; ++j) {
        if (y.coeffs_[j] == 0) continue;
        product[(i + j) % x.level_] += x.coeffs_[i] * y.coeffs_[j];
      }
    }
    return from_cyclic(x.level_, std::move(product));
  }

  friend CycNumber operator+(const CycNumber& x, const CycNumber& y) { return add(x, y); }
  friend CycNumber operator-(const CycNumber& x, const CycNumber& y) { return add(x, neg(y)); }
  friend CycNumber operator-(const CycNumber& x) { return neg(x); }
  friend CycNumber operator*(const CycNumber& x, const CycNumber& y) { return mul(x, y); }
  friend CycNumber operator*(const Rational& q, const CycNumber& x) { return scale(q, x); }

  CycNumber& operator+=(const CycNumber& y) {
    require_same_level(*this, y);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += y.coeffs_[k];
    return *this;
  }

  friend bool operator==(const CycNumber& x, const CycNumber& y);

 private:
  static void require_same_level(const CycNumber& x, const CycNumber& y) {
    if (x.level_ != y.level_) throw LevelMismatch(x.level_, y.level_);
  }

  friend CycNumber from_cyclic(unsigned level, std::vector<Rational> cyclic);

  unsigned level_;
  std::vector<Rational> coeffs_;
};

CycNumber add(const CycNumber& x, const CycNumber& y);
CycNumber neg(const CycNumber& x);
CycNumber scale(const Rational& q, const CycNumber& x);
CycNumber mul(const CycNumber& x, const CycNumber& y);

/// Reduces a vector of Q[x]/(x^N - 1) coordinates (length N) modulo Phi_N.
inline CycNumber from_cyclic(unsigned level, std::vector<Rational> cyclic) {
  if (cyclic.size() != checked_level(level)) {
    throw std::invalid_argument("from_cyclic: expected " + std::to_string(level) + " coordinates");
  }
  const auto phi = detail::cached_cyclotomic(level);
  const std::size_t deg = phi->degree();
  for (std::size_t k = level; k-- > deg;) {
    if (cyclic[k] == 0) continue;
    const Rational c = cyclic[k];
    for (std::size_t j = 0; j <= deg; ++j) {
      const std::int64_t pj = phi->coefficients[j];
      if (pj != 0) cyclic[k - deg + j] -= c * pj;
    }
  }
  cyclic.resize(deg);
  CycNumber x(level);
  x.coeffs_ = std::move(cyclic);
  for (auto& c : x.coeffs_) c.canonicalize();
  return x;
}

/// zeta_N^k in the power basis.
inline CycNumber root_power(unsigned level, long long k) {
  std::vector<Rational> cyclic(checked_level(level), Rational(0));
  cyclic[reduce_exponent(k, level)] = 1;
  return from_cyclic(level, std::move(cyclic));
}

inline CycNumber root_power(const RootOfUnity& xi) { return root_power(xi.level(), xi.exponent()); }

/// Image of x under zeta_N -> zeta_{N'}^{N'/N}.
inline CycNumber level_lift(const CycNumber& x, unsigned new_level) {
  if (checked_level(new_level) % x.level() != 0) {
    throw std::invalid_argument("level_lift: " + std::to_string(x.level()) + " does not divide " +
                                std::to_string(new_level));
  }
  if (new_level == x.level()) return x;
  const unsigned step = new_level / x.level();
  std::vector<Rational> cyclic(new_level, Rational(0));
  const auto coeffs = x.coefficients();
  for (std::size_t k = 0; k < coeffs.size(); ++k) cyclic[k * step] = coeffs[k];
  return from_cyclic(new_level, std::move(cyclic));
}

inline bool operator==(const CycNumber& x, const CycNumber& y) {
  if (x.level_ == y.level_) return x.coeffs_ == y.coeffs_;
  const unsigned l = std::lcm(x.level_, y.level_);
  return level_lift(x, l) == level_lift(y, l);
}

/// The automorphism sigma_a : zeta -> zeta^a. Requires gcd(a, N) = 1.
inline CycNumber galois_apply(long long a, const CycNumber& x) {
  const unsigned n = x.level();
  const unsigned ar = reduce_exponent(a, n);
  if (std::gcd(ar, n) != 1) {
    throw std::invalid_argument("galois_apply: " + std::to_string(a) + " is not a unit mod " +
                                std::to_string(n));
  }
  std::vector<Rational> cyclic(n, Rational(0));
  const auto coeffs = x.coefficients();
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    cyclic[static_cast<std::uint64_t>(k) * ar % n] += coeffs[k];
  }
  return from_cyclic(n, std::move(cyclic));
}

/// Human-readable exact value, e.g. "-1/2 + 1/2*z^5" (z = zeta_N).
inline std::string to_string(const CycNumber& x) {
  std::string out;
  const auto coeffs = x.coefficients();
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] == 0) continue;
    std::string term = coeffs[k].get_str();
    if (k == 1) term += "*z";
    if (k > 1) term += "*z^" + std::to_string(k);
    if (out.empty()) {
      out = term;
    } else if (term.front() == '-') {
      out += " - " + term.substr(1);
    } else {
      out += " + " + term;
    }
  }
  return out.empty() ? "0" : out;
}

/// Floating-point image under zeta_N -> exp(2*pi*i/N). Diagnostic output only.
struct ComplexApprox {
  std::string real;
  std::string imag;
  double real_value = 0.0;
  double imag_value = 0.0;
  unsigned digits = 0;
};

namespace detail {

class MpfrValue {
 public:
  explicit MpfrValue(mpfr_prec_t prec) { mpfr_init2(value_, prec); mpfr_set_zero(value_, 1); }
  ~MpfrValue() { mpfr_clear(value_); }
  MpfrValue(const MpfrValue&) = delete;
  MpfrValue& operator=(const MpfrValue&) = delete;
  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }

 private:
  mpfr_t value_;
};

inline std::string format_mpfr(mpfr_srcptr v, unsigned digits) {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", static_cast<int>(digits), v);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

inline std::pair<std::string, std::string> embed_at(const CycNumber& x, unsigned digits,
                                                    mpfr_prec_t prec, double* re_out,
                                                    double* im_out) {
  MpfrValue re(prec), im(prec), angle(prec), c(prec), s(prec), coef(prec), tmp(prec), modulus(prec);
  const auto coeffs = x.coefficients();
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] == 0) continue;
    mpfr_const_pi(angle.get(), MPFR_RNDN);
    mpfr_mul_ui(angle.get(), angle.get(), 2 * k, MPFR_RNDN);
    mpfr_div_ui(angle.get(), angle.get(), x.level(), MPFR_RNDN);
    mpfr_sin_cos(s.get(), c.get(), angle.get(), MPFR_RNDN);
    mpfr_set_q(coef.get(), coeffs[k].get_mpq_t(), MPFR_RNDN);
    mpfr_mul(tmp.get(), coef.get(), c.get(), MPFR_RNDN);
    mpfr_add(re.get(), re.get(), tmp.get(), MPFR_RNDN);
    mpfr_mul(tmp.get(), coef.get(), s.get(), MPFR_RNDN);
    mpfr_add(im.get(), im.get(), tmp.get(), MPFR_RNDN);
  }
  // Components negligible against the modulus are rounding residue of an exact zero.
  mpfr_hypot(modulus.get(), re.get(), im.get(), MPFR_RNDN);
  mpfr_div_2si(modulus.get(), modulus.get(), static_cast<long>(prec / 2), MPFR_RNDN);
  if (mpfr_cmpabs(re.get(), modulus.get()) < 0) mpfr_set_zero(re.get(), 1);
  if (mpfr_cmpabs(im.get(), modulus.get()) < 0) mpfr_set_zero(im.get(), 1);
  *re_out = mpfr_get_d(re.get(), MPFR_RNDN);
  *im_out = mpfr_get_d(im.get(), MPFR_RNDN);
  return {format_mpfr(re.get(), digits), format_mpfr(im.get(), digits)};
}

}  // namespace detail

/// Evaluates x at exp(2*pi*i/N) to `digits` significant digits. Precision is doubled until two
/// successive evaluations print identically, which absorbs cancellation between coordinates.
inline ComplexApprox complex_embed(const CycNumber& x, unsigned digits) {
  if (digits == 0) throw std::invalid_argument("complex_embed: digits must be positive");
  ComplexApprox out;
  out.digits = digits;
  if (x.is_zero()) {
    out.real = out.imag = "0";
    return out;
  }
  auto prec = static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 64;
  auto previous = detail::embed_at(x, digits, prec, &out.real_value, &out.imag_value);
  for (int round = 0; round < 16; ++round) {
    prec *= 2;
    auto current = detail::embed_at(x, digits, prec, &out.real_value, &out.imag_value);
    if (current == previous) break;
    previous = std::move(current);
  }
  out.real = previous.first;
  out.imag = previous.second;
  return out;
}

}  // namespace mhs
