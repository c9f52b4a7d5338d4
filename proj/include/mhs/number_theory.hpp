#pragma once

// Integer and rational helpers: primality, prime powers, totient, p-adic valuations.

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace mhs {

using Integer = mpz_class;
using Rational = mpq_class;

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % n);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t n) {
  std::uint64_t result = 1 % n;
  base %= n;
  while (exp > 0) {
    if (exp & 1U) result = mulmod(result, base, n);
    base = mulmod(base, base, n);
    exp >>= 1U;
  }
  return result;
}

}  // namespace detail

/// Deterministic Miller-Rabin. The first twelve prime bases are exact for all n < 3.3e24,
/// which covers the full 64-bit range.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  constexpr std::uint64_t small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (auto p : small) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (auto a : small) {
    std::uint64_t x = detail::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Writes m = p^alpha with alpha >= 1, or returns nothing when m is not a prime power.
inline std::optional<PrimePower> as_prime_power(std::uint64_t m) {
  if (m < 2) return std::nullopt;
  for (std::uint64_t p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    unsigned alpha = 0;
    while (m % p == 0) {
      m /= p;
      ++alpha;
    }
    if (m != 1) return std::nullopt;
    return PrimePower{p, alpha};
  }
  return PrimePower{m, 1};
}

/// Exact p^alpha, throwing on 64-bit overflow.
inline std::uint64_t checked_pow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && r > UINT64_MAX / base) throw std::overflow_error("checked_pow: overflow");
    r *= base;
  }
  return r;
}

inline std::uint64_t totient(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("totient: n must be positive");
  std::uint64_t result = n;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

/// Positive divisors in increasing order.
inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> low, high;
  for (std::uint64_t k = 1; k * k <= n; ++k) {
    if (n % k != 0) continue;
    low.push_back(k);
    if (k != n / k) high.push_back(n / k);
  }
  low.insert(low.end(), high.rbegin(), high.rend());
  return low;
}

/// Exponent of p in a nonzero integer.
inline int padic_valuation(const Integer& z, std::uint64_t p) {
  if (z == 0) throw std::domain_error("padic_valuation: zero has infinite valuation");
  if (!is_prime(p)) throw std::invalid_argument("padic_valuation: modulus is not prime");
  Integer prime;
  mpz_set_ui(prime.get_mpz_t(), p);
  Integer rest;
  return static_cast<int>(mpz_remove(rest.get_mpz_t(), z.get_mpz_t(), prime.get_mpz_t()));
}

/// v_p(numerator) - v_p(denominator). Zero is rejected: callers branch on is-zero first.
inline int padic_valuation_rational(const Rational& q, std::uint64_t p) {
  if (q == 0) throw std::domain_error("padic_valuation_rational: zero has infinite valuation");
  return padic_valuation(q.get_num(), p) - padic_valuation(q.get_den(), p);
}

inline Integer binomial(std::uint64_t n, std::uint64_t k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline Integer integer_pow(std::uint64_t base, std::uint64_t exp) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

}  // namespace mhs
