#include <gtest/gtest.h>

#include <random>

#include "mhs/harmonic.hpp"
#include "oracles.hpp"

using mhs::CycNumber;
using mhs::MHSIndex;
using mhs::Rational;

namespace {

CycNumber from_strings(unsigned level, std::initializer_list<const char*> xs) {
  std::vector<Rational> c;
  for (auto x : xs) c.emplace_back(x);
  return CycNumber::from_coefficients(level, c);
}

// Every weight vector of length d with entries in [1, nmax].
std::vector<std::vector<unsigned>> weight_grid(unsigned d, unsigned nmax) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> w(d, 1);
  for (;;) {
    out.push_back(w);
    std::size_t i = d;
    while (i > 0 && w[i - 1] == nmax) w[--i] = 1;
    if (i == 0) return out;
    ++w[i - 1];
  }
}

}  // namespace

TEST(MHSIndex, Validation) {
  EXPECT_THROW(MHSIndex(4, 5, {1, 2}, {0, 1}), std::invalid_argument);
  EXPECT_THROW(MHSIndex(4, 5, {0}, {0, 1}), std::invalid_argument);
  EXPECT_THROW(MHSIndex(4, 0, {1}, {0, 1}), std::invalid_argument);
  EXPECT_THROW(MHSIndex(0, 3, {1}, {0, 1}), std::invalid_argument);
  const MHSIndex idx(4, 5, {1, 2}, {0, 5, -1});
  EXPECT_EQ(idx.twist_exponents(), (std::vector<unsigned>{0, 1, 3}));
  EXPECT_EQ(idx.weight().value, 3U);
  EXPECT_EQ(idx.ratio_exponent(1), 2U);
}

TEST(MhsNaive, Examples) {
  EXPECT_TRUE(mhs::mhs_naive(MHSIndex(3, 2, {1, 1}, {0, 1, 2})).is_zero());
  EXPECT_EQ(mhs::mhs_naive(MHSIndex(1, 4, {1}, {0, 0})), CycNumber::from_rational(1, Rational(11, 6)));
  // zeta^5 + zeta^6 / 2 reduced mod Phi_7, frozen from the sympy oracle.
  const auto v = mhs::mhs_naive(MHSIndex(7, 3, {1}, {0, 1}));
  EXPECT_EQ(v, from_strings(7, {"-1/2", "-1/2", "-1/2", "-1/2", "-1/2", "1/2"}));
  EXPECT_FALSE(v.is_zero());
}

TEST(MhsFast, Examples) {
  EXPECT_TRUE(mhs::mhs_fast(MHSIndex(5, 3, {2, 1, 1}, {0, 1, 2, 3})).is_zero());
  EXPECT_EQ(mhs::mhs_fast(MHSIndex(1, 3, {1, 1}, {0, 0, 0})), CycNumber::from_rational(1, Rational(1, 2)));
  EXPECT_EQ(mhs::mhs_fast(MHSIndex(1, 4, {2}, {0, 0})), CycNumber::from_rational(1, Rational(49, 36)));
  EXPECT_EQ(mhs::mhs_fast(MHSIndex(5, 4, {1, 2}, {0, 2, 1})), from_strings(5, {"1/9", "1/4", "1/18", "0"}));
  EXPECT_EQ(mhs::mhs_fast(MHSIndex(12, 6, {2, 1, 1}, {1, 5, 0, 7})),
            from_strings(12, {"-7/40", "53/240", "13/120", "-29/90"}));
}

TEST(MhsFast, MatchesNaiveExhaustivelyForSmallLevels) {
  for (unsigned n : {1U, 2U, 3U, 4U}) {
    for (unsigned d = 1; d <= 2; ++d) {
      for (const auto& w : weight_grid(d, 3)) {
        std::vector<long long> t(d + 1, 0);
        for (;;) {
          for (std::uint64_t m = 1; m <= 9; ++m) {
            const MHSIndex idx(n, m, w, t);
            ASSERT_EQ(mhs::mhs_fast(idx), mhs::mhs_naive(idx));
          }
          std::size_t i = d + 1;
          while (i > 0 && t[i - 1] == static_cast<long long>(n) - 1) t[--i] = 0;
          if (i == 0) break;
          ++t[i - 1];
        }
      }
    }
  }
}

TEST(MhsFast, MatchesTestOracleOnRandomIndices) {
  std::mt19937_64 rng(314159);
  for (int trial = 0; trial < 150; ++trial) {
    const unsigned n = static_cast<unsigned>(rng() % 12) + 1;
    const unsigned d = static_cast<unsigned>(rng() % 3) + 1;
    const std::uint64_t m = rng() % 11 + 1;
    std::vector<unsigned> w(d);
    for (auto& x : w) x = static_cast<unsigned>(rng() % 3) + 1;
    const auto t = oracle::random_twists(rng, n, d + 1);
    const auto value = mhs::mhs_fast(MHSIndex(n, m, w, t));
    const auto ref = oracle::mhs(n, m, w, t);
    ASSERT_EQ(ref.size(), value.coefficients().size());
    for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_EQ(ref[k], value[k]) << "trial " << trial;
  }
}

TEST(MhsFast, EmptyDomainAndPositivity) {
  for (unsigned d = 1; d <= 3; ++d) {
    for (std::uint64_t m = 1; m <= 12; ++m) {
      for (const auto& w : weight_grid(d, 2)) {
        const auto v = mhs::mhs_fast(MHSIndex(1, m, w, std::vector<long long>(d + 1, 0)));
        if (m <= d) {
          EXPECT_TRUE(v.is_zero());
        } else {
          EXPECT_GT(v[0], 0);
        }
      }
    }
  }
}

TEST(MhsScaled, Examples) {
  EXPECT_EQ(mhs::mhs_scaled(MHSIndex(1, 2, {1}, {0, 0}), 2, 1), CycNumber::from_rational(1, 2));
  EXPECT_EQ(mhs::mhs_scaled(MHSIndex(1, 3, {1, 1}, {0, 0, 0}), 3, 1), CycNumber::from_rational(1, Rational(9, 2)));
  EXPECT_TRUE(mhs::mhs_scaled(MHSIndex(1, 2, {1, 1}, {0, 0, 0}), 2, 1).is_zero());
  EXPECT_THROW(mhs::mhs_scaled(MHSIndex(1, 6, {1}, {0, 0}), 2, 1), std::invalid_argument);
  EXPECT_THROW(mhs::mhs_scaled(MHSIndex(1, 4, {1}, {0, 0}), 4, 1), std::invalid_argument);
}

TEST(MhsScaled, IsPowerTimesValue) {
  for (auto [p, a] : {std::pair{2ULL, 3U}, std::pair{3ULL, 2U}, std::pair{5ULL, 1U}, std::pair{7ULL, 1U}}) {
    const std::uint64_t m = mhs::checked_pow(p, a);
    const MHSIndex idx(4, m, {2, 1}, {0, 3, 1});
    Rational factor(1);
    for (unsigned i = 0; i < 3 * a; ++i) factor *= static_cast<unsigned long>(p);
    EXPECT_EQ(mhs::mhs_scaled(idx, p, a), mhs::scale(factor, mhs::mhs_naive(idx)));
  }
}

TEST(ComplexMzvTruncation, Examples) {
  const std::vector<mhs::RootOfUnity> one{mhs::RootOfUnity(1, 0)};
  const auto zeta2 = mhs::complex_mzv_truncation({2}, one, 1000, 12);
  EXPECT_NEAR(zeta2.value.real_value, 1.6439335666815598, 1e-12);  // pi^2/6 - sum_{k>=1000} 1/k^2
  EXPECT_TRUE(zeta2.convergence_guaranteed);
  EXPECT_DOUBLE_EQ(mhs::complex_mzv_truncation({2}, one, 2, 10).value.real_value, 1.0);
  const std::vector<mhs::RootOfUnity> two{mhs::RootOfUnity(1, 0), mhs::RootOfUnity(1, 0)};
  EXPECT_TRUE(mhs::complex_mzv_truncation({1, 2}, two, 2, 10).exact.is_zero());
  EXPECT_FALSE(mhs::complex_mzv_truncation({1}, one, 50, 10).convergence_guaranteed);
  // log 2 alternating series: twist -1, n = 1 converges.
  const auto alt = mhs::complex_mzv_truncation({1}, {mhs::RootOfUnity(2, 1)}, 2001, 10);
  EXPECT_TRUE(alt.convergence_guaranteed);
  EXPECT_NEAR(alt.value.real_value, -std::log(2.0), 1e-3);
}
