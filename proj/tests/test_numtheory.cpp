#include <doctest.h>

#include <numeric>
#include <vector>

#include "genprob/numtheory.hpp"

using namespace genprob;

TEST_CASE("is_prime agrees with a sieve below 10^5") {
  const u64 n = 100'000;
  std::vector<bool> composite(n, false);
  composite[0] = composite[1] = true;
  for (u64 i = 2; i * i < n; ++i)
    if (!composite[i])
      for (u64 j = i * i; j < n; j += i) composite[j] = true;
  for (u64 i = 0; i < n; ++i) REQUIRE(is_prime(i) == !composite[i]);
}

TEST_CASE("is_prime on large inputs") {
  CHECK(is_prime(2305843009213693951ULL));   // 2^61 - 1
  CHECK_FALSE(is_prime(3215031751ULL));      // strong pseudoprime to bases 2, 3, 5, 7
  CHECK_FALSE(is_prime(18446744073709551615ULL));
  CHECK(is_prime(18446744073709551557ULL));  // largest 64-bit prime
}

TEST_CASE("factor multiplies back and is ascending") {
  for (u64 n : {1ULL, 2ULL, 12ULL, 1023ULL, 65535ULL, 999999999989ULL * 3, 4294967297ULL, 600851475143ULL,
                (1ULL << 61) - 2}) {
    const auto f = factor(n);
    u64 prod = 1;
    for (u64 p : f) {
      CHECK(is_prime(p));
      prod *= p;
    }
    CHECK(prod == n);
    CHECK(std::is_sorted(f.begin(), f.end()));
  }
  CHECK(factor(4294967297ULL) == std::vector<u64>{641, 6700417});
}

TEST_CASE("divisors and prime powers") {
  CHECK(divisors(12) == std::vector<u64>{1, 2, 3, 4, 6, 12});
  CHECK(prime_divisors(360) == std::vector<u64>{2, 3, 5});
  u64 p = 0;
  int a = 0;
  CHECK(split_prime_power(729, p, a));
  CHECK(p == 3);
  CHECK(a == 6);
  CHECK_FALSE(split_prime_power(12, p, a));
  CHECK_FALSE(split_prime_power(1, p, a));
  CHECK(checked_pow(2, 61, u64{1} << 61) == 0);
  CHECK(checked_pow(2, 60, u64{1} << 61) == u64{1} << 60);
  CHECK(checked_pow(10, 30, UINT64_MAX) == 0);
}

TEST_CASE("powmod matches repeated multiplication") {
  for (u64 m : {7ULL, 1000003ULL, 4294967311ULL}) {
    u64 acc = 1;
    for (u64 e = 0; e < 200; ++e) {
      CHECK(powmod(5, e, m) == acc);
      acc = mulmod(acc, 5, m);
    }
  }
}
