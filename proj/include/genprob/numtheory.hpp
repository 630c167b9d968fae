#pragma once

#include <cstdint>
#include <vector>

namespace genprob {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 base, u64 exp, u64 m);

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(u64 n);

/// Prime factorization with multiplicity, ascending. factor(1) is empty.
std::vector<u64> factor(u64 n);

/// Distinct prime divisors, ascending.
std::vector<u64> prime_divisors(u64 n);

/// Positive divisors, ascending.
std::vector<u64> divisors(u64 n);

/// Writes q = p^a when q is a prime power; returns false otherwise.
bool split_prime_power(u64 q, u64& p, int& a);

/// p^a, or 0 when the result would reach `cap`.
u64 checked_pow(u64 p, int a, u64 cap);

}  // namespace genprob
