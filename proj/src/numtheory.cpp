#include "genprob/numtheory.hpp"

#include <algorithm>
#include <numeric>

namespace genprob {

u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % small == 0) return n == small;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 witness : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = powmod(witness, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace {

u64 pollard_rho(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 x = 2, y = 2, d = 1;
    auto step = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    while (d == 1) {
      x = step(x);
      y = step(step(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void factor_into(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  for (u64 small : {2, 3, 5, 7, 11, 13}) {
    while (n % small == 0) {
      out.push_back(small);
      n /= small;
    }
  }
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  u64 d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

std::vector<u64> factor(u64 n) {
  std::vector<u64> out;
  factor_into(n, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<u64> prime_divisors(u64 n) {
  auto f = factor(n);
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

std::vector<u64> divisors(u64 n) {
  std::vector<u64> out{1};
  auto f = factor(n);
  std::size_t i = 0;
  while (i < f.size()) {
    u64 prime = f[i];
    int mult = 0;
    while (i < f.size() && f[i] == prime) {
      ++mult;
      ++i;
    }
    const std::size_t base = out.size();
    u64 pk = 1;
    for (int k = 1; k <= mult; ++k) {
      pk *= prime;
      for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool split_prime_power(u64 q, u64& p, int& a) {
  if (q < 2) return false;
  auto f = factor(q);
  if (f.front() != f.back()) return false;
  p = f.front();
  a = static_cast<int>(f.size());
  return true;
}

u64 checked_pow(u64 p, int a, u64 cap) {
  u64 result = 1;
  for (int i = 0; i < a; ++i) {
    if (result > (cap - 1) / p) return 0;
    result *= p;
  }
  return result < cap ? result : 0;
}

}  // namespace genprob
