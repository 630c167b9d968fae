#include "genprob/ffield.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <mutex>
#include <numeric>
#include <utility>

namespace genprob {

namespace {

using Poly = std::vector<u64>;  // lowest coefficient first

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_mod(Poly f, const Poly& g, u64 p) {
  trim(f);
  const std::size_t dg = g.size() - 1;
  const u64 lead_inv = powmod(g.back(), p - 2, p);
  while (f.size() >= g.size()) {
    const u64 c = mulmod(f.back(), lead_inv, p);
    const std::size_t shift = f.size() - 1 - dg;
    for (std::size_t i = 0; i <= dg; ++i) {
      f[shift + i] = (f[shift + i] + p - mulmod(c, g[i], p)) % p;
    }
    trim(f);
  }
  return f;
}

Poly poly_mulmod(const Poly& x, const Poly& y, const Poly& m, u64 p) {
  if (x.empty() || y.empty()) return {};
  Poly r(x.size() + y.size() - 1, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) {
      r[i + j] = (r[i + j] + mulmod(x[i], y[j], p)) % p;
    }
  }
  return poly_mod(std::move(r), m, p);
}

Poly poly_powmod(Poly base, u64 e, const Poly& m, u64 p) {
  Poly result{1};
  base = poly_mod(std::move(base), m, p);
  while (e != 0) {
    if (e & 1) result = poly_mulmod(result, base, m, p);
    base = poly_mulmod(base, base, m, p);
    e >>= 1;
  }
  return result;
}

Poly poly_gcd(Poly x, Poly y, u64 p) {
  trim(x);
  trim(y);
  while (!y.empty()) {
    Poly r = poly_mod(x, y, p);
    x = std::move(y);
    y = std::move(r);
  }
  return x;
}

// x^(p^k) mod f
Poly frobenius_power_of_x(const Poly& f, u64 p, int k) {
  Poly r = poly_mod(Poly{0, 1}, f, p);
  for (int i = 0; i < k; ++i) r = poly_powmod(r, p, f, p);
  return r;
}

Poly sub_x(Poly r, u64 p) {
  if (r.size() < 2) r.resize(2, 0);
  r[1] = (r[1] + p - 1) % p;
  trim(r);
  return r;
}

}  // namespace

bool is_irreducible_poly(std::span<const u64> coeffs, u64 p) {
  Poly f(coeffs.begin(), coeffs.end());
  trim(f);
  if (f.size() < 2) return false;
  const int a = static_cast<int>(f.size()) - 1;
  if (a == 1) return true;
  Poly full = sub_x(frobenius_power_of_x(f, p, a), p);
  if (!full.empty()) return false;
  for (u64 l : prime_divisors(static_cast<u64>(a))) {
    Poly g = poly_gcd(f, sub_x(frobenius_power_of_x(f, p, a / static_cast<int>(l)), p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

std::vector<u64> least_irreducible(u64 p, int a) {
  for (u64 code = 0;; ++code) {
    Poly f(static_cast<std::size_t>(a) + 1, 0);
    u64 rest = code;
    for (int i = 0; i < a; ++i) {
      f[static_cast<std::size_t>(i)] = rest % p;
      rest /= p;
    }
    f[static_cast<std::size_t>(a)] = 1;
    if (is_irreducible_poly(f, p)) return f;
  }
}

FieldPtr FiniteField::construct(u64 p, int a, u64 size_cap) {
  if (!is_prime(p)) throw FieldError("field characteristic " + std::to_string(p) + " is not prime");
  if (a <= 0) throw FieldError("field degree must be positive");
  const u64 q = checked_pow(p, a, size_cap);
  if (q == 0) throw FieldError("field order exceeds the size cap");

  static std::mutex mutex;
  static std::map<std::pair<u64, int>, FieldPtr> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find({p, a});
  if (it != cache.end()) return it->second;
  FieldPtr field(new FiniteField(p, a, q, least_irreducible(p, a)));
  cache.emplace(std::pair{p, a}, field);
  return field;
}

FiniteField::FiniteField(u64 p, int a, u64 q, std::vector<u64> modulus)
    : p_(p), a_(a), q_(q), modulus_(std::move(modulus)) {
  place_.resize(static_cast<std::size_t>(a_));
  u64 v = 1;
  for (int i = 0; i < a_; ++i) {
    place_[static_cast<std::size_t>(i)] = v;
    if (i + 1 < a_) v *= p_;
  }
  if (q_ > 2) {
    const auto primes = prime_divisors(q_ - 1);
    for (Elem g = 2; g < q_; ++g) {
      bool primitive = true;
      for (u64 l : primes) {
        if (pow(g, (q_ - 1) / l) == 1) {
          primitive = false;
          break;
        }
      }
      if (primitive) {
        primitive_ = g;
        break;
      }
    }
  }
  if (a_ > 1 && q_ <= kTableLimit) build_tables();
}

void FiniteField::build_tables() {
  std::vector<std::uint32_t> e(q_ - 1), l(q_, 0);
  Elem x = 1;
  for (u64 k = 0; k + 1 < q_; ++k) {
    e[k] = static_cast<std::uint32_t>(x);
    l[x] = static_cast<std::uint32_t>(k);
    x = mul_poly(x, primitive_);
  }
  exp_ = std::move(e);
  log_ = std::move(l);
}

std::string FiniteField::name() const {
  return "GF(" + std::to_string(p_) + "^" + std::to_string(a_) + ")";
}

Elem FiniteField::from_int(std::int64_t v) const {
  const auto pp = static_cast<std::int64_t>(p_);
  std::int64_t r = v % pp;
  if (r < 0) r += pp;
  return static_cast<Elem>(r);
}

Elem FiniteField::from_coeffs(std::span<const u64> coeffs) const {
  if (coeffs.size() > static_cast<std::size_t>(a_)) {
    // Reduce modulo the modulus first.
    Poly f(coeffs.begin(), coeffs.end());
    for (auto& c : f) c %= p_;
    f = poly_mod(std::move(f), modulus_, p_);
    return from_coeffs(f);
  }
  Elem code = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) code += (coeffs[i] % p_) * place_[i];
  return code;
}

std::vector<u64> FiniteField::coeffs(Elem x) const {
  std::vector<u64> c(static_cast<std::size_t>(a_));
  for (int i = 0; i < a_; ++i) {
    c[static_cast<std::size_t>(i)] = x % p_;
    x /= p_;
  }
  return c;
}

Elem FiniteField::add_digits(Elem x, Elem y) const {
  Elem r = 0;
  for (int i = 0; i < a_; ++i) {
    u64 d = x % p_ + y % p_;
    if (d >= p_) d -= p_;
    r += d * place_[static_cast<std::size_t>(i)];
    x /= p_;
    y /= p_;
  }
  return r;
}

Elem FiniteField::neg_digits(Elem x) const {
  Elem r = 0;
  for (int i = 0; i < a_; ++i) {
    const u64 d = x % p_;
    if (d != 0) r += (p_ - d) * place_[static_cast<std::size_t>(i)];
    x /= p_;
  }
  return r;
}

Elem FiniteField::mul_poly(Elem x, Elem y) const {
  const auto n = static_cast<std::size_t>(a_);
  u64 xd[64], yd[64], r[128] = {};
  for (std::size_t i = 0; i < n; ++i) {
    xd[i] = x % p_;
    x /= p_;
    yd[i] = y % p_;
    y /= p_;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (xd[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) r[i + j] = (r[i + j] + mulmod(xd[i], yd[j], p_)) % p_;
  }
  for (std::size_t k = 2 * n - 2; k >= n; --k) {
    const u64 c = r[k];
    if (c == 0) continue;
    r[k] = 0;
    for (std::size_t i = 0; i < n; ++i) {
      r[k - n + i] = (r[k - n + i] + p_ - mulmod(c, modulus_[i], p_)) % p_;
    }
  }
  Elem code = 0;
  for (std::size_t i = 0; i < n; ++i) code += r[i] * place_[i];
  return code;
}

Elem FiniteField::inv(Elem x) const {
  if (x == 0) throw FieldError("inverse of zero");
  if (a_ == 1) return powmod(x, p_ - 2, p_);
  if (!exp_.empty()) return log_[x] == 0 ? 1 : exp_[q_ - 1 - log_[x]];
  return pow(x, q_ - 2);
}

Elem FiniteField::pow(Elem x, u64 e) const {
  if (e == 0) return 1;
  if (x == 0) return 0;
  e %= q_ - 1;
  if (e == 0) e = q_ - 1;
  Elem result = 1;
  while (e != 0) {
    if (e & 1) result = mul(result, x);
    x = mul(x, x);
    e >>= 1;
  }
  return result;
}

int FiniteField::minimal_degree(Elem x) const {
  if (x >= q_) throw FieldError("malformed field element");
  int b = 1;
  for (Elem y = frobenius(x); y != x; y = frobenius(y)) ++b;
  return b;
}

Elem FiniteField::embed(const FiniteField& sub, Elem x) const {
  if (sub.p_ != p_ || a_ % sub.a_ != 0) throw FieldError(sub.name() + " is not a subfield of " + name());
  if (sub.a_ == a_) return x;
  if (sub.a_ == 1) return x;
  const u64 sub_order = sub.q_;
  const Elem gamma = pow(primitive_, (q_ - 1) / (sub_order - 1));
  auto eval = [&](Elem t) {
    Elem acc = 0;
    for (std::size_t i = sub.modulus_.size(); i-- > 0;) acc = add(mul(acc, t), sub.modulus_[i]);
    return acc;
  };
  Elem root = q_;
  Elem t = 1;
  for (u64 k = 0; k + 1 < sub_order; ++k) {
    if (eval(t) == 0) root = std::min(root, t);
    t = mul(t, gamma);
  }
  if (root == q_) throw FieldError("no root of the subfield modulus");  // impossible for b | a
  Elem acc = 0;
  const auto c = sub.coeffs(x);
  for (std::size_t i = c.size(); i-- > 0;) acc = add(mul(acc, root), c[i]);
  return acc;
}

std::string FiniteField::format(Elem x) const {
  if (a_ == 1) return std::to_string(x);
  std::string out;
  for (u64 c : coeffs(x)) {
    if (!out.empty()) out += ',';
    out += std::to_string(c);
  }
  return out;
}

Elem FiniteField::parse(std::string_view text) const {
  std::vector<u64> c;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view tok = text.substr(pos, end - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw FieldError("malformed field element '" + std::string(text) + "'");
    }
    c.push_back(from_int(v));
    pos = end + 1;
  }
  if (c.size() > static_cast<std::size_t>(a_)) {
    throw FieldError("too many coefficients for " + name() + ": '" + std::string(text) + "'");
  }
  return from_coeffs(c);
}

FieldPtr parse_field_literal(std::string_view text) {
  auto fail = [&] { return FieldError("malformed field literal '" + std::string(text) + "'"); };
  if (text.size() < 5 || text.substr(0, 3) != "GF(" || text.back() != ')') throw fail();
  std::string_view body = text.substr(3, text.size() - 4);
  const auto caret = body.find('^');
  auto read = [&](std::string_view s) {
    u64 v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) throw fail();
    return v;
  };
  if (caret == std::string_view::npos) {
    u64 p = 0;
    int a = 0;
    if (!split_prime_power(read(body), p, a)) throw FieldError("field order is not a prime power");
    return FiniteField::construct(p, a);
  }
  const u64 p = read(body.substr(0, caret));
  const u64 a = read(body.substr(caret + 1));
  if (a == 0 || a > 64) throw FieldError("field degree out of range");
  return FiniteField::construct(p, static_cast<int>(a));
}

int ff_minimal_degree(const FieldElem& x) { return x.field->minimal_degree(x.code); }

int ff_field_generated(std::span<const FieldElem> xs) {
  int degree = 1;
  for (const auto& x : xs) degree = std::lcm(degree, ff_minimal_degree(x));
  return degree;
}

}  // namespace genprob
