#pragma once

// Brute-force reference implementations for the tests. Nothing here calls
// the library: fields are built from a modulus found by excluding every
// product of lower-degree monic polynomials, and groups are handled by
// exhaustive loops and std::set closures.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

namespace brute {

/// GF(p^a) with elements encoded as sum c_i p^i and full operation tables.
struct Field {
  int p = 0, a = 0, q = 0;
  std::vector<int> modulus;  // monic, lowest first, size a + 1
  std::vector<int> add_t, mul_t, neg_t, inv_t;

  Field(int p_, int a_) : p(p_), a(a_) {
    q = 1;
    for (int i = 0; i < a; ++i) q *= p;
    modulus = find_modulus();
    add_t.resize(q * q);
    mul_t.resize(q * q);
    neg_t.resize(q);
    inv_t.assign(q, 0);
    for (int x = 0; x < q; ++x) {
      const auto cx = digits(x);
      std::vector<int> n(a);
      for (int i = 0; i < a; ++i) n[i] = (p - cx[i]) % p;
      neg_t[x] = pack(n);
      for (int y = 0; y < q; ++y) {
        const auto cy = digits(y);
        std::vector<int> s(a);
        for (int i = 0; i < a; ++i) s[i] = (cx[i] + cy[i]) % p;
        add_t[x * q + y] = pack(s);
        mul_t[x * q + y] = pack(reduce(poly_mul(cx, cy)));
      }
    }
    for (int x = 1; x < q; ++x)
      for (int y = 1; y < q; ++y)
        if (mul(x, y) == 1) inv_t[x] = y;
  }

  int add(int x, int y) const { return add_t[x * q + y]; }
  int mul(int x, int y) const { return mul_t[x * q + y]; }
  int neg(int x) const { return neg_t[x]; }
  int sub(int x, int y) const { return add(x, neg(y)); }
  int inv(int x) const { return inv_t[x]; }
  int pow(int x, long e) const {
    int r = 1;
    for (long i = 0; i < e; ++i) r = mul(r, x);
    return r;
  }
  /// Smallest b | a with x^(p^b) = x.
  int min_degree(int x) const {
    for (int b = 1; b <= a; ++b) {
      if (a % b) continue;
      long e = 1;
      for (int i = 0; i < b; ++i) e *= p;
      if (pow(x, e) == x) return b;
    }
    return a;
  }

  std::vector<int> digits(int x) const {
    std::vector<int> c(a);
    for (int i = 0; i < a; ++i, x /= p) c[i] = x % p;
    return c;
  }
  int pack(const std::vector<int>& c) const {
    int x = 0;
    for (int i = a - 1; i >= 0; --i) x = x * p + c[i];
    return x;
  }

 private:
  std::vector<int> poly_mul(const std::vector<int>& f, const std::vector<int>& g) const {
    std::vector<int> r(f.size() + g.size() - 1, 0);
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) r[i + j] = (r[i + j] + f[i] * g[j]) % p;
    return r;
  }
  std::vector<int> reduce(std::vector<int> r) const {
    if (a == 1) return {r[0] % p};
    for (int k = static_cast<int>(r.size()) - 1; k >= a; --k) {
      const int c = r[k];
      if (!c) continue;
      for (int i = 0; i <= a; ++i) r[k - a + i] = ((r[k - a + i] - c * modulus[i]) % p + p) % p;
    }
    r.resize(a);
    return r;
  }
  // All monic polynomials of degree a that are products of two monic factors
  // of positive degree are excluded; the first survivor in code order wins.
  std::vector<int> find_modulus() const {
    if (a == 1) return {0, 1};
    auto monic = [&](int deg, long code) {
      std::vector<int> f(deg + 1);
      for (int i = 0; i < deg; ++i, code /= p) f[i] = static_cast<int>(code % p);
      f[deg] = 1;
      return f;
    };
    auto count = [&](int deg) {
      long n = 1;
      for (int i = 0; i < deg; ++i) n *= p;
      return n;
    };
    std::set<std::vector<int>> reducible;
    for (int d = 1; d <= a / 2; ++d)
      for (long f = 0; f < count(d); ++f)
        for (long g = 0; g < count(a - d); ++g) reducible.insert(poly_mul(monic(d, f), monic(a - d, g)));
    for (long c = 0; c < count(a); ++c) {
      auto f = monic(a, c);
      if (!reducible.count(f)) return f;
    }
    throw std::logic_error("no irreducible polynomial");
  }
};

using Mat2 = std::array<int, 4>;  // row-major a b / c d

inline Mat2 mul(const Field& F, const Mat2& x, const Mat2& y) {
  return {F.add(F.mul(x[0], y[0]), F.mul(x[1], y[2])), F.add(F.mul(x[0], y[1]), F.mul(x[1], y[3])),
          F.add(F.mul(x[2], y[0]), F.mul(x[3], y[2])), F.add(F.mul(x[2], y[1]), F.mul(x[3], y[3]))};
}
inline Mat2 inv_sl2(const Field& F, const Mat2& x) { return {x[3], F.neg(x[1]), F.neg(x[2]), x[0]}; }
inline Mat2 negate(const Field& F, const Mat2& x) { return {F.neg(x[0]), F.neg(x[1]), F.neg(x[2]), F.neg(x[3])}; }
inline int trace(const Field& F, const Mat2& x) { return F.add(x[0], x[3]); }

/// SL2(q) or PSL2(q) by exhaustion, elements as canonical matrices.
struct SL2 {
  const Field& F;
  bool projective;
  std::vector<Mat2> elements;

  SL2(const Field& f, bool proj) : F(f), projective(proj) {
    std::set<Mat2> seen;
    for (int a = 0; a < F.q; ++a)
      for (int b = 0; b < F.q; ++b)
        for (int c = 0; c < F.q; ++c)
          for (int d = 0; d < F.q; ++d)
            if (F.sub(F.mul(a, d), F.mul(b, c)) == 1) seen.insert(canon({a, b, c, d}));
    elements.assign(seen.begin(), seen.end());
  }

  Mat2 canon(const Mat2& x) const { return projective ? std::min(x, negate(F, x)) : x; }
  Mat2 identity() const { return canon({1, 0, 0, 1}); }
  Mat2 mul(const Mat2& x, const Mat2& y) const { return canon(brute::mul(F, x, y)); }
  std::size_t order() const { return elements.size(); }

  int element_order(const Mat2& x) const {
    int n = 1;
    for (Mat2 y = canon(x); y != identity(); y = mul(y, x)) ++n;
    return n;
  }
  std::size_t closure(const std::vector<Mat2>& gens) const {
    std::set<Mat2> seen{identity()};
    std::vector<Mat2> frontier{identity()};
    while (!frontier.empty()) {
      std::vector<Mat2> next;
      for (const auto& x : frontier)
        for (const auto& g : gens) {
          const Mat2 y = mul(x, g);
          if (seen.insert(y).second) next.push_back(y);
        }
      frontier.swap(next);
    }
    return seen.size();
  }
  bool generates(const Mat2& x, const Mat2& y) const { return closure({x, y}) == order(); }

  /// Conjugacy classes: orbits under every element.
  std::vector<std::vector<Mat2>> classes() const {
    std::set<Mat2> done;
    std::vector<std::vector<Mat2>> out;
    for (const auto& g : elements) {
      if (done.count(g)) continue;
      std::set<Mat2> orbit;
      for (const auto& h : elements) orbit.insert(canon(brute::mul(F, brute::mul(F, inv_sl2(F, h), g), h)));
      done.insert(orbit.begin(), orbit.end());
      out.emplace_back(orbit.begin(), orbit.end());
    }
    return out;
  }

  /// Generating pairs among (order r) x (order s), and the pair count.
  std::pair<long, long> count_rs(int r, int s) const {
    std::vector<Mat2> R, S;
    for (const auto& g : elements) {
      const int o = element_order(g);
      if (o == r) R.push_back(g);
      if (o == s) S.push_back(g);
    }
    long hits = 0;
    for (const auto& x : R)
      for (const auto& y : S) hits += generates(x, y);
    return {hits, static_cast<long>(R.size() * S.size())};
  }
};

/// Invariant-line search for n x n matrices (n <= 3) over an extension K of
/// the entries' field: exhausts all projective points of K^n.
inline bool has_common_eigenvector(const Field& K, const std::vector<std::vector<int>>& mats, int n) {
  std::vector<int> v(n);
  const long total = [&] {
    long t = 1;
    for (int i = 0; i < n; ++i) t *= K.q;
    return t;
  }();
  for (long code = 1; code < total; ++code) {
    long c = code;
    for (int i = 0; i < n; ++i, c /= K.q) v[i] = static_cast<int>(c % K.q);
    // Projective normalization: last nonzero coordinate equal to 1.
    int lead = n - 1;
    while (v[lead] == 0) --lead;
    if (v[lead] != 1) continue;
    bool all = true;
    for (const auto& m : mats) {
      std::vector<int> w(n, 0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) w[i] = K.add(w[i], K.mul(m[i * n + j], v[j]));
      // w parallel to v: w = w[lead] * v.
      const int lambda = w[lead];
      for (int i = 0; i < n && all; ++i) all = w[i] == K.mul(lambda, v[i]);
      if (!all) break;
    }
    if (all) return true;
  }
  return false;
}

/// Root of a polynomial (lowest first, coefficients in GF(p)) inside K.
inline int find_root(const Field& K, const std::vector<int>& f) {
  for (int x = 0; x < K.q; ++x) {
    int acc = 0;
    for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i) acc = K.add(K.mul(acc, x), f[i] % K.p);
    if (acc == 0) return x;
  }
  throw std::logic_error("polynomial has no root in the extension");
}

}  // namespace brute
