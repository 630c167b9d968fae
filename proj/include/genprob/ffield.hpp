#pragma once

// Exact arithmetic in finite fields GF(p^a).
//
// An element is stored as its coefficient vector (c_0, ..., c_{a-1}) over
// GF(p), reduced modulo the field's modulus, and packed into one integer
// code sum c_i p^i. Codes run over 0..q-1, code 0 is zero and code 1 is one.
// Matrices and hash keys work on codes directly; FieldElem wraps a code
// together with its field for the public value API.

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "genprob/numtheory.hpp"

namespace genprob {

using Elem = std::uint64_t;

class FiniteField;
using FieldPtr = std::shared_ptr<const FiniteField>;

class FieldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class FiniteField {
 public:
  static constexpr u64 kDefaultSizeCap = u64{1} << 61;
  // Multiplication goes through log/antilog tables up to this order.
  static constexpr u64 kTableLimit = u64{1} << 20;

  /// Field of order p^a. The modulus is the least monic irreducible of
  /// degree a, ordering candidates by the code sum c_i p^i of their lower
  /// coefficients. Equal (p, a) return the same shared instance.
  static FieldPtr construct(u64 p, int a, u64 size_cap = kDefaultSizeCap);

  u64 characteristic() const { return p_; }
  int degree() const { return a_; }
  u64 order() const { return q_; }
  bool is_prime_field() const { return a_ == 1; }
  /// Monic modulus, lowest coefficient first (size a + 1).
  const std::vector<u64>& modulus() const { return modulus_; }
  /// "GF(p^a)"
  std::string name() const;

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(std::int64_t v) const;
  Elem from_coeffs(std::span<const u64> coeffs) const;
  std::vector<u64> coeffs(Elem x) const;

  Elem add(Elem x, Elem y) const {
    if (a_ == 1) {
      Elem s = x + y;
      return s >= p_ ? s - p_ : s;
    }
    if (p_ == 2) return x ^ y;
    return add_digits(x, y);
  }
  Elem neg(Elem x) const {
    if (a_ == 1) return x == 0 ? 0 : p_ - x;
    if (p_ == 2) return x;
    return neg_digits(x);
  }
  Elem sub(Elem x, Elem y) const { return add(x, neg(y)); }
  Elem mul(Elem x, Elem y) const {
    if (x == 0 || y == 0) return 0;
    if (a_ == 1) return mulmod(x, y, p_);
    if (!exp_.empty()) {
      u64 e = u64{log_[x]} + log_[y];
      if (e >= q_ - 1) e -= q_ - 1;
      return exp_[e];
    }
    return mul_poly(x, y);
  }
  /// Throws FieldError on zero.
  Elem inv(Elem x) const;
  Elem div(Elem x, Elem y) const { return mul(x, inv(y)); }
  Elem pow(Elem x, u64 e) const;
  Elem frobenius(Elem x) const { return pow(x, p_); }

  /// Least b dividing a with x in GF(p^b): the Frobenius orbit length of x.
  int minimal_degree(Elem x) const;

  /// A generator of the multiplicative group, least code first.
  Elem primitive_element() const { return primitive_; }

  /// Image of x in GF(p^b) under the canonical embedding into this field.
  /// The image of the subfield's variable is the least-code root of the
  /// subfield modulus. Requires b | a.
  Elem embed(const FiniteField& sub, Elem x) const;

  /// Comma-separated coefficient list, lowest degree first ("3" or "1,2").
  std::string format(Elem x) const;
  /// Inverse of format; a single integer is read as a prime-field value.
  Elem parse(std::string_view text) const;

 private:
  FiniteField(u64 p, int a, u64 q, std::vector<u64> modulus);

  Elem add_digits(Elem x, Elem y) const;
  Elem neg_digits(Elem x) const;
  Elem mul_poly(Elem x, Elem y) const;
  void build_tables();

  u64 p_;
  int a_;
  u64 q_;
  std::vector<u64> modulus_;
  std::vector<u64> place_;  // p^i
  Elem primitive_ = 1;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
};

/// Parses "GF(p^a)" or "GF(q)".
FieldPtr parse_field_literal(std::string_view text);

/// Lexicographically least monic irreducible of degree a over GF(p).
std::vector<u64> least_irreducible(u64 p, int a);
/// Rabin's test: x^(p^a) = x mod f and gcd(x^(p^(a/l)) - x, f) = 1.
bool is_irreducible_poly(std::span<const u64> f, u64 p);

struct FieldElem {
  const FiniteField* field = nullptr;
  Elem code = 0;

  std::vector<u64> coeffs() const { return field->coeffs(code); }
  friend bool operator==(const FieldElem& x, const FieldElem& y) {
    return x.field == y.field && x.code == y.code;
  }
  friend FieldElem operator+(FieldElem x, FieldElem y) { return {x.field, x.field->add(x.code, y.code)}; }
  friend FieldElem operator-(FieldElem x, FieldElem y) { return {x.field, x.field->sub(x.code, y.code)}; }
  friend FieldElem operator*(FieldElem x, FieldElem y) { return {x.field, x.field->mul(x.code, y.code)}; }
  friend FieldElem operator/(FieldElem x, FieldElem y) { return {x.field, x.field->div(x.code, y.code)}; }
};

int ff_minimal_degree(const FieldElem& x);
/// Degree over GF(p) of the subfield generated by xs; 1 for an empty set.
int ff_field_generated(std::span<const FieldElem> xs);

}  // namespace genprob
