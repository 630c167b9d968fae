#pragma once

// Dense d x d matrices over GF(q) and the matrix groups SL2, SL3, Sp4 with
// their central quotients: membership, element orders, exact uniform
// samplers, closure enumeration and conjugacy classes.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "genprob/ffield.hpp"
#include "genprob/rng.hpp"

namespace genprob {

class OverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MatrixError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Matrix {
 public:
  static constexpr int kMaxDim = 8;

  Matrix() = default;
  /// Zero matrix.
  Matrix(const FiniteField& field, int d);

  static Matrix identity(const FiniteField& field, int d) { return scalar(field, d, 1); }
  static Matrix scalar(const FiniteField& field, int d, Elem lambda);
  static Matrix from_rows(const FiniteField& field, const std::vector<std::vector<Elem>>& rows);
  /// Canonical text: rows separated by ';', entries by spaces, each entry a
  /// coefficient list as in FiniteField::format.
  static Matrix parse(const FiniteField& field, std::string_view text);

  const FiniteField& field() const { return *field_; }
  int dim() const { return d_; }
  Elem operator()(int i, int j) const { return e_[static_cast<std::size_t>(i * d_ + j)]; }
  Elem& operator()(int i, int j) { return e_[static_cast<std::size_t>(i * d_ + j)]; }
  std::span<const Elem> entries() const { return {e_.data(), static_cast<std::size_t>(d_ * d_)}; }

  Matrix operator*(const Matrix& rhs) const;
  Matrix operator+(const Matrix& rhs) const;
  Matrix scaled(Elem lambda) const;
  Matrix transpose() const;
  /// Throws MatrixError when singular.
  Matrix inverse() const;
  Elem det() const;
  Elem trace() const;
  Matrix pow(u64 e) const;
  bool is_identity() const;
  /// Scalar matrix test; writes the scalar when non-null.
  bool is_scalar(Elem* lambda = nullptr) const;

  std::string format() const;

  friend bool operator==(const Matrix& x, const Matrix& y);

 private:
  const FiniteField* field_ = nullptr;
  int d_ = 0;
  std::array<Elem, kMaxDim * kMaxDim> e_{};
};

enum class Family { SL2, SL3, SP4 };

/// Family name ("SL2", "SL3", "Sp4") without the quotient prefix.
std::string family_name(Family f);

class GroupSpec {
 public:
  GroupSpec(Family family, FieldPtr field, bool quotient_center);
  /// Accepts SL2, SL3, Sp4 and PSL2, PSL3, PSp4 (case-insensitive).
  static GroupSpec parse(std::string_view family, u64 q);

  Family family() const { return family_; }
  const FiniteField& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }
  bool quotient_center() const { return quotient_; }
  int dim() const;
  u64 q() const { return field_->order(); }
  /// "PSp4(3)", "SL2(9)", ...
  std::string name() const;

  /// Order of the simply connected group.
  u128 full_order() const;
  /// |Z| of the simply connected group: gcd(2, q-1) or gcd(3, q-1).
  u64 center_order() const;
  /// Order of the group worked in (divided by |Z| under quotient_center).
  u128 order() const;

  /// Scalars of the center identified under quotient_center, {1} otherwise.
  const std::vector<Elem>& center_scalars() const { return center_; }
  /// Fixed alternating form for SP4.
  const Matrix& form() const { return form_; }

  /// Representative used for hashing. Under quotient_center the first
  /// nonzero entry in row-major order is scaled to the least code among
  /// its central multiples; otherwise the identity map.
  Matrix canonical(const Matrix& m) const;
  /// True iff m represents the identity of the working group.
  bool is_trivial(const Matrix& m) const;

  /// Transvection-type generators whose closure is the whole group.
  std::vector<Matrix> standard_generators() const;

 private:
  Family family_;
  FieldPtr field_;
  bool quotient_;
  std::vector<Elem> center_;
  Matrix form_;
};

struct ClassSpec {
  GroupSpec group;
  Matrix representative;
  u64 order = 0;
  std::string label;
};

/// Validates membership and computes the order of the representative.
ClassSpec make_class(const GroupSpec& group, const Matrix& rep, std::string label);

bool group_contains(const GroupSpec& spec, const Matrix& m);

/// Multiplicative order in GL_d; nullopt (overflow) when it exceeds cap.
std::optional<u64> element_order(const Matrix& m, u64 cap);
/// Order in the working group of spec (modulo the center under quotient_center).
std::optional<u64> element_order(const GroupSpec& spec, const Matrix& m, u64 cap);
/// m has order exactly r in the working group.
bool has_order(const GroupSpec& spec, const Matrix& m, u64 r);

Matrix sample_uniform(const GroupSpec& spec, Rng& rng);
Matrix sample_class(const ClassSpec& cls, Rng& rng);
/// Uniform over all elements of order r, by rejection; throws OverflowError
/// after max_attempts draws without a hit.
Matrix sample_of_order(const GroupSpec& spec, u64 r, Rng& rng, u64 max_attempts = 100'000'000);

/// Open-addressed set of matrices keyed by their packed entry codes. Keeps
/// insertion order, so index i is the i-th distinct element inserted.
class ElementTable {
 public:
  ElementTable(const FiniteField& field, int d);

  std::size_t size() const { return count_; }
  /// Returns (index, inserted).
  std::pair<std::size_t, bool> insert(const Matrix& m);
  std::optional<std::size_t> find(const Matrix& m) const;
  Matrix at(std::size_t i) const;
  void reserve(std::size_t n);

 private:
  void pack(const Matrix& m, u64* out) const;
  u64 hash(const u64* key) const;
  void grow();

  const FiniteField* field_;
  int d_;
  int bits_;
  std::size_t words_;
  std::size_t count_ = 0;
  std::vector<u64> arena_;
  std::vector<std::uint32_t> slots_;  // index + 1, 0 = empty
};

struct ClosureResult {
  u64 size = 0;
  bool complete = false;  // false: stopped after exceeding the limit
};

/// Breadth-first closure of gens in the working group of spec. Stops as soon
/// as more than limit elements are found. Elements land in out when given.
ClosureResult closure(const GroupSpec& spec, std::span<const Matrix> gens, u64 limit,
                      ElementTable* out = nullptr);
/// Closure in GL_d of a nonempty list.
ClosureResult closure(std::span<const Matrix> gens, u64 limit, ElementTable* out = nullptr);

/// Every element of the group; throws OverflowError when the order exceeds cap.
ElementTable enumerate_group(const GroupSpec& spec, u64 cap = 10'000'000);

/// Conjugacy class of rep, by closure under conjugation by the standard generators.
ElementTable class_orbit(const GroupSpec& spec, const Matrix& rep, u64 cap = 10'000'000);

struct ConjugacyClass {
  Matrix representative;
  std::vector<std::uint32_t> members;  // indices into OrderClasses::group
};

struct OrderClasses {
  ElementTable group;
  std::vector<ConjugacyClass> classes;
  u64 count = 0;
};

struct ClassPartition {
  std::vector<ConjugacyClass> classes;
  u64 count = 0;
};

/// Order-r elements of an already enumerated group, split into classes.
ClassPartition partition_order(const GroupSpec& spec, const ElementTable& group, u64 r);

/// All elements of order r, partitioned into conjugacy classes. Class
/// representatives are the first members in enumeration order.
OrderClasses elements_of_order(const GroupSpec& spec, u64 r, u64 cap = 10'000'000);

/// Uniform sampler over the elements of order r: a class is drawn with
/// probability proportional to its size, then conjugated by a uniform
/// element. SL2 and PSL2 use the explicit class list (trace classes plus
/// the unipotent-type classes); other groups
/// are enumerated (up to kEnumCap); larger ones fall back to rejection sampling.
class OrderSampler {
 public:
  static constexpr u64 kEnumCap = 200'000;
  static constexpr u64 kSl2TableCap = u64{1} << 20;

  OrderSampler(const GroupSpec& spec, u64 r);

  /// Number of order-r elements, when known (not for the rejection route).
  std::optional<u64> count() const { return exact_ ? std::optional<u64>(total_ / multiplicity_) : std::nullopt; }
  /// True when the group has no element of order r (known routes only).
  bool empty() const { return exact_ && total_ == 0; }
  Matrix sample(Rng& rng) const;

 private:
  GroupSpec spec_;
  u64 r_;
  bool exact_ = false;
  u64 total_ = 0;
  u64 multiplicity_ = 1;  // preimages per element when weights are SL2 sizes
  std::vector<Matrix> reps_;
  std::vector<u64> cumulative_;  // running class sizes
};

}  // namespace genprob
