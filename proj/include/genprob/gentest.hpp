#pragma once

// What does a tuple of matrices generate? Irreducibility by spanning words,
// trace fields, an exact two-generator test for SL2(q) built on Dickson's
// subgroup list, and exact closure.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "genprob/matgrp.hpp"

namespace genprob {

enum class Outcome { Generates, Proper, Inconclusive };

enum class WitnessKind { None, Reducible, SubfieldDegree, Dihedral, ExceptionalA4S4A5, Borel, ClosureSize };

struct Witness {
  WitnessKind kind = WitnessKind::None;
  u64 value = 0;  // subfield degree or closure size

  friend bool operator==(const Witness&, const Witness&) = default;
};

struct GenVerdict {
  Outcome outcome = Outcome::Inconclusive;
  Witness witness;
  std::string method;

  /// One-line record "outcome;witness;method", e.g. "Proper;SubfieldDegree(1);dickson".
  std::string serialize() const;
  static GenVerdict parse(std::string_view text);

  friend bool operator==(const GenVerdict&, const GenVerdict&) = default;
};

/// Reduced words over r generators and their inverses, in length-lexicographic
/// order. Letter i < r is generator i, letter r + i its inverse.
class WordIterator {
 public:
  WordIterator(int alphabet_size, int max_length);

  const std::vector<int>& word() const { return word_; }
  /// Moves to the next word; false once every word of length <= max_length was seen.
  bool advance();

  /// Number of reduced words of length <= max_length (free-group ball size).
  static u64 ball_size(int alphabet_size, int max_length);

 private:
  int inverse(int letter) const { return letter < r_ ? letter + r_ : letter - r_; }
  int first_allowed(int prev) const;
  int next_allowed(int letter, int prev) const;

  int r_;
  int max_length_;
  std::vector<int> word_;
};

struct SpanResult {
  int dimension = 0;
  int stabilization_length = 0;  // least i with span(S^i) = span(S^(i+1))
};

/// Dimension of the span of all words in S, grown length by length until it
/// stops growing. Equals n^2 iff <S> is absolutely irreducible.
SpanResult algebra_span(std::span<const Matrix> S);
bool is_irreducible(std::span<const Matrix> S);

/// Degree over GF(p) of the field generated by traces of words in S.
/// Enumerates words of length <= 2d^2 (early exit at the full degree) when
/// that ball has at most word_budget words, otherwise uses the algebra basis.
/// Throws MatrixError for reducible S.
int trace_field(std::span<const Matrix> S, u64 word_budget = u64{1} << 20);
int trace_field_by_words(std::span<const Matrix> S, int max_length);
/// Traces of products Y_i Y_j Y_k and s Y_k over a word basis Y of the
/// algebra, which already generate the field of all word traces.
int trace_field_by_basis(std::span<const Matrix> S);

/// Exact verdict on <x, y> = SL2(q), q >= 4 (falls back to closure below).
GenVerdict dickson_kind(const Matrix& x, const Matrix& y);

/// |<S>| in GL_d, or nullopt once it exceeds cap.
std::optional<u64> subgroup_closure(std::span<const Matrix> S, u64 cap);
/// |<S>| in the working group of spec.
std::optional<u64> subgroup_closure(const GroupSpec& spec, std::span<const Matrix> S, u64 cap);

/// Complete test by closure: Generates once the closure passes |G|/2,
/// else Proper with the closure size.
GenVerdict closure_generation(const GroupSpec& spec, std::span<const Matrix> tuple);

/// Named but unevaluated: the bound M = max N_G on exceptional subfield
/// degrees is not tabulated for any family, so no code depends on a value.
struct UnevaluatedSymbol {
  std::string_view name;
  std::string_view definition;
};
inline constexpr UnevaluatedSymbol kSymbolM{"M", "max{n : n in N_G}"};

struct Budget {
  u64 closure_cap = 1'000'000;
  u64 word_budget = u64{1} << 20;
};

/// Generates only from a complete method (Dickson or closure); otherwise
/// sound Proper certificates or Inconclusive.
GenVerdict generation_verdict(const GroupSpec& spec, std::span<const Matrix> tuple, const Budget& budget = {});

/// Word in x, y given as letters x, y, X = x^-1, Y = y^-1 (e.g. "XYxy").
Matrix evaluate_word(std::string_view word, const Matrix& x, const Matrix& y);

}  // namespace genprob
