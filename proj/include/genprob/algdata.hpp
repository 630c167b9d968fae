#pragma once

// Dimension data for simple algebraic groups, the largest classes of
// elements of order 2 and 3 in the exceptional types, and the dimension
// inequalities a generating class pair must satisfy.

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace genprob {

enum class TypeName { A, B, C, D, G2, F4, E6, E7, E8 };

struct AlgGroupType {
  TypeName name;
  int rank;
  int dim;

  /// Validates rank against the name (classical: A_n n>=1, B_n n>=2, C_n n>=2, D_n n>=3).
  static AlgGroupType make(TypeName name, int rank = 0);
  /// "E8", "G2", "A5", "C2", ...
  static AlgGroupType parse(std::string_view text);
  std::string label() const;
  bool exceptional() const { return name >= TypeName::G2; }
};

class AlgDataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class CharCase { P2, NotP2, P3, NotP3 };

std::string_view char_case_label(CharCase c);  // "p=2", "p!=2", ...

struct ClassInfo {
  AlgGroupType group;
  CharCase characteristic_case;
  int order;          // 2 or 3
  std::string label;  // centralizer type for semisimple classes, Bala-Carter label for unipotent ones
  int dim;
  bool semisimple;
  int finite_classes;  // number of G(q)-classes the class meets
};

/// Largest class of elements of the given order (2 or 3) in an exceptional
/// type; throws AlgDataError for classical types or mismatched cases.
ClassInfo largest_class(const AlgGroupType& g, CharCase p_case, int order);

/// All twenty rows: E8, E7, E6, F4, G2 by (p=2 invol, p!=2 invol, p=3 order 3, p!=3 order 3).
std::span<const ClassInfo> largest_class_table();

/// dimC + dimD > dim G. Throws unless 0 <= dimC, dimD < dim G.
bool scott_precondition(const AlgGroupType& g, int dim_c, int dim_d);

/// dimC + dimD >= dim G + rank - delta, delta in {0, 1, 2}.
bool scott_inequality(const AlgGroupType& g, int dim_c, int dim_d, int delta);

/// Trivial composition factors on the Lie algebra bound: 2 for B, C, D of
/// even rank in characteristic 2, otherwise 1.
int default_delta(const AlgGroupType& g, bool char_two);

/// Dimension of a product of simple and torus factors written as in the
/// table ("A5A2", "A1~A1", "A2^2A1^2", "A1T1"); "~" marks a short-root factor.
int subsystem_dim(std::string_view label);

struct AuditRow {
  ClassInfo info;
  bool recomputed = false;  // semisimple rows only
  int recomputed_dim = 0;
  bool match = true;
};

/// dim G - dim centralizer for every semisimple row, against the table.
std::vector<AuditRow> audit_table1();

}  // namespace genprob
