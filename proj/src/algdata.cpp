#include "genprob/algdata.hpp"

#include <array>
#include <cctype>

namespace genprob {

namespace {

int classical_dim(TypeName name, int n) {
  switch (name) {
    case TypeName::A: return n * (n + 2);
    case TypeName::B:
    case TypeName::C: return n * (2 * n + 1);
    case TypeName::D: return n * (2 * n - 1);
    default: return 0;
  }
}

}  // namespace

AlgGroupType AlgGroupType::make(TypeName name, int rank) {
  switch (name) {
    case TypeName::G2: return {name, 2, 14};
    case TypeName::F4: return {name, 4, 52};
    case TypeName::E6: return {name, 6, 78};
    case TypeName::E7: return {name, 7, 133};
    case TypeName::E8: return {name, 8, 248};
    default: break;
  }
  const int min_rank = name == TypeName::A ? 1 : (name == TypeName::D ? 3 : 2);
  if (rank < min_rank) throw AlgDataError("rank out of range for a classical type");
  return {name, rank, classical_dim(name, rank)};
}

AlgGroupType AlgGroupType::parse(std::string_view text) {
  if (text.size() < 2) throw AlgDataError("unknown group type '" + std::string(text) + "'");
  const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  int n = 0;
  for (char c : text.substr(1)) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw AlgDataError("unknown group type '" + std::string(text) + "'");
    n = n * 10 + (c - '0');
    if (n > 1000) throw AlgDataError("rank too large");
  }
  switch (letter) {
    case 'A': return make(TypeName::A, n);
    case 'B': return make(TypeName::B, n);
    case 'C': return make(TypeName::C, n);
    case 'D': return make(TypeName::D, n);
    case 'G': if (n == 2) return make(TypeName::G2); break;
    case 'F': if (n == 4) return make(TypeName::F4); break;
    case 'E':
      if (n == 6) return make(TypeName::E6);
      if (n == 7) return make(TypeName::E7);
      if (n == 8) return make(TypeName::E8);
      break;
    default: break;
  }
  throw AlgDataError("unknown group type '" + std::string(text) + "'");
}

std::string AlgGroupType::label() const {
  switch (name) {
    case TypeName::A: return "A" + std::to_string(rank);
    case TypeName::B: return "B" + std::to_string(rank);
    case TypeName::C: return "C" + std::to_string(rank);
    case TypeName::D: return "D" + std::to_string(rank);
    case TypeName::G2: return "G2";
    case TypeName::F4: return "F4";
    case TypeName::E6: return "E6";
    case TypeName::E7: return "E7";
    case TypeName::E8: return "E8";
  }
  return "?";
}

std::string_view char_case_label(CharCase c) {
  switch (c) {
    case CharCase::P2: return "p=2";
    case CharCase::NotP2: return "p!=2";
    case CharCase::P3: return "p=3";
    case CharCase::NotP3: return "p!=3";
  }
  return "?";
}

std::span<const ClassInfo> largest_class_table() {
  using T = TypeName;
  using C = CharCase;
  static const AlgGroupType e8 = AlgGroupType::make(T::E8), e7 = AlgGroupType::make(T::E7),
                            e6 = AlgGroupType::make(T::E6), f4 = AlgGroupType::make(T::F4),
                            g2 = AlgGroupType::make(T::G2);
  // clang-format off
  static const std::array<ClassInfo, 20> table = {{
      {e8, C::P2,    2, "A1^4",      128, false, 1},
      {e8, C::NotP2, 2, "D8",        128, true,  1},
      {e8, C::P3,    3, "A2^2A1^2",  168, false, 1},
      {e8, C::NotP3, 3, "A8",        168, true,  1},
      {e7, C::P2,    2, "A1^4",       70, false, 1},
      {e7, C::NotP2, 2, "A7",         70, true,  1},
      {e7, C::P3,    3, "A2^2A1",     90, false, 1},
      {e7, C::NotP3, 3, "A5A2",       70, true,  1},
      {e6, C::P2,    2, "A1^3",       40, false, 1},
      {e6, C::NotP2, 2, "A1A5",       40, true,  1},
      {e6, C::P3,    3, "A2^2A1",     54, false, 1},
      {e6, C::NotP3, 3, "A2^3",       54, true,  1},
      {f4, C::P2,    2, "A1~A1",      28, false, 1},
      {f4, C::NotP2, 2, "A1C3",       28, true,  1},
      {f4, C::P3,    3, "~A2A1",      34, false, 1},
      {f4, C::NotP3, 3, "A2~A2",      34, true,  1},
      {g2, C::P2,    2, "~A1",         8, false, 1},
      {g2, C::NotP2, 2, "A1~A1",       8, true,  1},
      {g2, C::P3,    3, "G2(a1)",     10, false, 2},
      {g2, C::NotP3, 3, "A1T1",       10, true,  1},
  }};
  // clang-format on
  return table;
}

ClassInfo largest_class(const AlgGroupType& g, CharCase p_case, int order) {
  if (!g.exceptional()) throw AlgDataError("largest classes are tabulated for exceptional types only");
  if (order != 2 && order != 3) throw AlgDataError("order must be 2 or 3");
  const bool case_fits = order == 2 ? (p_case == CharCase::P2 || p_case == CharCase::NotP2)
                                    : (p_case == CharCase::P3 || p_case == CharCase::NotP3);
  if (!case_fits) throw AlgDataError("characteristic case does not match the element order");
  for (const auto& row : largest_class_table()) {
    if (row.group.name == g.name && row.characteristic_case == p_case && row.order == order) return row;
  }
  throw AlgDataError("no table entry");  // unreachable: every exceptional case is tabulated
}

bool scott_precondition(const AlgGroupType& g, int dim_c, int dim_d) {
  if (dim_c < 0 || dim_d < 0 || dim_c >= g.dim || dim_d >= g.dim) {
    throw AlgDataError("class dimensions must lie in [0, dim G)");
  }
  return dim_c + dim_d > g.dim;
}

bool scott_inequality(const AlgGroupType& g, int dim_c, int dim_d, int delta) {
  if (delta < 0 || delta > 2) throw AlgDataError("delta must be 0, 1 or 2");
  if (dim_c < 0 || dim_d < 0 || dim_c >= g.dim || dim_d >= g.dim) {
    throw AlgDataError("class dimensions must lie in [0, dim G)");
  }
  return dim_c + dim_d >= g.dim + g.rank - delta;
}

int default_delta(const AlgGroupType& g, bool char_two) {
  const bool bcd = g.name == TypeName::B || g.name == TypeName::C || g.name == TypeName::D;
  return char_two && bcd && g.rank % 2 == 0 ? 2 : 1;
}

int subsystem_dim(std::string_view label) {
  int total = 0;
  std::size_t i = 0;
  auto number = [&] {
    int v = 0;
    const std::size_t start = i;
    while (i < label.size() && std::isdigit(static_cast<unsigned char>(label[i]))) v = v * 10 + (label[i++] - '0');
    if (i == start) throw AlgDataError("malformed subsystem label '" + std::string(label) + "'");
    return v;
  };
  while (i < label.size()) {
    if (label[i] == '~') ++i;
    if (i >= label.size()) throw AlgDataError("malformed subsystem label '" + std::string(label) + "'");
    const char letter = label[i++];
    const int n = number();
    int mult = 1;
    if (i < label.size() && label[i] == '^') {
      ++i;
      mult = number();
    }
    int d = 0;
    switch (letter) {
      case 'A': d = classical_dim(TypeName::A, n); break;
      case 'B': d = classical_dim(TypeName::B, n); break;
      case 'C': d = classical_dim(TypeName::C, n); break;
      case 'D': d = classical_dim(TypeName::D, n); break;
      case 'T': d = n; break;
      case 'G': d = n == 2 ? 14 : throw AlgDataError("bad G factor"); break;
      default: throw AlgDataError("malformed subsystem label '" + std::string(label) + "'");
    }
    total += d * mult;
  }
  return total;
}

std::vector<AuditRow> audit_table1() {
  std::vector<AuditRow> rows;
  for (const auto& info : largest_class_table()) {
    AuditRow row{info, false, 0, true};
    if (info.semisimple) {
      row.recomputed = true;
      row.recomputed_dim = info.group.dim - subsystem_dim(info.label);
      row.match = row.recomputed_dim == info.dim;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace genprob
