#include "genprob/gentest.hpp"

#include <algorithm>
#include <numeric>

namespace genprob {

// ------------------------------------------------------------ GenVerdict

namespace {

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Generates: return "Generates";
    case Outcome::Proper: return "Proper";
    case Outcome::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string witness_text(const Witness& w) {
  switch (w.kind) {
    case WitnessKind::None: return "";
    case WitnessKind::Reducible: return "Reducible";
    case WitnessKind::SubfieldDegree: return "SubfieldDegree(" + std::to_string(w.value) + ")";
    case WitnessKind::Dihedral: return "Dihedral";
    case WitnessKind::ExceptionalA4S4A5: return "ExceptionalA4S4A5(" + std::to_string(w.value) + ")";
    case WitnessKind::Borel: return "Borel";
    case WitnessKind::ClosureSize: return "ClosureSize(" + std::to_string(w.value) + ")";
  }
  return "";
}

Witness parse_witness(std::string_view text) {
  if (text.empty()) return {};
  const auto open = text.find('(');
  const std::string_view head = text.substr(0, open);
  u64 value = 0;
  if (open != std::string_view::npos) {
    if (text.back() != ')') throw std::invalid_argument("malformed witness '" + std::string(text) + "'");
    value = std::stoull(std::string(text.substr(open + 1, text.size() - open - 2)));
  }
  if (head == "Reducible") return {WitnessKind::Reducible, 0};
  if (head == "SubfieldDegree") return {WitnessKind::SubfieldDegree, value};
  if (head == "Dihedral") return {WitnessKind::Dihedral, 0};
  if (head == "ExceptionalA4S4A5") return {WitnessKind::ExceptionalA4S4A5, value};
  if (head == "Borel") return {WitnessKind::Borel, 0};
  if (head == "ClosureSize") return {WitnessKind::ClosureSize, value};
  throw std::invalid_argument("unknown witness '" + std::string(text) + "'");
}

}  // namespace

std::string GenVerdict::serialize() const {
  return std::string(outcome_name(outcome)) + ";" + witness_text(witness) + ";" + method;
}

GenVerdict GenVerdict::parse(std::string_view text) {
  const auto a = text.find(';');
  const auto b = a == std::string_view::npos ? a : text.find(';', a + 1);
  if (b == std::string_view::npos) throw std::invalid_argument("malformed verdict '" + std::string(text) + "'");
  GenVerdict v;
  const std::string_view o = text.substr(0, a);
  if (o == "Generates") v.outcome = Outcome::Generates;
  else if (o == "Proper") v.outcome = Outcome::Proper;
  else if (o == "Inconclusive") v.outcome = Outcome::Inconclusive;
  else throw std::invalid_argument("unknown outcome '" + std::string(o) + "'");
  v.witness = parse_witness(text.substr(a + 1, b - a - 1));
  v.method = std::string(text.substr(b + 1));
  return v;
}

// ---------------------------------------------------------- WordIterator

WordIterator::WordIterator(int alphabet_size, int max_length) : r_(alphabet_size), max_length_(max_length) {
  if (alphabet_size < 1 || max_length < 0) throw std::invalid_argument("bad word iterator shape");
}

int WordIterator::first_allowed(int prev) const {
  for (int l = 0; l < 2 * r_; ++l)
    if (prev < 0 || l != inverse(prev)) return l;
  return -1;
}

int WordIterator::next_allowed(int letter, int prev) const {
  for (int l = letter + 1; l < 2 * r_; ++l)
    if (prev < 0 || l != inverse(prev)) return l;
  return -1;
}

bool WordIterator::advance() {
  // Odometer over reduced words of the current length.
  for (int pos = static_cast<int>(word_.size()) - 1; pos >= 0; --pos) {
    const int prev = pos == 0 ? -1 : word_[static_cast<std::size_t>(pos - 1)];
    const int nxt = next_allowed(word_[static_cast<std::size_t>(pos)], prev);
    if (nxt < 0) continue;
    word_[static_cast<std::size_t>(pos)] = nxt;
    for (std::size_t k = static_cast<std::size_t>(pos) + 1; k < word_.size(); ++k) word_[k] = first_allowed(word_[k - 1]);
    return true;
  }
  if (static_cast<int>(word_.size()) == max_length_) return false;
  word_.resize(word_.size() + 1);
  word_[0] = first_allowed(-1);
  for (std::size_t k = 1; k < word_.size(); ++k) word_[k] = first_allowed(word_[k - 1]);
  return true;
}

u64 WordIterator::ball_size(int alphabet_size, int max_length) {
  const u64 branching = 2 * static_cast<u64>(alphabet_size) - 1;
  u64 total = 1, layer = 2 * static_cast<u64>(alphabet_size);
  for (int k = 1; k <= max_length; ++k) {
    if (total > UINT64_MAX - layer) return UINT64_MAX;
    total += layer;
    layer = layer > UINT64_MAX / branching ? UINT64_MAX : layer * branching;
  }
  return total;
}

// ------------------------------------------------------------ algebra span

namespace {

// Row-echelon accumulator for vectors of length n over a field.
class Echelon {
 public:
  Echelon(const FiniteField& f, std::size_t n) : f_(f), n_(n) {}

  bool add(std::span<const Elem> v_in) {
    std::vector<Elem> v(v_in.begin(), v_in.end());
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const Elem c = v[pivots_[k]];
      if (c == 0) continue;
      const Elem neg = f_.neg(c);
      for (std::size_t j = 0; j < n_; ++j) {
        if (rows_[k][j] != 0) v[j] = f_.add(v[j], f_.mul(neg, rows_[k][j]));
      }
    }
    std::size_t piv = 0;
    while (piv < n_ && v[piv] == 0) ++piv;
    if (piv == n_) return false;
    const Elem s = f_.inv(v[piv]);
    for (auto& x : v) x = f_.mul(x, s);
    rows_.push_back(std::move(v));
    pivots_.push_back(piv);
    return true;
  }
  std::size_t rank() const { return rows_.size(); }

 private:
  const FiniteField& f_;
  std::size_t n_;
  std::vector<std::vector<Elem>> rows_;
  std::vector<std::size_t> pivots_;
};

void check_tuple(std::span<const Matrix> S) {
  if (S.empty()) throw MatrixError("empty matrix list");
  for (const auto& m : S) {
    if (m.dim() != S.front().dim() || &m.field() != &S.front().field()) throw MatrixError("mixed fields or dimensions");
    if (m.det() == 0) throw MatrixError("singular matrix in generating set");
  }
}

struct WordBasis {
  SpanResult span;
  std::vector<Matrix> basis;  // words in S, identity first
};

WordBasis word_basis(std::span<const Matrix> S) {
  check_tuple(S);
  const FiniteField& f = S.front().field();
  const int n = S.front().dim();
  Echelon ech(f, static_cast<std::size_t>(n * n));
  WordBasis out;
  const Matrix id = Matrix::identity(f, n);
  ech.add(id.entries());
  out.basis.push_back(id);
  std::vector<Matrix> frontier{id};
  int length = 0;
  while (!frontier.empty()) {
    std::vector<Matrix> next;
    for (const auto& m : frontier) {
      for (const auto& s : S) {
        Matrix w = m * s;
        if (ech.add(w.entries())) {
          out.basis.push_back(w);
          next.push_back(std::move(w));
        }
      }
    }
    if (next.empty()) break;
    ++length;
    if (length > n * n) throw std::logic_error("algebra span failed to stabilize within n^2 steps");
    frontier = std::move(next);
  }
  out.span = {static_cast<int>(ech.rank()), length};
  return out;
}

Elem trace_of_product(const FiniteField& f, const Matrix& a, const Matrix& b) {
  const int n = a.dim();
  Elem t = 0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) t = f.add(t, f.mul(a(i, k), b(k, i)));
  return t;
}

}  // namespace

SpanResult algebra_span(std::span<const Matrix> S) { return word_basis(S).span; }

bool is_irreducible(std::span<const Matrix> S) {
  const int n = S.empty() ? 0 : S.front().dim();
  return algebra_span(S).dimension == n * n;
}

// ------------------------------------------------------------ trace field

int trace_field_by_words(std::span<const Matrix> S, int max_length) {
  check_tuple(S);
  const FiniteField& f = S.front().field();
  const int a = f.degree();
  std::vector<Matrix> letters(S.begin(), S.end());
  for (const auto& s : S) letters.push_back(s.inverse());
  const Matrix id = Matrix::identity(f, S.front().dim());
  int degree = 1;
  WordIterator it(static_cast<int>(S.size()), max_length);
  while (degree < a && it.advance()) {
    Matrix w = id;
    for (int l : it.word()) w = w * letters[static_cast<std::size_t>(l)];
    degree = std::lcm(degree, f.minimal_degree(w.trace()));
  }
  return degree;
}

int trace_field_by_basis(std::span<const Matrix> S) {
  const WordBasis wb = word_basis(S);
  const int n = S.front().dim();
  if (wb.span.dimension != n * n) throw MatrixError("trace field requires an irreducible generating set");
  const FiniteField& f = S.front().field();
  const int a = f.degree();
  int degree = 1;
  auto absorb = [&](Elem t) { degree = std::lcm(degree, f.minimal_degree(t)); };
  for (const auto& s : S) {
    for (const auto& y : wb.basis) {
      absorb(trace_of_product(f, s, y));
      if (degree == a) return degree;
    }
  }
  for (const auto& yi : wb.basis) {
    for (const auto& yj : wb.basis) {
      const Matrix prod = yi * yj;
      for (const auto& yk : wb.basis) {
        absorb(trace_of_product(f, prod, yk));
        if (degree == a) return degree;
      }
    }
  }
  return degree;
}

int trace_field(std::span<const Matrix> S, u64 word_budget) {
  if (!is_irreducible(S)) throw MatrixError("trace field requires an irreducible generating set");
  const int d = S.front().dim();
  const int length = 2 * d * d;
  if (WordIterator::ball_size(static_cast<int>(S.size()), length) <= word_budget) {
    return trace_field_by_words(S, length);
  }
  return trace_field_by_basis(S);
}

// ---------------------------------------------------------------- closure

std::optional<u64> subgroup_closure(std::span<const Matrix> S, u64 cap) {
  const auto res = closure(S, cap);
  if (!res.complete) return std::nullopt;
  return res.size;
}

std::optional<u64> subgroup_closure(const GroupSpec& spec, std::span<const Matrix> S, u64 cap) {
  const auto res = closure(spec, S, cap);
  if (!res.complete) return std::nullopt;
  return res.size;
}

// ----------------------------------------------------------------- Dickson

namespace {

// t^2 - tr t + 1 has a root in GF(q).
bool char_poly_splits(const FiniteField& f, Elem tr) {
  if (f.characteristic() == 2) {
    if (tr == 0) return true;
    // t = tr u turns it into u^2 + u + 1/tr^2; solvable iff the absolute trace vanishes.
    const Elem z = f.inv(f.mul(tr, tr));
    Elem acc = 0, power = z;
    for (int i = 0; i < f.degree(); ++i) {
      acc = f.add(acc, power);
      power = f.mul(power, power);
    }
    return acc == 0;
  }
  const Elem disc = f.sub(f.mul(tr, tr), f.from_int(4));
  if (disc == 0) return true;
  return f.pow(disc, (f.order() - 1) / 2) == 1;
}

GenVerdict proper(WitnessKind kind, u64 value, std::string method) {
  return {Outcome::Proper, {kind, value}, std::move(method)};
}

}  // namespace

GenVerdict closure_generation(const GroupSpec& spec, std::span<const Matrix> tuple) {
  const u64 order = static_cast<u64>(spec.order());
  const auto res = closure(spec, tuple, order / 2);
  if (!res.complete) return {Outcome::Generates, {}, "closure"};
  return proper(WitnessKind::ClosureSize, res.size, "closure");
}

GenVerdict dickson_kind(const Matrix& x, const Matrix& y) {
  if (x.dim() != 2 || y.dim() != 2 || &x.field() != &y.field()) throw MatrixError("dickson_kind needs a pair in SL2");
  const FiniteField& f = x.field();
  if (x.det() != 1 || y.det() != 1) throw MatrixError("dickson_kind needs a pair in SL2");
  const FieldPtr field = FiniteField::construct(f.characteristic(), f.degree());
  const std::array<Matrix, 2> pair{x, y};
  if (f.order() < 4) return closure_generation(GroupSpec(Family::SL2, field, false), pair);

  if (!is_irreducible(pair)) {
    const Matrix comm = x.inverse() * y.inverse() * x * y;
    if (!comm.is_identity()) return proper(WitnessKind::Borel, 0, "dickson");
    // Central pairs fix every line; no Borel subgroup is singled out.
    const Matrix* m = !x.is_scalar() ? &x : (!y.is_scalar() ? &y : nullptr);
    if (m != nullptr && char_poly_splits(f, m->trace())) return proper(WitnessKind::Borel, 0, "dickson");
    return proper(WitnessKind::Reducible, 0, "dickson");
  }

  const Elem alpha = x.trace(), beta = y.trace(), gamma = (x * y).trace();
  std::vector<Elem> invariants;
  if (f.characteristic() == 2) {
    invariants = {alpha, beta, gamma};
  } else {
    invariants = {f.mul(alpha, alpha), f.mul(beta, beta), f.mul(gamma, gamma), f.mul(f.mul(alpha, beta), gamma)};
  }
  int degree = 1;
  for (Elem t : invariants) degree = std::lcm(degree, f.minimal_degree(t));
  if (degree < f.degree()) return proper(WitnessKind::SubfieldDegree, static_cast<u64>(degree), "dickson");

  const int zeros = (alpha == 0) + (beta == 0) + (gamma == 0);
  if (zeros >= 2) return proper(WitnessKind::Dihedral, 0, "dickson");

  const GroupSpec psl(Family::SL2, field, true);
  const auto res = closure(psl, pair, 60);
  if (res.complete) {
    if (res.size == static_cast<u64>(psl.order())) return {Outcome::Generates, {}, "dickson"};
    return proper(WitnessKind::ExceptionalA4S4A5, res.size, "dickson");
  }
  return {Outcome::Generates, {}, "dickson"};
}

// ------------------------------------------------------ generation_verdict

GenVerdict generation_verdict(const GroupSpec& spec, std::span<const Matrix> tuple, const Budget& budget) {
  if (tuple.empty()) throw MatrixError("empty tuple");
  std::vector<Matrix> canon;
  for (const auto& m : tuple) {
    if (!group_contains(spec, m)) throw MatrixError("tuple member is not in " + spec.name());
    canon.push_back(spec.canonical(m));
  }
  if (spec.family() == Family::SL2 && spec.q() >= 4 && canon.size() == 2) return dickson_kind(canon[0], canon[1]);
  if (spec.order() <= budget.closure_cap) return closure_generation(spec, canon);

  if (!is_irreducible(canon)) return proper(WitnessKind::Reducible, 0, "span");
  const int b = trace_field(canon, budget.word_budget);
  if (b < spec.field().degree()) return proper(WitnessKind::SubfieldDegree, static_cast<u64>(b), "trace-field");
  return {Outcome::Inconclusive, {}, "certificates"};
}

Matrix evaluate_word(std::string_view word, const Matrix& x, const Matrix& y) {
  Matrix w = Matrix::identity(x.field(), x.dim());
  const Matrix xi = x.inverse(), yi = y.inverse();
  for (char c : word) {
    switch (c) {
      case 'x': w = w * x; break;
      case 'y': w = w * y; break;
      case 'X': w = w * xi; break;
      case 'Y': w = w * yi; break;
      default: throw std::invalid_argument(std::string("word letter '") + c + "' is not one of x, y, X, Y");
    }
  }
  return w;
}

}  // namespace genprob
