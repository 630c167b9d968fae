#include "genprob/matgrp.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstring>
#include <map>
#include <numeric>

namespace genprob {

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(const FiniteField& field, int d) : field_(&field), d_(d) {
  if (d < 2 || d > kMaxDim) throw MatrixError("matrix dimension must lie in [2, 8]");
}

Matrix Matrix::scalar(const FiniteField& field, int d, Elem lambda) {
  Matrix m(field, d);
  for (int i = 0; i < d; ++i) m(i, i) = lambda;
  return m;
}

Matrix Matrix::from_rows(const FiniteField& field, const std::vector<std::vector<Elem>>& rows) {
  const int d = static_cast<int>(rows.size());
  Matrix m(field, d);
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != d) throw MatrixError("matrix is not square");
    for (int j = 0; j < d; ++j) {
      const Elem v = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (v >= field.order()) throw MatrixError("matrix entry outside the field");
      m(i, j) = v;
    }
  }
  return m;
}

Matrix Matrix::parse(const FiniteField& field, std::string_view text) {
  std::vector<std::vector<Elem>> rows;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(';', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view row = text.substr(pos, end - pos);
    std::vector<Elem> entries;
    std::size_t i = 0;
    while (i < row.size()) {
      while (i < row.size() && std::isspace(static_cast<unsigned char>(row[i]))) ++i;
      std::size_t j = i;
      while (j < row.size() && !std::isspace(static_cast<unsigned char>(row[j]))) ++j;
      if (j > i) entries.push_back(field.parse(row.substr(i, j - i)));
      i = j;
    }
    if (entries.empty()) throw MatrixError("empty matrix row in '" + std::string(text) + "'");
    rows.push_back(std::move(entries));
    pos = end + 1;
  }
  return from_rows(field, rows);
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (d_ != rhs.d_) throw MatrixError("dimension mismatch");
  Matrix r(*field_, d_);
  const FiniteField& f = *field_;
  if (f.is_prime_field()) {
    const u64 p = f.characteristic();
    for (int i = 0; i < d_; ++i) {
      for (int j = 0; j < d_; ++j) {
        u128 acc = 0;
        for (int k = 0; k < d_; ++k) acc += static_cast<u128>((*this)(i, k)) * rhs(k, j);
        r(i, j) = static_cast<Elem>(acc % p);
      }
    }
    return r;
  }
  for (int i = 0; i < d_; ++i) {
    for (int j = 0; j < d_; ++j) {
      Elem acc = 0;
      for (int k = 0; k < d_; ++k) acc = f.add(acc, f.mul((*this)(i, k), rhs(k, j)));
      r(i, j) = acc;
    }
  }
  return r;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
  if (d_ != rhs.d_) throw MatrixError("dimension mismatch");
  Matrix r(*field_, d_);
  for (std::size_t i = 0; i < static_cast<std::size_t>(d_ * d_); ++i) r.e_[i] = field_->add(e_[i], rhs.e_[i]);
  return r;
}

Matrix Matrix::scaled(Elem lambda) const {
  Matrix r(*field_, d_);
  for (std::size_t i = 0; i < static_cast<std::size_t>(d_ * d_); ++i) r.e_[i] = field_->mul(e_[i], lambda);
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(*field_, d_);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

Matrix Matrix::inverse() const {
  const FiniteField& f = *field_;
  Matrix a = *this;
  Matrix inv = identity(f, d_);
  for (int col = 0; col < d_; ++col) {
    int pivot = col;
    while (pivot < d_ && a(pivot, col) == 0) ++pivot;
    if (pivot == d_) throw MatrixError("singular matrix");
    if (pivot != col) {
      for (int j = 0; j < d_; ++j) {
        std::swap(a(pivot, j), a(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const Elem s = f.inv(a(col, col));
    for (int j = 0; j < d_; ++j) {
      a(col, j) = f.mul(a(col, j), s);
      inv(col, j) = f.mul(inv(col, j), s);
    }
    for (int i = 0; i < d_; ++i) {
      if (i == col || a(i, col) == 0) continue;
      const Elem c = f.neg(a(i, col));
      for (int j = 0; j < d_; ++j) {
        a(i, j) = f.add(a(i, j), f.mul(c, a(col, j)));
        inv(i, j) = f.add(inv(i, j), f.mul(c, inv(col, j)));
      }
    }
  }
  return inv;
}

Elem Matrix::det() const {
  const FiniteField& f = *field_;
  Matrix a = *this;
  Elem det = 1;
  for (int col = 0; col < d_; ++col) {
    int pivot = col;
    while (pivot < d_ && a(pivot, col) == 0) ++pivot;
    if (pivot == d_) return 0;
    if (pivot != col) {
      for (int j = 0; j < d_; ++j) std::swap(a(pivot, j), a(col, j));
      det = f.neg(det);
    }
    det = f.mul(det, a(col, col));
    const Elem s = f.inv(a(col, col));
    for (int i = col + 1; i < d_; ++i) {
      if (a(i, col) == 0) continue;
      const Elem c = f.neg(f.mul(a(i, col), s));
      for (int j = col; j < d_; ++j) a(i, j) = f.add(a(i, j), f.mul(c, a(col, j)));
    }
  }
  return det;
}

Elem Matrix::trace() const {
  Elem t = 0;
  for (int i = 0; i < d_; ++i) t = field_->add(t, (*this)(i, i));
  return t;
}

Matrix Matrix::pow(u64 e) const {
  Matrix result = identity(*field_, d_);
  Matrix base = *this;
  while (e != 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e != 0) base = base * base;
  }
  return result;
}

bool Matrix::is_scalar(Elem* lambda) const {
  const Elem s = (*this)(0, 0);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j)
      if ((*this)(i, j) != (i == j ? s : 0)) return false;
  if (lambda != nullptr) *lambda = s;
  return true;
}

bool Matrix::is_identity() const {
  Elem s = 0;
  return is_scalar(&s) && s == 1;
}

std::string Matrix::format() const {
  std::string out;
  for (int i = 0; i < d_; ++i) {
    if (i != 0) out += ';';
    for (int j = 0; j < d_; ++j) {
      if (j != 0) out += ' ';
      out += field_->format((*this)(i, j));
    }
  }
  return out;
}

bool operator==(const Matrix& x, const Matrix& y) {
  if (x.d_ != y.d_ || x.field_ != y.field_) return false;
  return std::equal(x.e_.begin(), x.e_.begin() + x.d_ * x.d_, y.e_.begin());
}

// ------------------------------------------------------------- GroupSpec

std::string family_name(Family f) {
  switch (f) {
    case Family::SL2: return "SL2";
    case Family::SL3: return "SL3";
    case Family::SP4: return "Sp4";
  }
  return "?";
}

namespace {

u128 checked_mul(u128 x, u128 y) {
  if (x != 0 && y > ~u128{0} / x) throw MatrixError("group order exceeds 128 bits");
  return x * y;
}

u128 qpow(u64 q, int k) {
  u128 r = 1;
  for (int i = 0; i < k; ++i) r = checked_mul(r, q);
  return r;
}

}  // namespace

GroupSpec::GroupSpec(Family family, FieldPtr field, bool quotient_center)
    : family_(family), field_(std::move(field)), quotient_(quotient_center) {
  const FiniteField& f = *field_;
  (void)full_order();  // rejects orders beyond 128 bits
  center_ = {1};
  if (quotient_) {
    const u64 k = center_order();
    if (k > 1) {
      const Elem zeta = f.pow(f.primitive_element(), (f.order() - 1) / k);
      for (u64 i = 1; i < k; ++i) center_.push_back(f.pow(zeta, i));
    }
  }
  if (family_ == Family::SP4) {
    form_ = Matrix(f, 4);
    for (int i = 0; i < 4; ++i) form_(i, 3 - i) = i < 2 ? 1 : f.neg(1);
  }
}

GroupSpec GroupSpec::parse(std::string_view family, u64 q) {
  std::string name;
  for (char c : family) name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  bool quotient = false;
  if (!name.empty() && name.front() == 'P') {
    quotient = true;
    name.erase(0, 1);
  }
  Family fam;
  if (name == "SL2") fam = Family::SL2;
  else if (name == "SL3") fam = Family::SL3;
  else if (name == "SP4") fam = Family::SP4;
  else throw MatrixError("unknown group family '" + std::string(family) + "'");
  u64 p = 0;
  int a = 0;
  if (!split_prime_power(q, p, a)) throw MatrixError("q = " + std::to_string(q) + " is not a prime power");
  return GroupSpec(fam, FiniteField::construct(p, a), quotient);
}

int GroupSpec::dim() const {
  switch (family_) {
    case Family::SL2: return 2;
    case Family::SL3: return 3;
    case Family::SP4: return 4;
  }
  return 0;
}

std::string GroupSpec::name() const {
  return (quotient_ ? "P" : "") + family_name(family_) + "(" + std::to_string(q()) + ")";
}

u128 GroupSpec::full_order() const {
  const u64 q = field_->order();
  switch (family_) {
    case Family::SL2: return checked_mul(q, qpow(q, 2) - 1);
    case Family::SL3: return checked_mul(checked_mul(qpow(q, 3), qpow(q, 3) - 1), qpow(q, 2) - 1);
    case Family::SP4: return checked_mul(checked_mul(qpow(q, 4), qpow(q, 2) - 1), qpow(q, 4) - 1);
  }
  return 0;
}

u64 GroupSpec::center_order() const {
  const u64 q = field_->order();
  return std::gcd(family_ == Family::SL3 ? u64{3} : u64{2}, q - 1);
}

u128 GroupSpec::order() const { return quotient_ ? full_order() / center_order() : full_order(); }

Matrix GroupSpec::canonical(const Matrix& m) const {
  if (center_.size() == 1) return m;
  const auto entries = m.entries();
  const auto it = std::find_if(entries.begin(), entries.end(), [](Elem v) { return v != 0; });
  if (it == entries.end()) return m;
  const FiniteField& f = *field_;
  Elem best_scalar = 1;
  Elem best = *it;
  for (std::size_t i = 1; i < center_.size(); ++i) {
    const Elem v = f.mul(*it, center_[i]);
    if (v < best) {
      best = v;
      best_scalar = center_[i];
    }
  }
  return best_scalar == 1 ? m : m.scaled(best_scalar);
}

bool GroupSpec::is_trivial(const Matrix& m) const {
  Elem s = 0;
  if (!m.is_scalar(&s)) return false;
  return std::find(center_.begin(), center_.end(), s) != center_.end();
}

std::vector<Matrix> GroupSpec::standard_generators() const {
  const FiniteField& f = *field_;
  const int d = dim();
  std::vector<Elem> basis;  // 1, x, ..., x^(a-1) have codes p^k
  Elem code = 1;
  for (int k = 0; k < f.degree(); ++k) {
    basis.push_back(code);
    code *= f.characteristic();
  }
  std::vector<Matrix> gens;
  if (family_ == Family::SP4) {
    // Symplectic transvections v -> v + lambda * omega(u, v) * u.
    const std::vector<std::array<int, 4>> directions = {
        {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 1, 0, 0}, {1, 0, 1, 0}};
    for (const auto& dir : directions) {
      Matrix u(f, 4);
      for (int i = 0; i < 4; ++i) u(i, 0) = static_cast<Elem>(dir[static_cast<std::size_t>(i)]);
      Matrix uut = u * u.transpose();
      for (Elem lambda : basis) gens.push_back(canonical(Matrix::identity(f, 4) + (uut * form_).scaled(lambda)));
    }
    return gens;
  }
  for (int i = 0; i + 1 < d; ++i) {
    for (Elem lambda : basis) {
      Matrix up = Matrix::identity(f, d);
      up(i, i + 1) = lambda;
      Matrix down = Matrix::identity(f, d);
      down(i + 1, i) = lambda;
      gens.push_back(canonical(up));
      gens.push_back(canonical(down));
    }
  }
  return gens;
}

ClassSpec make_class(const GroupSpec& group, const Matrix& rep, std::string label) {
  if (!group_contains(group, rep)) throw MatrixError("class representative is not in " + group.name());
  const auto ord = element_order(group, rep, UINT64_MAX);
  if (!ord) throw OverflowError("representative order overflow");
  return ClassSpec{group, group.canonical(rep), *ord, std::move(label)};
}

bool group_contains(const GroupSpec& spec, const Matrix& m) {
  if (m.dim() != spec.dim()) throw MatrixError("matrix dimension does not match " + spec.name());
  if (&m.field() != &spec.field()) throw MatrixError("matrix field does not match " + spec.name());
  if (m.det() != 1) return false;
  if (spec.family() == Family::SP4) return m.transpose() * spec.form() * m == spec.form();
  return true;
}

// ---------------------------------------------------------------- orders

namespace {

template <class Trivial>
std::optional<u64> order_with(const Matrix& m, u64 cap, Trivial trivial) {
  const FiniteField& f = m.field();
  const int d = m.dim();
  const u64 q = f.order();
  const u64 p = f.characteristic();
  if (m.det() == 0) throw MatrixError("singular matrix has no order");

  // Exponent bound: p^e * lcm_{j <= d}(q^j - 1), with p^e >= d.
  std::map<u64, int> bound;
  bool fits = true;
  u64 qj = 1;
  for (int j = 1; j <= d; ++j) {
    if (qj > UINT64_MAX / q) {
      fits = false;
      break;
    }
    qj *= q;
    std::map<u64, int> local;
    for (u64 l : factor(qj - 1)) ++local[l];
    for (auto [l, k] : local) bound[l] = std::max(bound[l], k);
  }
  if (!fits) {
    Matrix y = m;
    for (u64 n = 1; n <= cap; ++n) {
      if (trivial(y)) return n;
      y = y * m;
    }
    return std::nullopt;
  }
  int e = 0;
  for (u64 pe = 1; pe < static_cast<u64>(d); pe *= p) ++e;
  if (e > 0) bound[p] = e;

  std::vector<std::pair<u64, int>> primes(bound.begin(), bound.end());
  u128 order = 1;
  for (std::size_t idx = 0; idx < primes.size(); ++idx) {
    Matrix y = m;
    for (std::size_t k = 0; k < primes.size(); ++k) {
      if (k == idx) continue;
      for (int t = 0; t < primes[k].second; ++t) y = y.pow(primes[k].first);
    }
    int j = 0;
    while (!trivial(y)) {
      if (j == primes[idx].second) throw MatrixError("element order exceeds the GL exponent bound");
      y = y.pow(primes[idx].first);
      ++j;
    }
    for (int t = 0; t < j; ++t) {
      order *= primes[idx].first;
      if (order > cap) return std::nullopt;
    }
  }
  return static_cast<u64>(order);
}

}  // namespace

std::optional<u64> element_order(const Matrix& m, u64 cap) {
  return order_with(m, cap, [](const Matrix& y) { return y.is_identity(); });
}

std::optional<u64> element_order(const GroupSpec& spec, const Matrix& m, u64 cap) {
  return order_with(m, cap, [&](const Matrix& y) { return spec.is_trivial(y); });
}

bool has_order(const GroupSpec& spec, const Matrix& m, u64 r) {
  if (r == 0) return false;
  if (!spec.is_trivial(m.pow(r))) return false;
  for (u64 l : prime_divisors(r)) {
    if (spec.is_trivial(m.pow(r / l))) return false;
  }
  return true;
}

// -------------------------------------------------------------- samplers

namespace {

using Vec = std::vector<Elem>;

struct AffineSolution {
  Vec particular;
  std::vector<Vec> kernel;
};

// Solves rows * v = rhs over f; nullopt when inconsistent.
std::optional<AffineSolution> solve_affine(const FiniteField& f, std::vector<Vec> rows, Vec rhs, int n) {
  const int k = static_cast<int>(rows.size());
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < n && r < k; ++c) {
    int piv = r;
    while (piv < k && rows[static_cast<std::size_t>(piv)][static_cast<std::size_t>(c)] == 0) ++piv;
    if (piv == k) continue;
    std::swap(rows[static_cast<std::size_t>(piv)], rows[static_cast<std::size_t>(r)]);
    std::swap(rhs[static_cast<std::size_t>(piv)], rhs[static_cast<std::size_t>(r)]);
    auto& pr = rows[static_cast<std::size_t>(r)];
    const Elem s = f.inv(pr[static_cast<std::size_t>(c)]);
    for (auto& v : pr) v = f.mul(v, s);
    rhs[static_cast<std::size_t>(r)] = f.mul(rhs[static_cast<std::size_t>(r)], s);
    for (int i = 0; i < k; ++i) {
      if (i == r) continue;
      auto& row = rows[static_cast<std::size_t>(i)];
      const Elem t = row[static_cast<std::size_t>(c)];
      if (t == 0) continue;
      const Elem negt = f.neg(t);
      for (int j = 0; j < n; ++j) {
        row[static_cast<std::size_t>(j)] = f.add(row[static_cast<std::size_t>(j)], f.mul(negt, pr[static_cast<std::size_t>(j)]));
      }
      rhs[static_cast<std::size_t>(i)] = f.add(rhs[static_cast<std::size_t>(i)], f.mul(negt, rhs[static_cast<std::size_t>(r)]));
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (int i = r; i < k; ++i)
    if (rhs[static_cast<std::size_t>(i)] != 0) return std::nullopt;

  AffineSolution sol;
  sol.particular.assign(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < r; ++i) sol.particular[static_cast<std::size_t>(pivot_col[static_cast<std::size_t>(i)])] = rhs[static_cast<std::size_t>(i)];
  for (int c = 0; c < n; ++c) {
    if (std::find(pivot_col.begin(), pivot_col.end(), c) != pivot_col.end()) continue;
    Vec v(static_cast<std::size_t>(n), 0);
    v[static_cast<std::size_t>(c)] = 1;
    for (int i = 0; i < r; ++i) {
      v[static_cast<std::size_t>(pivot_col[static_cast<std::size_t>(i)])] = f.neg(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]);
    }
    sol.kernel.push_back(std::move(v));
  }
  return sol;
}

Vec sample_affine(const FiniteField& f, const AffineSolution& sol, Rng& rng) {
  Vec v = sol.particular;
  for (const auto& k : sol.kernel) {
    const Elem c = rng.below(f.order());
    if (c == 0) continue;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.add(v[i], f.mul(c, k[i]));
  }
  return v;
}

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](Elem x) { return x == 0; });
}

// Row vector u^T J, so that omega(u, v) = (u^T J) . v.
Vec form_row(const FiniteField& f, const Matrix& form, const Vec& u) {
  const int n = form.dim();
  Vec row(static_cast<std::size_t>(n), 0);
  for (int j = 0; j < n; ++j) {
    Elem acc = 0;
    for (int i = 0; i < n; ++i) acc = f.add(acc, f.mul(u[static_cast<std::size_t>(i)], form(i, j)));
    row[static_cast<std::size_t>(j)] = acc;
  }
  return row;
}

Matrix sample_sl2(const FiniteField& f, Rng& rng) {
  const u64 q = f.order();
  Elem a, b;
  do {
    a = rng.below(q);
    b = rng.below(q);
  } while (a == 0 && b == 0);
  Matrix m(f, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  // a d - b c = 1
  if (a != 0) {
    const Elem c = rng.below(q);
    m(1, 0) = c;
    m(1, 1) = f.div(f.add(1, f.mul(b, c)), a);
  } else {
    const Elem d = rng.below(q);
    m(1, 1) = d;
    m(1, 0) = f.neg(f.inv(b));
  }
  return m;
}

Matrix sample_sl3(const FiniteField& f, Rng& rng) {
  const u64 q = f.order();
  Matrix m(f, 3);
  Elem det = 0;
  do {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = rng.below(q);
    det = m.det();
  } while (det == 0);
  const Elem s = f.inv(det);
  for (int j = 0; j < 3; ++j) m(0, j) = f.mul(m(0, j), s);
  return m;
}

Matrix sample_sp4(const FiniteField& f, const Matrix& form, Rng& rng) {
  const u64 q = f.order();
  Vec c1(4);
  do {
    for (auto& v : c1) v = rng.below(q);
  } while (is_zero(c1));
  const Vec w1 = form_row(f, form, c1);
  const auto s4 = solve_affine(f, {w1}, {1}, 4);
  const Vec c4 = sample_affine(f, *s4, rng);
  const Vec w4 = form_row(f, form, c4);
  const auto s2 = solve_affine(f, {w1, w4}, {0, 0}, 4);
  Vec c2;
  do {
    c2 = sample_affine(f, *s2, rng);
  } while (is_zero(c2));
  const Vec w2 = form_row(f, form, c2);
  const auto s3 = solve_affine(f, {w1, w4, w2}, {0, 0, 1}, 4);
  const Vec c3 = sample_affine(f, *s3, rng);
  Matrix m(f, 4);
  for (int i = 0; i < 4; ++i) {
    const auto si = static_cast<std::size_t>(i);
    m(i, 0) = c1[si];
    m(i, 1) = c2[si];
    m(i, 2) = c3[si];
    m(i, 3) = c4[si];
  }
  return m;
}

}  // namespace

Matrix sample_uniform(const GroupSpec& spec, Rng& rng) {
  const FiniteField& f = spec.field();
  switch (spec.family()) {
    case Family::SL2: return spec.canonical(sample_sl2(f, rng));
    case Family::SL3: return spec.canonical(sample_sl3(f, rng));
    case Family::SP4: return spec.canonical(sample_sp4(f, spec.form(), rng));
  }
  return {};
}

Matrix sample_class(const ClassSpec& cls, Rng& rng) {
  const Matrix g = sample_uniform(cls.group, rng);
  return cls.group.canonical(g.inverse() * cls.representative * g);
}

Matrix sample_of_order(const GroupSpec& spec, u64 r, Rng& rng, u64 max_attempts) {
  for (u64 attempt = 0; attempt < max_attempts; ++attempt) {
    Matrix m = sample_uniform(spec, rng);
    if (has_order(spec, m, r)) return m;
  }
  throw OverflowError("no element of order " + std::to_string(r) + " found in " + spec.name());
}

// ---------------------------------------------------------- ElementTable

ElementTable::ElementTable(const FiniteField& field, int d) : field_(&field), d_(d) {
  bits_ = std::max(1, static_cast<int>(std::bit_width(field.order() - 1)));
  words_ = (static_cast<std::size_t>(d * d * bits_) + 63) / 64;
  slots_.assign(64, 0);
}

void ElementTable::pack(const Matrix& m, u64* out) const {
  std::fill(out, out + words_, 0);
  std::size_t bit = 0;
  for (Elem v : m.entries()) {
    const std::size_t w = bit / 64, off = bit % 64;
    out[w] |= v << off;
    if (off + static_cast<std::size_t>(bits_) > 64) out[w + 1] |= v >> (64 - off);
    bit += static_cast<std::size_t>(bits_);
  }
}

Matrix ElementTable::at(std::size_t i) const {
  Matrix m(*field_, d_);
  const u64* key = arena_.data() + i * words_;
  const u64 mask = bits_ == 64 ? ~u64{0} : (u64{1} << bits_) - 1;
  std::size_t bit = 0;
  for (int r = 0; r < d_; ++r) {
    for (int c = 0; c < d_; ++c) {
      const std::size_t w = bit / 64, off = bit % 64;
      u64 v = key[w] >> off;
      if (off + static_cast<std::size_t>(bits_) > 64) v |= key[w + 1] << (64 - off);
      m(r, c) = v & mask;
      bit += static_cast<std::size_t>(bits_);
    }
  }
  return m;
}

u64 ElementTable::hash(const u64* key) const {
  u64 h = 0x243f6a8885a308d3ULL;
  for (std::size_t i = 0; i < words_; ++i) h = splitmix64(h ^ key[i]);
  return h;
}

void ElementTable::reserve(std::size_t n) {
  arena_.reserve(n * words_);
  std::size_t want = 64;
  while (want < 2 * n) want *= 2;
  if (want > slots_.size()) {
    slots_.assign(want, 0);
    const std::size_t mask = want - 1;
    for (std::size_t i = 0; i < count_; ++i) {
      std::size_t s = hash(arena_.data() + i * words_) & mask;
      while (slots_[s] != 0) s = (s + 1) & mask;
      slots_[s] = static_cast<std::uint32_t>(i + 1);
    }
  }
}

void ElementTable::grow() { reserve(slots_.size()); }

std::pair<std::size_t, bool> ElementTable::insert(const Matrix& m) {
  u64 key[Matrix::kMaxDim * Matrix::kMaxDim];
  pack(m, key);
  if (2 * (count_ + 1) > slots_.size()) grow();
  const std::size_t mask = slots_.size() - 1;
  std::size_t s = hash(key) & mask;
  while (slots_[s] != 0) {
    const std::size_t idx = slots_[s] - 1;
    if (std::memcmp(arena_.data() + idx * words_, key, words_ * sizeof(u64)) == 0) return {idx, false};
    s = (s + 1) & mask;
  }
  if (count_ >= UINT32_MAX - 1) throw OverflowError("element table is full");
  arena_.insert(arena_.end(), key, key + words_);
  slots_[s] = static_cast<std::uint32_t>(++count_);
  return {count_ - 1, true};
}

std::optional<std::size_t> ElementTable::find(const Matrix& m) const {
  u64 key[Matrix::kMaxDim * Matrix::kMaxDim];
  pack(m, key);
  const std::size_t mask = slots_.size() - 1;
  std::size_t s = hash(key) & mask;
  while (slots_[s] != 0) {
    const std::size_t idx = slots_[s] - 1;
    if (std::memcmp(arena_.data() + idx * words_, key, words_ * sizeof(u64)) == 0) return idx;
    s = (s + 1) & mask;
  }
  return std::nullopt;
}

// --------------------------------------------------------------- closure

namespace {

template <class Canon>
ClosureResult closure_with(const FiniteField& field, int d, std::span<const Matrix> gens, u64 limit,
                           ElementTable* out, Canon canon) {
  ElementTable local(field, d);
  ElementTable& table = out != nullptr ? *out : local;
  std::vector<Matrix> canon_gens;
  canon_gens.reserve(gens.size());
  for (const auto& g : gens) canon_gens.push_back(canon(g));
  table.insert(Matrix::identity(field, d));
  if (table.size() > limit) return {table.size(), false};
  for (std::size_t i = 0; i < table.size(); ++i) {
    const Matrix x = table.at(i);
    for (const auto& g : canon_gens) {
      if (table.insert(canon(x * g)).second && table.size() > limit) return {table.size(), false};
    }
  }
  return {table.size(), true};
}

}  // namespace

ClosureResult closure(const GroupSpec& spec, std::span<const Matrix> gens, u64 limit, ElementTable* out) {
  return closure_with(spec.field(), spec.dim(), gens, limit, out,
                      [&](const Matrix& m) { return spec.canonical(m); });
}

ClosureResult closure(std::span<const Matrix> gens, u64 limit, ElementTable* out) {
  if (gens.empty()) throw MatrixError("closure of an empty list needs a group");
  return closure_with(gens.front().field(), gens.front().dim(), gens, limit, out,
                      [](const Matrix& m) { return m; });
}

ElementTable enumerate_group(const GroupSpec& spec, u64 cap) {
  const u128 order = spec.order();
  if (order > cap) throw OverflowError(spec.name() + " has order beyond the enumeration cap");
  ElementTable table(spec.field(), spec.dim());
  table.reserve(static_cast<std::size_t>(order));
  const auto gens = spec.standard_generators();
  const auto res = closure(spec, gens, static_cast<u64>(order), &table);
  if (!res.complete || res.size != static_cast<u64>(order)) {
    throw std::logic_error("closure of the standard generators of " + spec.name() + " has the wrong size");
  }
  return table;
}

namespace {

struct Conjugators {
  std::vector<Matrix> g, g_inv;
};

Conjugators conjugators(const GroupSpec& spec) {
  Conjugators c;
  c.g = spec.standard_generators();
  for (const auto& g : c.g) c.g_inv.push_back(g.inverse());
  return c;
}

}  // namespace

ElementTable class_orbit(const GroupSpec& spec, const Matrix& rep, u64 cap) {
  const auto conj = conjugators(spec);
  ElementTable orbit(spec.field(), spec.dim());
  orbit.insert(spec.canonical(rep));
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    const Matrix x = orbit.at(i);
    for (std::size_t k = 0; k < conj.g.size(); ++k) {
      orbit.insert(spec.canonical(conj.g_inv[k] * x * conj.g[k]));
      if (orbit.size() > cap) throw OverflowError("conjugacy class exceeds the cap");
    }
  }
  return orbit;
}

ClassPartition partition_order(const GroupSpec& spec, const ElementTable& group, u64 r) {
  ClassPartition out;
  const std::size_t n = group.size();
  std::vector<std::uint8_t> state(n, 0);  // 0 other, 1 order r, 2 assigned
  for (std::size_t i = 0; i < n; ++i) {
    if (has_order(spec, group.at(i), r)) {
      state[i] = 1;
      ++out.count;
    }
  }
  const auto conj = conjugators(spec);
  for (std::size_t i = 0; i < n; ++i) {
    if (state[i] != 1) continue;
    ConjugacyClass cls{group.at(i), {static_cast<std::uint32_t>(i)}};
    state[i] = 2;
    for (std::size_t head = 0; head < cls.members.size(); ++head) {
      const Matrix x = group.at(cls.members[head]);
      for (std::size_t k = 0; k < conj.g.size(); ++k) {
        const auto idx = group.find(spec.canonical(conj.g_inv[k] * x * conj.g[k]));
        if (!idx) throw std::logic_error("conjugate escaped the enumerated group");
        if (state[*idx] == 1) {
          state[*idx] = 2;
          cls.members.push_back(static_cast<std::uint32_t>(*idx));
        }
      }
    }
    out.classes.push_back(std::move(cls));
  }
  return out;
}

OrderClasses elements_of_order(const GroupSpec& spec, u64 r, u64 cap) {
  ElementTable group = enumerate_group(spec, cap);
  ClassPartition part = partition_order(spec, group, r);
  return OrderClasses{std::move(group), std::move(part.classes), part.count};
}

}  // namespace genprob

// --------------------------------------------------------- OrderSampler

namespace genprob {

namespace {

// Conjugacy classes of SL2(q) as (representative, size). Non-central
// classes with trace t != +-2 are determined by t; trace +-2 gives the
// classes of +-u with u unipotent, two of them for odd q.
std::vector<std::pair<Matrix, u64>> sl2_classes(const FiniteField& f) {
  const u64 q = f.order();
  const bool odd = f.characteristic() != 2;
  const Elem one = 1, two = f.add(one, one), minus_one = f.neg(one);
  std::vector<std::pair<Matrix, u64>> out;
  auto mat = [&](Elem a, Elem b, Elem c, Elem d) {
    return Matrix::from_rows(f, {{a, b}, {c, d}});
  };
  out.emplace_back(Matrix::identity(f, 2), 1);
  if (odd) out.emplace_back(Matrix::scalar(f, 2, minus_one), 1);
  Elem nonsquare = 0;
  if (odd) {
    for (Elem x = 2; x < q; ++x) {
      if (f.pow(x, (q - 1) / 2) != one) {
        nonsquare = x;
        break;
      }
    }
  }
  for (Elem t = 0; t < q; ++t) {
    if (t == two || t == f.neg(two)) {
      const Elem sign = t == two ? one : minus_one;
      if (odd) {
        out.emplace_back(mat(sign, sign, 0, sign), (q * q - 1) / 2);
        out.emplace_back(mat(sign, f.mul(sign, nonsquare), 0, sign), (q * q - 1) / 2);
      } else {
        out.emplace_back(mat(one, one, 0, one), q * q - 1);
      }
      continue;
    }
    Matrix c = mat(0, minus_one, one, t);
    const bool split = c.pow(q - 1).is_identity();
    out.emplace_back(std::move(c), split ? q * (q + 1) : q * (q - 1));
  }
  return out;
}

}  // namespace

OrderSampler::OrderSampler(const GroupSpec& spec, u64 r) : spec_(spec), r_(r) {
  if (r == 0) throw std::invalid_argument("element order must be positive");
  auto keep = [&](const Matrix& rep, u64 size) {
    if (!has_order(spec_, rep, r_)) return;
    reps_.push_back(rep);
    total_ += size;
    cumulative_.push_back(total_);
  };
  if (spec.family() == Family::SL2 && spec.q() <= kSl2TableCap) {
    // Uniform over the SL2 preimage is uniform over the image in PSL2.
    for (const auto& [rep, size] : sl2_classes(spec.field())) keep(rep, size);
    if (spec.quotient_center()) multiplicity_ = spec.center_order();
    exact_ = true;
  } else if (spec.order() <= kEnumCap) {
    const ElementTable group = enumerate_group(spec, kEnumCap);
    for (const auto& cls : partition_order(spec, group, r).classes) keep(cls.representative, cls.members.size());
    exact_ = true;
  }
}

Matrix OrderSampler::sample(Rng& rng) const {
  if (!exact_) return sample_of_order(spec_, r_, rng);
  if (total_ == 0) throw std::invalid_argument(spec_.name() + " has no element of order " + std::to_string(r_));
  const u64 pick = rng.below(total_);
  const auto k = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), pick) -
                                          cumulative_.begin());
  const Matrix g = sample_uniform(spec_, rng);
  return spec_.canonical(g.inverse() * reps_[k] * g);
}

}  // namespace genprob
