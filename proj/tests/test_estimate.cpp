#include <doctest.h>

#include <cmath>
#include <map>

#include "brute.hpp"
#include "genprob/estimate.hpp"
#include "genprob/rng.hpp"

using namespace genprob;

namespace {

Matrix to_matrix(const FiniteField& F, const brute::Mat2& m) {
  return Matrix::from_rows(F, {{static_cast<Elem>(m[0]), static_cast<Elem>(m[1])},
                               {static_cast<Elem>(m[2]), static_cast<Elem>(m[3])}});
}

// Class-by-class numerators must add up to the (r, s) numerator.
void check_class_sum(u64 p, int r, int s) {
  const brute::Field K(static_cast<int>(p), 1);
  const brute::SL2 G(K, true);
  const GroupSpec spec = GroupSpec::parse("PSL2", p);
  const ExactResult whole = exact_P(spec, r, s);
  const auto [hits, pairs] = G.count_rs(r, s);
  CHECK(whole.numerator == static_cast<u64>(hits));
  CHECK(whole.denominator == static_cast<u64>(pairs));

  std::vector<ClassSpec> C, D;
  for (const auto& cls : G.classes()) {
    const int o = G.element_order(cls.front());
    const Matrix rep = to_matrix(spec.field(), cls.front());
    if (o == r) C.push_back(make_class(spec, rep, "c" + std::to_string(C.size())));
    if (o == s) D.push_back(make_class(spec, rep, "d" + std::to_string(D.size())));
  }
  u64 num = 0, den = 0;
  for (const auto& c : C)
    for (const auto& d : D) {
      const ExactResult e = exact_P_classes(spec, c, d);
      num += e.numerator;
      den += e.denominator;
      CHECK(e.tally.total() == e.denominator);
    }
  CHECK(num == whole.numerator);
  CHECK(den == whole.denominator);
}

}  // namespace

TEST_CASE("Wilson interval edges") {
  CHECK(wilson_interval(0, 100).lo == 0.0);
  CHECK(wilson_interval(100, 100).hi == 1.0);
  const Interval w = wilson_interval(50, 100);
  CHECK(w.lo == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(w.hi == doctest::Approx(0.5962).epsilon(1e-3));
  CHECK(wilson_interval(0, 0) == Interval{0, 1});
}

TEST_CASE("exact probabilities match brute-force counts") {
  for (const auto& [p, r, s] : std::vector<std::tuple<int, int, int>>{{5, 2, 3}, {5, 2, 5}, {7, 2, 3}}) {
    CAPTURE(p);
    CAPTURE(s);
    const brute::Field K(p, 1);
    const auto [hits, pairs] = brute::SL2(K, true).count_rs(r, s);
    const ExactResult e = exact_P(GroupSpec::parse("PSL2", p), r, s);
    CHECK(e.numerator == static_cast<u64>(hits));
    CHECK(e.denominator == static_cast<u64>(pairs));
    CHECK(e.tally.generates == e.numerator);
    CHECK(e.tally.total() == e.denominator);
  }
  // Frozen brute-force values.
  CHECK(exact_P(GroupSpec::parse("PSL2", 7), 2, 3).numerator == 336);
  CHECK(exact_P(GroupSpec::parse("PSL2", 7), 2, 3).denominator == 1176);
  CHECK(exact_P(GroupSpec::parse("PSL2", 5), 2, 3).numerator == 120);
  CHECK(exact_P(GroupSpec::parse("PSL2", 5), 2, 3).denominator == 300);
  CHECK(exact_P(GroupSpec::parse("PSL2", 5), 2, 5).numerator == 240);
  CHECK(exact_P(GroupSpec::parse("PSL2", 5), 2, 5).denominator == 360);
}

TEST_CASE("whole group exact value") {
  const brute::Field K(5, 1);
  const brute::SL2 G(K, false);
  long hits = 0;
  for (const auto& x : G.elements)
    for (const auto& y : G.elements) hits += G.generates(x, y);
  const ExactResult e = exact_P_group(GroupSpec::parse("SL2", 5));
  CHECK(e.numerator == static_cast<u64>(hits));
  CHECK(e.numerator == 9120);
  CHECK(e.denominator == 14400);
}

TEST_CASE("degenerate orders") {
  const GroupSpec spec = GroupSpec::parse("PSL2", 7);
  const ExactResult one = exact_P(spec, 1, 3);
  CHECK(one.numerator == 0);
  CHECK(one.denominator == 56);
  const ExactResult none = exact_P(spec, 5, 3);  // 5 does not divide 168
  CHECK(none.empty_class());
  CHECK(none.value() == 0.0);
}

TEST_CASE("class restriction is consistent with order restriction") {
  check_class_sum(5, 2, 3);
  check_class_sum(5, 2, 5);
  check_class_sum(7, 2, 3);
  check_class_sum(7, 3, 4);
}

TEST_CASE("frozen class pairs") {
  const GroupSpec sl2_5 = GroupSpec::parse("SL2", 5);
  const FiniteField& F = sl2_5.field();
  const ClassSpec c4 = make_class(sl2_5, Matrix::from_rows(F, {{0, 1}, {4, 0}}), "4A");
  const ClassSpec c3 = make_class(sl2_5, Matrix::from_rows(F, {{0, 1}, {4, 4}}), "3A");
  const ExactResult e = exact_P_classes(sl2_5, c4, c3);
  CHECK(e.numerator == 240);
  CHECK(e.denominator == 600);

  // PSL2(9): involutions never generate together with an order-3 element.
  const GroupSpec psl2_9 = GroupSpec::parse("PSL2", 9);
  const ExactResult r23 = exact_P(psl2_9, 2, 3);
  CHECK(r23.numerator == 0);
  CHECK(r23.denominator == 45 * 80);
}

TEST_CASE("serial and parallel exact paths agree") {
  const GroupSpec spec = GroupSpec::parse("PSL2", 11);
  const ExactResult a = exact_P(spec, 2, 3);
  const ExactResult b = serial::exact_P(spec, 2, 3);
  CHECK(a.numerator == b.numerator);
  CHECK(a.tally == b.tally);
}

TEST_CASE("Monte Carlo is reproducible across thread counts") {
  const GroupSpec spec = GroupSpec::parse("PSL2", 7);
  const Population pop = Population::orders(2, 3);
  const EstimateReport ref = serial::monte_carlo_P(spec, pop, 3000, 99);
  for (int t : {1, 4, 8}) {
    const EstimateReport rep = monte_carlo_P(spec, pop, 3000, 99, {}, t);
    CHECK(rep.tally == ref.tally);
    CHECK(rep.point == ref.point);
  }
  CHECK(ref.tally.total() == 3000);
  CHECK(ref.seed == std::optional<u64>(99));
  REQUIRE(ref.wilson95);
  CHECK(ref.wilson95->lo <= ref.point);
  CHECK(ref.point <= ref.wilson95->hi);
  CHECK(ref.class_c == "ord2");
  CHECK(ref.class_d == "ord3");
  CHECK(std::abs(ref.point - 336.0 / 1176.0) < 0.05);
  CHECK_FALSE(monte_carlo_P(spec, pop, 3000, 100).tally == ref.tally);
  CHECK_THROWS_AS(monte_carlo_P(spec, pop, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(monte_carlo_P(spec, Population::orders(5, 3), 10, 1), std::invalid_argument);
}

TEST_CASE("Monte Carlo interval covers the exact whole-group value") {
  const EstimateReport rep = monte_carlo_P(GroupSpec::parse("SL2", 5), Population::whole_group(), 20000, 7);
  REQUIRE(rep.wilson95);
  CHECK(rep.wilson95->lo <= 9120.0 / 14400.0);
  CHECK(9120.0 / 14400.0 <= rep.wilson95->hi);
  CHECK(rep.class_c == "G");
}

TEST_CASE("class population sampling") {
  const GroupSpec sl2_5 = GroupSpec::parse("SL2", 5);
  const FiniteField& F = sl2_5.field();
  const ClassSpec c4 = make_class(sl2_5, Matrix::from_rows(F, {{0, 1}, {4, 0}}), "4A");
  const ClassSpec c3 = make_class(sl2_5, Matrix::from_rows(F, {{0, 1}, {4, 4}}), "3A");
  const EstimateReport rep = monte_carlo_P(sl2_5, Population::classes(c4, c3), 8000, 3);
  CHECK(rep.class_c == "4A");
  CHECK(rep.r == std::optional<u64>(4));
  REQUIRE(rep.wilson95);
  CHECK(rep.wilson95->lo <= 0.4);
  CHECK(0.4 <= rep.wilson95->hi);
}

TEST_CASE("subfield trace decay") {
  // Exhaustive commutator traces in SL2(4): 2040 of 3600 pairs lie in F2.
  const auto rows = subfield_trace_decay(2, {2, 4, 6}, "xyXY", 20000, 5);
  REQUIRE(rows.size() == 3);
  const double p = 2040.0 / 3600.0;
  const double half = 3 * std::sqrt(p * (1 - p) / 20000.0);
  CHECK(std::abs(rows[0].fraction - p) < half);
  CHECK(rows[0].fraction > rows[1].fraction);
  CHECK(rows[1].fraction > rows[2].fraction);
  for (const auto& r : rows) {
    CHECK(r.hits == static_cast<u64>(std::llround(r.fraction * 20000)));
    CHECK(r.scaled == doctest::Approx(r.fraction * std::sqrt(static_cast<double>(r.q))));
  }
  CHECK(rows[2].q == 64);

  const auto trivial = subfield_trace_decay(3, {2}, "", 100, 1);
  CHECK(trivial[0].fraction == 1.0);
  CHECK_THROWS_AS(subfield_trace_decay(2, {1}, "xy", 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(subfield_trace_decay(2, {2}, "xz", 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(subfield_trace_decay(2, {2}, "xy", 0, 1), std::invalid_argument);
  CHECK(subfield_trace_decay(2, {2}, "xyXY", 2000, 5, 1)[0].hits ==
        subfield_trace_decay(2, {2}, "xyXY", 2000, 5, 4)[0].hits);
}

TEST_CASE("sweep rows") {
  SweepSpec s;
  s.name = "t";
  s.family = "PSL2";
  s.qs = {5, 7};
  s.trials = 500;
  s.seed = 11;
  const auto mc = sweep(s);
  REQUIRE(mc.size() == 2);
  for (const auto& rep : mc) {
    CHECK(rep.seed == std::optional<u64>(derive_seed(11, rep.spec.field().order(), "t")));
    CHECK(rep.tally.total() == 500);
  }
  s.exact = true;
  const auto ex = sweep(s);
  CHECK(ex[0].mode == Mode::Exact);
  CHECK(ex[0].tally.generates == 120);
  CHECK(ex[1].tally.generates == 336);
  CHECK_FALSE(ex[1].seed);
}
