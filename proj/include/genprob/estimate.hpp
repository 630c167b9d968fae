#pragma once

// Exact and Monte Carlo generation probabilities.
//
// Monte Carlo trials are cut into fixed blocks of kBlockTrials; block b
// draws from its own stream seeded by splitmix64(seed ^ splitmix64(b + 1)).
// Blocks are independent and their tallies are integer sums, so any thread
// count (including the serial reference path) gives identical reports.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "genprob/gentest.hpp"
#include "genprob/matgrp.hpp"

namespace genprob {

inline constexpr u64 kBlockTrials = 256;
inline constexpr double kWilsonZ95 = 1.959963984540054;

struct Tally {
  u64 generates = 0;
  u64 proper_reducible = 0;  // Reducible and Borel witnesses
  u64 proper_subfield = 0;
  u64 proper_other = 0;      // dihedral, exceptional, closure size
  u64 inconclusive = 0;

  void add(const GenVerdict& v, u64 weight = 1);
  u64 proper() const { return proper_reducible + proper_subfield + proper_other; }
  u64 total() const { return generates + proper() + inconclusive; }
  Tally& operator+=(const Tally& o);
  friend bool operator==(const Tally&, const Tally&) = default;
};

struct Interval {
  double lo = 0;
  double hi = 0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Wilson score interval for k successes in n trials.
Interval wilson_interval(u64 k, u64 n, double z = kWilsonZ95);

/// Which pairs are drawn: the whole group, all elements of orders (r, s), or
/// two conjugacy classes.
struct Population {
  enum class Kind { WholeGroup, Orders, Classes };
  Kind kind = Kind::WholeGroup;
  u64 r = 0, s = 0;
  std::optional<ClassSpec> c, d;

  static Population whole_group() { return {}; }
  static Population orders(u64 r, u64 s) { return {Kind::Orders, r, s, std::nullopt, std::nullopt}; }
  static Population classes(ClassSpec c, ClassSpec d) { return {Kind::Classes, 0, 0, std::move(c), std::move(d)}; }

  /// CSV labels: "G", "ord<r>", or the class label.
  std::string label_c() const;
  std::string label_d() const;
};

enum class Mode { Exact, MonteCarlo };

struct EstimateReport {
  explicit EstimateReport(GroupSpec g) : spec(std::move(g)) {}

  GroupSpec spec;
  Mode mode = Mode::MonteCarlo;
  std::optional<u64> r, s;
  std::string class_c, class_d;
  u64 trials = 0;  // denominator for exact rows
  Tally tally;     // generates is the numerator for exact rows
  double point = 0;
  std::optional<Interval> wilson95;  // absent for exact rows
  std::optional<u64> seed;           // absent for exact rows

  /// Inconclusive counted as generating / as proper.
  double optimistic() const;
  double pessimistic() const;
};

struct ExactResult {
  ExactResult(GroupSpec g, std::optional<u64> r_, std::optional<u64> s_, std::string c, std::string d)
      : spec(std::move(g)), r(r_), s(s_), class_c(std::move(c)), class_d(std::move(d)) {}

  GroupSpec spec;
  std::optional<u64> r, s;
  std::string class_c, class_d;
  u64 numerator = 0;
  u64 denominator = 0;  // |C||D| (or |G|^2); 0 when a class is empty
  Tally tally;          // weighted verdicts, sums to denominator
  std::string method;

  double value() const { return denominator == 0 ? 0.0 : static_cast<double>(numerator) / static_cast<double>(denominator); }
  bool empty_class() const { return denominator == 0; }
  EstimateReport to_report() const;
};

/// Proportion of generating pairs among all (x, y) with |x| = r, |y| = s.
/// One representative per class of x; every y tested by closure.
ExactResult exact_P(const GroupSpec& spec, u64 r, u64 s, u64 cap = 10'000'000);
/// Proportion of generating pairs in C x D; |D| closure tests.
ExactResult exact_P_classes(const GroupSpec& spec, const ClassSpec& c, const ClassSpec& d, u64 cap = 10'000'000);
/// Proportion of generating pairs among all of G x G.
ExactResult exact_P_group(const GroupSpec& spec, u64 cap = 10'000'000);

/// threads = 0 leaves the OpenMP default in place.
EstimateReport monte_carlo_P(const GroupSpec& spec, const Population& pop, u64 trials, u64 seed,
                             const Budget& budget = {}, int threads = 0);

struct DecayRow {
  u64 p = 0;
  int a = 0;
  u64 q = 0;
  std::string word;
  u64 trials = 0;
  u64 hits = 0;  // pairs whose word trace lies in a proper subfield
  double fraction = 0;
  double scaled = 0;  // fraction * q^(1/2)
};

/// For each a: fraction of uniform pairs in SL2(p^a)^2 with the trace of
/// word(x, y) in a proper subfield. Sub-seed per a from derive_seed.
std::vector<DecayRow> subfield_trace_decay(u64 p, const std::vector<int>& degrees, const std::string& word,
                                           u64 trials, u64 seed, int threads = 0);

struct SweepSpec {
  std::string name = "sweep";
  std::string family;
  std::vector<u64> qs;
  bool exact = false;
  bool whole_group = false;
  u64 r = 2, s = 3;
  u64 trials = 10'000;
  u64 seed = 0;
  u64 cap = 10'000'000;
  Budget budget;
  int threads = 0;
};

/// One report per q; Monte Carlo rows use derive_seed(seed, q, name).
std::vector<EstimateReport> sweep(const SweepSpec& spec);

namespace serial {

// Single-threaded reference paths; same blocks, same results.
EstimateReport monte_carlo_P(const GroupSpec& spec, const Population& pop, u64 trials, u64 seed,
                             const Budget& budget = {});
ExactResult exact_P(const GroupSpec& spec, u64 r, u64 s, u64 cap = 10'000'000);

}  // namespace serial

}  // namespace genprob
