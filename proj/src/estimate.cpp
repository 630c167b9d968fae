#include "genprob/estimate.hpp"

#include <omp.h>

#include <cmath>
#include <exception>
#include <mutex>

namespace genprob {

void Tally::add(const GenVerdict& v, u64 weight) {
  switch (v.outcome) {
    case Outcome::Generates: generates += weight; return;
    case Outcome::Inconclusive: inconclusive += weight; return;
    case Outcome::Proper: break;
  }
  switch (v.witness.kind) {
    case WitnessKind::Reducible:
    case WitnessKind::Borel: proper_reducible += weight; break;
    case WitnessKind::SubfieldDegree: proper_subfield += weight; break;
    default: proper_other += weight; break;
  }
}

Tally& Tally::operator+=(const Tally& o) {
  generates += o.generates;
  proper_reducible += o.proper_reducible;
  proper_subfield += o.proper_subfield;
  proper_other += o.proper_other;
  inconclusive += o.inconclusive;
  return *this;
}

Interval wilson_interval(u64 k, u64 n, double z) {
  if (n == 0) return {0, 1};
  const double nn = static_cast<double>(n);
  const double phat = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1 + z2 / nn;
  const double center = (phat + z2 / (2 * nn)) / denom;
  const double half = z / denom * std::sqrt(phat * (1 - phat) / nn + z2 / (4 * nn * nn));
  // The endpoints are exactly 0 and 1 at the extremes; avoid rounding residue.
  return {k == 0 ? 0.0 : std::max(0.0, center - half), k == n ? 1.0 : std::min(1.0, center + half)};
}

std::string Population::label_c() const {
  switch (kind) {
    case Kind::WholeGroup: return "G";
    case Kind::Orders: return "ord" + std::to_string(r);
    case Kind::Classes: return c->label;
  }
  return "";
}

std::string Population::label_d() const {
  switch (kind) {
    case Kind::WholeGroup: return "G";
    case Kind::Orders: return "ord" + std::to_string(s);
    case Kind::Classes: return d->label;
  }
  return "";
}

double EstimateReport::optimistic() const {
  return trials == 0 ? 0.0 : static_cast<double>(tally.generates + tally.inconclusive) / static_cast<double>(trials);
}

double EstimateReport::pessimistic() const {
  return trials == 0 ? 0.0 : static_cast<double>(tally.generates) / static_cast<double>(trials);
}

EstimateReport ExactResult::to_report() const {
  EstimateReport rep{spec};
  rep.mode = Mode::Exact;
  rep.r = r;
  rep.s = s;
  rep.class_c = class_c;
  rep.class_d = class_d;
  rep.trials = denominator;
  rep.tally = tally;
  rep.point = value();
  return rep;
}

// ------------------------------------------------------------------ exact

namespace {

u64 checked_product(u64 a, u64 b) {
  if (a != 0 && b > UINT64_MAX / a) throw OverflowError("pair count exceeds 64 bits");
  return a * b;
}

struct WeightedRep {
  Matrix rep;
  u64 weight;
};

// Runs the closure test for (x, candidates[i]) and adds weighted verdicts.
Tally exact_kernel(const GroupSpec& spec, const std::vector<WeightedRep>& xs,
                   const std::vector<Matrix>& candidates, bool parallel) {
  Tally total;
  std::vector<GenVerdict> verdicts(candidates.size());
  for (const auto& x : xs) {
    const auto n = static_cast<std::int64_t>(candidates.size());
    std::exception_ptr error;
    std::mutex error_mutex;
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        const std::array<Matrix, 2> pair{x.rep, candidates[static_cast<std::size_t>(i)]};
        verdicts[static_cast<std::size_t>(i)] = closure_generation(spec, pair);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
    for (const auto& v : verdicts) total.add(v, x.weight);
  }
  return total;
}

ExactResult exact_orders(const GroupSpec& spec, u64 r, u64 s, u64 cap, bool parallel) {
  const ElementTable group = enumerate_group(spec, cap);
  const ClassPartition cr = partition_order(spec, group, r);
  const ClassPartition cs = r == s ? cr : partition_order(spec, group, s);
  ExactResult res{spec, r, s, "ord" + std::to_string(r), "ord" + std::to_string(s)};
  res.method = "closure/class-representatives";
  if (cr.count == 0 || cs.count == 0) return res;
  std::vector<WeightedRep> xs;
  for (const auto& cls : cr.classes) xs.push_back({cls.representative, cls.members.size()});
  std::vector<Matrix> ys;
  ys.reserve(cs.count);
  for (const auto& cls : cs.classes)
    for (auto idx : cls.members) ys.push_back(group.at(idx));
  res.tally = exact_kernel(spec, xs, ys, parallel);
  res.numerator = res.tally.generates;
  res.denominator = checked_product(cr.count, cs.count);
  return res;
}

}  // namespace

ExactResult exact_P(const GroupSpec& spec, u64 r, u64 s, u64 cap) { return exact_orders(spec, r, s, cap, true); }

ExactResult exact_P_classes(const GroupSpec& spec, const ClassSpec& c, const ClassSpec& d, u64 cap) {
  const ElementTable orbit_c = class_orbit(spec, c.representative, cap);
  const ElementTable orbit_d = class_orbit(spec, d.representative, cap);
  std::vector<Matrix> ys;
  ys.reserve(orbit_d.size());
  for (std::size_t i = 0; i < orbit_d.size(); ++i) ys.push_back(orbit_d.at(i));
  ExactResult res{spec, c.order, d.order, c.label, d.label};
  res.method = "closure/class-representatives";
  res.tally = exact_kernel(spec, {{spec.canonical(c.representative), orbit_c.size()}}, ys, true);
  res.numerator = res.tally.generates;
  res.denominator = checked_product(orbit_c.size(), orbit_d.size());
  return res;
}

ExactResult exact_P_group(const GroupSpec& spec, u64 cap) {
  const ElementTable group = enumerate_group(spec, cap);
  std::vector<Matrix> all;
  all.reserve(group.size());
  for (std::size_t i = 0; i < group.size(); ++i) all.push_back(group.at(i));
  // Class representatives of every element, by conjugation orbits.
  std::vector<WeightedRep> xs;
  std::vector<std::uint8_t> seen(group.size(), 0);
  const auto gens = spec.standard_generators();
  std::vector<Matrix> gens_inv;
  for (const auto& g : gens) gens_inv.push_back(g.inverse());
  for (std::size_t i = 0; i < group.size(); ++i) {
    if (seen[i]) continue;
    std::vector<std::size_t> orbit{i};
    seen[i] = 1;
    for (std::size_t h = 0; h < orbit.size(); ++h) {
      for (std::size_t k = 0; k < gens.size(); ++k) {
        const auto j = group.find(spec.canonical(gens_inv[k] * all[orbit[h]] * gens[k]));
        if (j && !seen[*j]) {
          seen[*j] = 1;
          orbit.push_back(*j);
        }
      }
    }
    xs.push_back({all[i], orbit.size()});
  }
  ExactResult res{spec, std::nullopt, std::nullopt, "G", "G"};
  res.method = "closure/class-representatives";
  res.tally = exact_kernel(spec, xs, all, true);
  res.numerator = res.tally.generates;
  res.denominator = checked_product(group.size(), group.size());
  return res;
}

// ------------------------------------------------------------ Monte Carlo

namespace {

u64 block_seed(u64 seed, u64 block) { return splitmix64(seed ^ splitmix64(block + 1)); }

struct Samplers {
  std::optional<OrderSampler> r, s;
};

std::array<Matrix, 2> draw_pair(const GroupSpec& spec, const Population& pop, const Samplers& smp, Rng& rng) {
  switch (pop.kind) {
    case Population::Kind::WholeGroup: {
      Matrix x = sample_uniform(spec, rng);
      return {x, sample_uniform(spec, rng)};
    }
    case Population::Kind::Orders: {
      Matrix x = smp.r->sample(rng);
      return {x, smp.s->sample(rng)};
    }
    case Population::Kind::Classes: {
      Matrix x = sample_class(*pop.c, rng);
      return {x, sample_class(*pop.d, rng)};
    }
  }
  return {};
}

Tally mc_block(const GroupSpec& spec, const Population& pop, const Samplers& smp, u64 block, u64 n, u64 seed,
               const Budget& budget) {
  Rng rng(block_seed(seed, block));
  Tally t;
  for (u64 i = 0; i < n; ++i) {
    const auto pair = draw_pair(spec, pop, smp, rng);
    t.add(generation_verdict(spec, pair, budget));
  }
  return t;
}

// Runs body(b) for each block, in parallel or not; integer tallies are
// summed in block order afterwards.
template <class Body>
std::vector<Tally> run_blocks(u64 blocks, bool parallel, int threads, Body body) {
  std::vector<Tally> out(blocks);
  const int nt = threads > 0 ? threads : omp_get_max_threads();
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto n = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt) if (parallel)
  for (std::int64_t b = 0; b < n; ++b) {
    try {
      out[static_cast<std::size_t>(b)] = body(static_cast<u64>(b));
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

void check_population(const GroupSpec& spec, const Population& pop) {
  if (pop.kind == Population::Kind::Classes) {
    if (!pop.c || !pop.d) throw std::invalid_argument("class population needs two classes");
    if (pop.c->group.name() != spec.name() || pop.d->group.name() != spec.name()) {
      throw std::invalid_argument("classes belong to a different group");
    }
  }
  if (pop.kind == Population::Kind::Orders && (pop.r == 0 || pop.s == 0)) {
    throw std::invalid_argument("element orders must be positive");
  }
}

EstimateReport mc_run(const GroupSpec& spec, const Population& pop, u64 trials, u64 seed, const Budget& budget,
                      bool parallel, int threads) {
  if (trials == 0) throw std::invalid_argument("trials must be at least 1");
  check_population(spec, pop);
  Samplers smp;
  if (pop.kind == Population::Kind::Orders) {
    smp.r.emplace(spec, pop.r);
    smp.s.emplace(spec, pop.s);
    for (const auto* o : {&*smp.r, &*smp.s}) {
      if (o->empty()) throw std::invalid_argument(spec.name() + " has no elements of the requested order");
    }
  }
  const u64 blocks = (trials + kBlockTrials - 1) / kBlockTrials;
  const auto tallies = run_blocks(blocks, parallel, threads, [&](u64 b) {
    const u64 n = std::min(kBlockTrials, trials - b * kBlockTrials);
    return mc_block(spec, pop, smp, b, n, seed, budget);
  });
  EstimateReport rep{spec};
  rep.mode = Mode::MonteCarlo;
  if (pop.kind == Population::Kind::Orders) {
    rep.r = pop.r;
    rep.s = pop.s;
  } else if (pop.kind == Population::Kind::Classes) {
    rep.r = pop.c->order;
    rep.s = pop.d->order;
  }
  rep.class_c = pop.label_c();
  rep.class_d = pop.label_d();
  rep.trials = trials;
  for (const auto& t : tallies) rep.tally += t;
  rep.point = static_cast<double>(rep.tally.generates) / static_cast<double>(trials);
  rep.wilson95 = wilson_interval(rep.tally.generates, trials);
  rep.seed = seed;
  return rep;
}

}  // namespace

EstimateReport monte_carlo_P(const GroupSpec& spec, const Population& pop, u64 trials, u64 seed,
                             const Budget& budget, int threads) {
  return mc_run(spec, pop, trials, seed, budget, true, threads);
}

// ------------------------------------------------------------------ decay

std::vector<DecayRow> subfield_trace_decay(u64 p, const std::vector<int>& degrees, const std::string& word,
                                           u64 trials, u64 seed, int threads) {
  if (trials == 0) throw std::invalid_argument("trials must be at least 1");
  for (char c : word) {
    if (c != 'x' && c != 'y' && c != 'X' && c != 'Y') throw std::invalid_argument("word letters must be x, y, X, Y");
  }
  std::vector<DecayRow> rows;
  for (int a : degrees) {
    if (a < 2) throw std::invalid_argument("degree " + std::to_string(a) + " has no proper subfield");
    const GroupSpec spec(Family::SL2, FiniteField::construct(p, a), false);
    const FiniteField& f = spec.field();
    const u64 sub_seed = derive_seed(seed, f.order(), "decay:" + word);
    const u64 blocks = (trials + kBlockTrials - 1) / kBlockTrials;
    const auto tallies = run_blocks(blocks, true, threads, [&](u64 b) {
      Rng rng(block_seed(sub_seed, b));
      const u64 n = std::min(kBlockTrials, trials - b * kBlockTrials);
      Tally t;
      for (u64 i = 0; i < n; ++i) {
        const Matrix x = sample_uniform(spec, rng);
        const Matrix y = sample_uniform(spec, rng);
        if (f.minimal_degree(evaluate_word(word, x, y).trace()) < a) ++t.generates;
      }
      return t;
    });
    DecayRow row;
    row.p = p;
    row.a = a;
    row.q = f.order();
    row.word = word;
    row.trials = trials;
    for (const auto& t : tallies) row.hits += t.generates;
    row.fraction = static_cast<double>(row.hits) / static_cast<double>(trials);
    row.scaled = row.fraction * std::sqrt(static_cast<double>(f.order()));
    rows.push_back(row);
  }
  return rows;
}

// ------------------------------------------------------------------ sweep

std::vector<EstimateReport> sweep(const SweepSpec& sw) {
  std::vector<EstimateReport> out;
  for (u64 q : sw.qs) {
    const GroupSpec spec = GroupSpec::parse(sw.family, q);
    if (sw.exact) {
      out.push_back((sw.whole_group ? exact_P_group(spec, sw.cap) : exact_P(spec, sw.r, sw.s, sw.cap)).to_report());
    } else {
      const Population pop = sw.whole_group ? Population::whole_group() : Population::orders(sw.r, sw.s);
      out.push_back(monte_carlo_P(spec, pop, sw.trials, derive_seed(sw.seed, q, sw.name), sw.budget, sw.threads));
    }
  }
  return out;
}

namespace serial {

EstimateReport monte_carlo_P(const GroupSpec& spec, const Population& pop, u64 trials, u64 seed,
                             const Budget& budget) {
  return mc_run(spec, pop, trials, seed, budget, false, 1);
}

ExactResult exact_P(const GroupSpec& spec, u64 r, u64 s, u64 cap) { return exact_orders(spec, r, s, cap, false); }

}  // namespace serial

}  // namespace genprob
