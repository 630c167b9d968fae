// Serial reference paths against the OpenMP kernels.
//   genprob_bench [trials]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "genprob/estimate.hpp"

using namespace genprob;

namespace {

double seconds(const std::function<void()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, double serial_s, double parallel_s, bool same) {
  std::printf("%-34s %10.3f %10.3f %8.2fx  %s\n", name, serial_s, parallel_s, serial_s / parallel_s,
              same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const u64 trials = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 50'000;
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-34s %10s %10s %9s\n", "kernel", "serial s", "openmp s", "speedup");

  {
    const GroupSpec spec = GroupSpec::parse("SL2", 101);
    EstimateReport a(spec), b(spec);
    const double s = seconds([&] { a = serial::monte_carlo_P(spec, Population::whole_group(), trials, 1); });
    const double p = seconds([&] { b = monte_carlo_P(spec, Population::whole_group(), trials, 1); });
    row("monte carlo SL2(101) whole group", s, p, a.tally == b.tally);
  }
  {
    const GroupSpec spec = GroupSpec::parse("PSp4", 5);
    EstimateReport a(spec), b(spec);
    const u64 n = trials / 25;
    const double s = seconds([&] { a = serial::monte_carlo_P(spec, Population::orders(2, 3), n, 1); });
    const double p = seconds([&] { b = monte_carlo_P(spec, Population::orders(2, 3), n, 1); });
    row("monte carlo PSp4(5) (2,3)", s, p, a.tally == b.tally);
  }
  {
    const GroupSpec spec = GroupSpec::parse("PSL2", 31);
    ExactResult a(spec, {}, {}, "", ""), b = a;
    const double s = seconds([&] { a = serial::exact_P(spec, 2, 3); });
    const double p = seconds([&] { b = exact_P(spec, 2, 3); });
    row("exact PSL2(31) (2,3)", s, p, a.tally == b.tally);
  }
  {
    const GroupSpec spec = GroupSpec::parse("PSp4", 3);
    ExactResult a(spec, {}, {}, "", ""), b = a;
    const double s = seconds([&] { a = serial::exact_P(spec, 2, 3); });
    const double p = seconds([&] { b = exact_P(spec, 2, 3); });
    row("exact PSp4(3) (2,3)", s, p, a.tally == b.tally);
  }
  return 0;
}
