// Serial vs OpenMP timings for the batched kernels and the JC sweep.
//
//   bench_kernels [--quick] [--workers N]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include <omp.h>

#include "qsl/distances_bounds.hpp"
#include "qsl/sweep.hpp"

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same(const qsl::BatchSummary& a, const qsl::BatchSummary& b) {
  return a.samples == b.samples && a.violations == b.violations && a.worst_margin == b.worst_margin;
}

bool same(const std::vector<qsl::SweepRow>& a, const std::vector<qsl::SweepRow>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].report.info_rate_exact != b[i].report.info_rate_exact) return false;
    if (a[i].speed.lambda_tau != b[i].speed.lambda_tau) return false;
    if (!(a[i].report.flags == b[i].report.flags)) return false;
  }
  return true;
}

void report(const char* name, double serial, double parallel, int workers, bool match) {
  std::printf("%-22s serial %8.3f s   parallel(%d) %8.3f s   speedup %5.2fx   %s\n", name, serial, workers, parallel,
              serial / parallel, match ? "match" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = false;
  int workers = omp_get_max_threads();
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) {
      quick = true;
    } else if (std::strcmp(argv[i], "--workers") == 0 && i + 1 < argc) {
      workers = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--quick] [--workers N]\n", argv[0]);
      return 2;
    }
  }
  if (workers < 1) workers = 1;
  bool ok = true;

  {
    const std::size_t n = quick ? 2000 : 100000;
    qsl::BatchSummary s, p;
    const double ts = seconds([&] { s = qsl::fannes_batch_serial(7, n, 2, 8); });
    const double tp = seconds([&] { p = qsl::fannes_batch(7, n, 2, 8, workers); });
    report("fannes_batch", ts, tp, workers, same(s, p));
    ok = ok && same(s, p);
  }
  {
    const std::size_t n = quick ? 2000 : 200000;
    qsl::BatchSummary s, p;
    const double ts = seconds([&] { s = qsl::wasserstein_order_batch_serial(11, n, 16); });
    const double tp = seconds([&] { p = qsl::wasserstein_order_batch(11, n, 16, workers); });
    report("wasserstein_batch", ts, tp, workers, same(s, p));
    ok = ok && same(s, p);
  }
  {
    qsl::SweepConfig cfg;
    if (quick) {
      cfg.gamma0_grid = {0.05, 5.0, 6};
      cfg.steps = 500;
    }
    std::vector<qsl::SweepRow> s, p;
    const double ts = seconds([&] { s = qsl::run_jc_sweep_serial(cfg); });
    const double tp = seconds([&] { p = qsl::run_jc_sweep(cfg, workers); });
    report("jc_sweep", ts, tp, workers, same(s, p));
    ok = ok && same(s, p);
  }
  return ok ? 0 : 1;
}
