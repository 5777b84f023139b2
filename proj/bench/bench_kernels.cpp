// Serial reference vs OpenMP kernels: timing and bitwise agreement.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <omp.h>

#include "dws/instance.hpp"
#include "dws/linalg.hpp"

namespace {

double best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt < best) best = dt;
  }
  return best;
}

bool same_bits(const dws::Vec& a, const dws::Vec& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 4000;
  const std::size_t s = n / 100 > 0 ? n / 100 : 1;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 20;

  dws::GeneratorConfig cfg;
  cfg.n = n;
  cfg.s = s;
  cfg.seed = 7;
  const dws::Instance inst = dws::generate(cfg);
  const auto& a = inst.a;
  dws::Vec x(n, 0.0);
  for (std::size_t j = 0; j < n; j += 7) x[j] = (j % 2 ? 1.0 : -1.0) * 0.25;
  const dws::IndexList supp = dws::support(x);
  const dws::Vec atb = inst.atb();

  std::printf("k=%zu n=%zu threads=%d reps=%d\n", a.rows(), a.cols(), omp_get_max_threads(), reps);
  std::printf("%-16s %12s %12s %8s %s\n", "kernel", "serial_ms", "omp_ms", "speedup", "bitwise");

  bool all_same = true;
  auto row = [&](const char* name, const std::function<dws::Vec()>& ser,
                 const std::function<dws::Vec()>& par) {
    dws::Vec rs, rp;
    const double ts = best_of(reps, [&] { rs = ser(); });
    const double tp = best_of(reps, [&] { rp = par(); });
    const bool same = same_bits(rs, rp);
    all_same = all_same && same;
    std::printf("%-16s %12.4f %12.4f %8.2f %s\n", name, ts * 1e3, tp * 1e3, ts / tp,
                same ? "yes" : "NO");
  };

  row("matvec", [&] { return dws::serial::matvec(a, x); }, [&] { return dws::matvec(a, x); });
  row("matvec_t", [&] { return dws::serial::matvec_t(a, inst.b); },
      [&] { return dws::matvec_t(a, inst.b); });
  row("matvec_support", [&] { return dws::serial::matvec_support(a, x, supp); },
      [&] { return dws::matvec_support(a, x, supp); });
  row("gradient", [&] { return dws::serial::gradient(a, atb, x, supp); },
      [&] { return dws::gradient(a, atb, x, supp); });
  return all_same ? 0 : 1;
}
