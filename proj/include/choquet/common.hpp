#ifndef CHOQUET_COMMON_HPP
#define CHOQUET_COMMON_HPP

// Shared numeric utilities: compensated summation, golden-section search,
// ball measure constants, deterministic double formatting, and a small
// thread pool helper controlled by the CHOQUET_THREADS environment variable.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace choquet {

inline constexpr int kMaxDim = 6;

// Fixed-capacity coordinate tuple; entries beyond the active dimension are zero.
using Coords = std::array<std::int32_t, kMaxDim>;
using Vec = std::array<double, kMaxDim>;

// Kahan compensated accumulator. Cover costs are sums of many terms spanning
// wide magnitude ranges, so plain summation loses the low bits we later
// compare against 1e-14 tolerances.
class KahanSum {
 public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double sqr(double x) { return x * x; }

// Lebesgue measure of the unit ball in R^n.
inline double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

// Surface measure of the unit sphere S^{n-1}.
inline double unit_sphere_measure(int n) { return n * unit_ball_volume(n); }

inline double dist2(const Vec& a, const Vec& b, int n) {
  double d = 0.0;
  for (int i = 0; i < n; ++i) d += sqr(a[i] - b[i]);
  return d;
}

inline double dist(const Vec& a, const Vec& b, int n) { return std::sqrt(dist2(a, b, n)); }

// Deterministic shortest-exact text form of a double; round-trips bit-exactly.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

// Golden-section minimizer on [a, b]; assumes a unimodal objective but is
// safe (still converges to a local minimum) when that fails. Returns argmin.
template <class F>
double golden_section_min(F&& f, double a, double b, int iterations = 48) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < iterations; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

template <class F>
double golden_section_max(F&& f, double a, double b, int iterations = 48) {
  return golden_section_min([&](double x) { return -f(x); }, a, b, iterations);
}

// Worker count: CHOQUET_THREADS when set (clamped to [1, 256]), otherwise the
// hardware concurrency.
inline int worker_count() {
  if (const char* env = std::getenv("CHOQUET_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<int>(std::min(v, 256L));
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs body(i) for i in [0, count). Work is split into contiguous blocks so
// results land in disjoint output ranges; the partition does not affect any
// computed value.
template <class F>
void parallel_for(std::size_t count, F&& body) {
  int threads = worker_count();
  if (threads <= 1 || count < 2048) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::size_t blocks = std::min<std::size_t>(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(blocks);
  std::size_t chunk = (count + blocks - 1) / blocks;
  for (std::size_t b = 0; b < blocks; ++b) {
    std::size_t lo = b * chunk;
    std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body]() {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace choquet

#endif
