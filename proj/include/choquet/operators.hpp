#ifndef CHOQUET_OPERATORS_HPP
#define CHOQUET_OPERATORS_HPP

// Discrete fractional operators on grid functions, with f extended by zero
// outside its grid.
//
// Fractional maximal operator (unnormalized):
//
//   M_k f(x) = sup_{r in radii} r^{k-n} sum_{|y-x| < r} f(y) h^n.
//
// Riesz-type sum of order beta in (0, n):
//
//   R_b f(x) = h^n sum_{y != x} f(y) |x-y|^{-beta} + f(x) * w_{n-1} rho^{n-b} / (n-b),
//
// where rho = h v_n^{-1/n} equalizes cell volume, so the self term is the
// kernel integral over a volume-matched ball. Distances run between cell
// centers; squared center distances are integers in units of h^2, which
// turns both kernels into table lookups.

#include <cstdint>
#include <limits>
#include <vector>

#include "choquet/grid.hpp"
#include "choquet/integral.hpp"

namespace choquet {

struct OperatorParams {
  double kappa = 0.0;
  double beta = 0.0;
  std::vector<double> radii;

  // Radii k*h up to the grid diameter, so the largest ball sees every cell.
  static OperatorParams with_default_radii(const GridGeometry& g, double kappa, double beta = 0.0) {
    OperatorParams p;
    p.kappa = kappa;
    p.beta = beta;
    double h = g.cell_side();
    int kmax = static_cast<int>(
        std::ceil(std::sqrt(static_cast<double>(g.dim())) * static_cast<double>(g.cells_per_axis())));
    p.radii.reserve(kmax);
    for (int k = 1; k <= kmax; ++k) p.radii.push_back(k * h);
    return p;
  }
};

namespace detail {

inline void validate_kappa(double kappa, int dim) {
  if (!(kappa >= 0.0) || !(kappa < static_cast<double>(dim)))
    throw std::domain_error("maximal order kappa must lie in [0, n)");
}

inline void validate_radii(const std::vector<double>& radii) {
  if (radii.empty()) throw std::domain_error("radius list must be nonempty");
  double prev = 0.0;
  for (double r : radii) {
    if (!(r > prev)) throw std::domain_error("radii must be positive and strictly increasing");
    prev = r;
  }
}

inline void validate_beta(double beta, int dim) {
  if (!(beta > 0.0) || !(beta < static_cast<double>(dim)))
    throw std::domain_error("Riesz order beta must lie in (0, n) to keep the kernel summable");
}

// Applies sink(d2, value) over every cell y, where d2 is the integer squared
// center distance to x in h^2 units. Tight loops for n = 2, 3; generic
// decode otherwise.
template <class Sink>
void scan_distances(const GridGeometry& g, const std::vector<double>& f, std::uint64_t x, Sink&& sink) {
  const int n = g.dim();
  const int L = g.level();
  const std::int64_t w = g.cells_per_axis();
  if (n == 2) {
    const std::int64_t x0 = static_cast<std::int64_t>(x) & (w - 1);
    const std::int64_t x1 = static_cast<std::int64_t>(x) >> L;
    for (std::int64_t y1 = 0; y1 < w; ++y1) {
      const std::int64_t dy2 = (y1 - x1) * (y1 - x1);
      const double* row = f.data() + (y1 << L);
      for (std::int64_t y0 = 0; y0 < w; ++y0) {
        const std::int64_t dx = y0 - x0;
        sink(dx * dx + dy2, row[y0]);
      }
    }
    return;
  }
  if (n == 3) {
    const std::int64_t x0 = static_cast<std::int64_t>(x) & (w - 1);
    const std::int64_t x1 = (static_cast<std::int64_t>(x) >> L) & (w - 1);
    const std::int64_t x2 = static_cast<std::int64_t>(x) >> (2 * L);
    for (std::int64_t y2 = 0; y2 < w; ++y2) {
      const std::int64_t dz2 = (y2 - x2) * (y2 - x2);
      for (std::int64_t y1 = 0; y1 < w; ++y1) {
        const std::int64_t dyz2 = (y1 - x1) * (y1 - x1) + dz2;
        const double* row = f.data() + ((y2 * w + y1) << L);
        for (std::int64_t y0 = 0; y0 < w; ++y0) {
          const std::int64_t dx = y0 - x0;
          sink(dx * dx + dyz2, row[y0]);
        }
      }
    }
    return;
  }
  const Coords xc = g.coords_of(x);
  for (std::uint64_t y = 0; y < f.size(); ++y) {
    Coords yc = g.coords_of(y);
    std::int64_t d2 = 0;
    for (int d = 0; d < n; ++d) {
      const std::int64_t dd = yc[d] - xc[d];
      d2 += dd * dd;
    }
    sink(d2, f[y]);
  }
}

// bin_of[d2] = index of the smallest listed radius whose open ball contains a
// point at squared center distance d2; radii.size() when none does.
inline std::vector<std::int32_t> radius_bins(const GridGeometry& g, const std::vector<double>& radii) {
  const double h = g.cell_side();
  const std::int64_t w = g.cells_per_axis() - 1;
  const std::int64_t d2max = g.dim() * w * w;
  std::vector<std::int32_t> bin(d2max + 1);
  std::int32_t k = 0;
  for (std::int64_t d2 = 0; d2 <= d2max; ++d2) {
    while (k < static_cast<std::int32_t>(radii.size()) &&
           static_cast<double>(d2) * h * h >= radii[k] * radii[k])
      ++k;
    bin[d2] = k;
  }
  return bin;
}

struct MaximalTables {
  std::vector<std::int32_t> bin;
  std::vector<double> factor;  // r^{kappa-n} * h^n per radius

  MaximalTables(const GridGeometry& g, const OperatorParams& p) {
    validate_kappa(p.kappa, g.dim());
    validate_radii(p.radii);
    bin = radius_bins(g, p.radii);
    const double hn = std::pow(g.cell_side(), g.dim());
    factor.resize(p.radii.size());
    for (std::size_t k = 0; k < p.radii.size(); ++k)
      factor[k] = std::pow(p.radii[k], p.kappa - g.dim()) * hn;
  }

  // Plain left-to-right bin accumulation keeps the operator exactly monotone
  // in f and exactly homogeneous under power-of-two scalings.
  double evaluate(const GridGeometry& g, const std::vector<double>& f, std::uint64_t x,
                  std::vector<double>& bins) const {
    bins.assign(factor.size() + 1, 0.0);
    const std::int32_t* b = bin.data();
    double* acc = bins.data();
    scan_distances(g, f, x, [b, acc](std::int64_t d2, double v) { acc[b[d2]] += v; });
    double cum = 0.0;
    double best = 0.0;
    for (std::size_t k = 0; k < factor.size(); ++k) {
      cum += bins[k];
      best = std::max(best, factor[k] * cum);
    }
    return best;
  }
};

struct RieszTables {
  std::vector<double> kernel;  // |x-y|^{-beta} by squared center distance; 0 at the origin
  double self_coefficient;

  RieszTables(const GridGeometry& g, double beta) {
    validate_beta(beta, g.dim());
    const int n = g.dim();
    const double h = g.cell_side();
    const std::int64_t w = g.cells_per_axis() - 1;
    const std::int64_t d2max = n * static_cast<std::int64_t>(w) * w;
    kernel.resize(d2max + 1);
    kernel[0] = 0.0;
    for (std::int64_t d2 = 1; d2 <= d2max; ++d2)
      kernel[d2] = std::pow(h * h * static_cast<double>(d2), -0.5 * beta);
    const double rho = h * std::pow(unit_ball_volume(n), -1.0 / n);
    self_coefficient = unit_sphere_measure(n) * std::pow(rho, n - beta) / (n - beta);
  }

  double evaluate(const GridGeometry& g, const std::vector<double>& f, std::uint64_t x) const {
    KahanSum sum;
    const double* k = kernel.data();
    scan_distances(g, f, x, [&sum, k](std::int64_t d2, double v) {
      if (v != 0.0) sum.add(v * k[d2]);
    });
    const double hn = std::pow(g.cell_side(), g.dim());
    return hn * sum.value() + f[x] * self_coefficient;
  }
};

}  // namespace detail

inline double fractional_maximal_at(const GridFunction& f, const OperatorParams& params, std::uint64_t x) {
  detail::MaximalTables tables(f.geometry(), params);
  std::vector<double> bins;
  return tables.evaluate(f.geometry(), f.values(), x, bins);
}

inline GridFunction fractional_maximal(const GridFunction& f, const OperatorParams& params) {
  const GridGeometry& g = f.geometry();
  detail::MaximalTables tables(g, params);
  std::vector<double> out(g.cell_count(), 0.0);
  parallel_for(g.cell_count(), [&](std::size_t x) {
    thread_local std::vector<double> bins;
    out[x] = tables.evaluate(g, f.values(), x, bins);
  });
  return GridFunction(g, set_complement(GridSet(g)), std::move(out));
}

inline double riesz_sum_at(const GridFunction& f, double beta, std::uint64_t x) {
  detail::RieszTables tables(f.geometry(), beta);
  return tables.evaluate(f.geometry(), f.values(), x);
}

inline GridFunction riesz_sum(const GridFunction& f, double beta) {
  const GridGeometry& g = f.geometry();
  detail::RieszTables tables(g, beta);
  std::vector<double> out(g.cell_count(), 0.0);
  parallel_for(g.cell_count(), [&](std::size_t x) { out[x] = tables.evaluate(g, f.values(), x); });
  return GridFunction(g, set_complement(GridSet(g)), std::move(out));
}

// Maximal-function bound: for p in (delta/n, delta/kappa), with delta/0
// read as infinity,
//
//   I_{delta - kappa p}((M_k f)^p) <= c * I_delta(f^p).
//
// The checker reports the per-function and supremum empirical ratios; the
// constant is not pinned, so the meaningful assertions are finiteness and
// stability under refinement. Setting quantize_levels > 0 swaps the exact
// layer cake for the bracketing quadrature (midpoint), which keeps large
// grids affordable without moving ratios materially.
struct AdamsReport {
  double delta = 0.0;
  double kappa = 0.0;
  double p = 0.0;
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<double> ratio;
  double sup_ratio = 0.0;
  bool finite = true;
};

namespace detail {

inline double integral_maybe_quantized(const GridFunction& f, double p, double delta, int quantize_levels) {
  if (quantize_levels > 0) {
    GridFunction fp = p == 1.0 ? f : f.pointwise_power(p);
    return choquet_integral_quantized(fp, delta, quantize_levels).midpoint();
  }
  return choquet_integral_power(f, p, delta).integral.value;
}

}  // namespace detail

inline AdamsReport check_adams_bound(const std::vector<GridFunction>& family, double delta, double kappa,
                                     double p, int quantize_levels = 0) {
  if (family.empty()) throw std::invalid_argument("Adams check needs at least one function");
  const GridGeometry& g = family.front().geometry();
  for (const GridFunction& f : family)
    if (f.geometry() != g) throw std::invalid_argument("grid geometry mismatch");
  detail::validate_delta(delta, g.dim());
  detail::validate_kappa(kappa, g.dim());
  // Open interval delta/n < p < delta/kappa, compared cross-multiplied.
  if (!(p * g.dim() > delta) || (kappa > 0.0 && !(p * kappa < delta)))
    throw std::domain_error("integrability exponent p must lie in (delta/n, delta/kappa)");

  AdamsReport rep;
  rep.delta = delta;
  rep.kappa = kappa;
  rep.p = p;
  OperatorParams params = OperatorParams::with_default_radii(g, kappa);
  detail::MaximalTables tables(g, params);
  for (const GridFunction& f : family) {
    std::vector<double> mf(g.cell_count(), 0.0);
    parallel_for(g.cell_count(), [&](std::size_t x) {
      thread_local std::vector<double> bins;
      mf[x] = tables.evaluate(g, f.values(), x, bins);
    });
    GridFunction m(g, set_complement(GridSet(g)), std::move(mf));
    double lhs = detail::integral_maybe_quantized(m, p, delta - kappa * p, quantize_levels);
    double rhs = detail::integral_maybe_quantized(f, p, delta, quantize_levels);
    double ratio = 0.0;
    if (rhs > 0.0) {
      ratio = lhs / rhs;
    } else if (lhs > 0.0) {
      rep.finite = false;
      ratio = std::numeric_limits<double>::infinity();
    }
    rep.lhs.push_back(lhs);
    rep.rhs.push_back(rhs);
    rep.ratio.push_back(ratio);
    rep.sup_ratio = std::max(rep.sup_ratio, ratio);
  }
  return rep;
}

// Kernel/maximal split: with beta = s(n-1), A = n - kappa - beta > 0, norm
// N = I_delta(f^p), and p in [delta/n, delta/(n - beta)),
//
//   R_b f(x) <= c * (M_k f(x))^{1 - pA/(delta - kappa p)} * N^{A/(delta - kappa p)}.
//
// The exponent pair is continuous down to p = delta/n, where the maximal
// exponent becomes beta/(n - kappa).
struct HedbergReport {
  double delta = 0.0;
  double s = 0.0;
  double p = 0.0;
  double kappa = 0.0;
  double beta = 0.0;
  double exponent_maximal = 0.0;
  double exponent_norm = 0.0;
  double norm = 0.0;
  double max_ratio = 0.0;
  bool finite = true;
};

inline HedbergReport check_hedberg_split(const GridFunction& f, double delta, double s, double p,
                                         double kappa, double guard = 1e-14) {
  const GridGeometry& g = f.geometry();
  const int n = g.dim();
  detail::validate_delta(delta, n);
  if (!(s >= 1.0) || !(s * (n - 1) < n))
    throw std::domain_error("spire exponent s must lie in [1, n/(n-1))");
  const double beta = s * (n - 1);
  if (!(kappa >= 0.0) || !(kappa < n - beta))
    throw std::domain_error("maximal order kappa must lie in [0, n - s(n-1))");
  if (!(p * n >= delta) || !(p * (n - beta) < delta))
    throw std::domain_error("integrability exponent p must lie in [delta/n, delta/(n - s(n-1)))");

  HedbergReport rep;
  rep.delta = delta;
  rep.s = s;
  rep.p = p;
  rep.kappa = kappa;
  rep.beta = beta;
  const double A = n - kappa - beta;
  rep.exponent_norm = A / (delta - kappa * p);
  rep.exponent_maximal = 1.0 - p * rep.exponent_norm;
  rep.norm = choquet_integral_power(f, p, delta).integral.value;

  GridFunction rf = riesz_sum(f, beta);
  GridFunction mf = fractional_maximal(f, OperatorParams::with_default_radii(g, kappa));
  const double norm_part = std::pow(rep.norm, rep.exponent_norm);
  for (std::uint64_t x = 0; x < g.cell_count(); ++x) {
    const double lhs = rf.value(x);
    const double rhs = std::pow(mf.value(x), rep.exponent_maximal) * norm_part;
    if (rhs < guard) {
      if (lhs >= guard) rep.finite = false;
      continue;
    }
    rep.max_ratio = std::max(rep.max_ratio, lhs / rhs);
  }
  return rep;
}

// Explicit constant for the geometric-series comparison behind the split:
// whenever f is supported in B(x, r) with r >= h and M uses the default
// radius list,
//
//   R_b f(x) <= kernel_domination_constant(n, s, kappa) * r^{n-kappa-beta} * M_k f(x).
//
// Dyadic annuli around x, each ball sum snapped up to the next listed
// radius, give the first term; the second absorbs the self term through
// f(x) <= h^{-kappa} M_k f(x).
inline double kernel_domination_constant(int n, double s, double kappa) {
  if (!(s >= 1.0) || !(s * (n - 1) < n))
    throw std::domain_error("spire exponent s must lie in [1, n/(n-1))");
  const double beta = s * (n - 1);
  const double A = n - kappa - beta;
  if (!(kappa >= 0.0) || !(A > 0.0))
    throw std::domain_error("maximal order kappa must lie in [0, n - s(n-1))");
  const double q = std::exp2(-A);
  const double annuli = std::pow(4.0, n - kappa) * std::exp2(A) * q / (1.0 - q);
  const double self = unit_sphere_measure(n) * std::pow(unit_ball_volume(n), -(n - beta) / n) / (n - beta);
  return annuli + self;
}

}  // namespace choquet

#endif
