#ifndef CHOQUET_INTEGRAL_HPP
#define CHOQUET_INTEGRAL_HPP

// Choquet integral against dyadic content,
//
//   I(f) = integral_0^inf H({f > t}) dt.
//
// A grid function is a step function, so the layer-cake sum is exact: with
// distinct positive values t_1 < ... < t_m and S_i = {f >= t_i},
//
//   I(f) = sum_i (t_i - t_{i-1}) H(S_i),   t_0 = 0,
//
// because {f > t} = S_i for every t in [t_{i-1}, t_i). Power integrals admit
// a second closed form via the substitution t = lambda^p, used as a residual
// check. A quantized variant with k equispaced thresholds brackets the exact
// value from both sides; the scan over translation parameters uses it before
// polishing with exact evaluations.

#include <cstdint>
#include <vector>

#include "choquet/content.hpp"
#include "choquet/grid.hpp"

namespace choquet {

struct IntegralValue {
  double value = 0.0;
  double delta = 0.0;
  int levels_used = 0;
};

struct PowerIntegral {
  IntegralValue integral;
  double residual = 0.0;  // |direct - substitution| between the two closed forms
};

struct QuantizedIntegral {
  double lower = 0.0;
  double upper = 0.0;
  double delta = 0.0;
  int levels = 0;
  double midpoint() const { return 0.5 * (lower + upper); }
};

namespace detail {

// Occupied cells of f with positive value, Morton-sorted once; every
// superlevel set is then a subsequence.
struct LayerCake {
  GridGeometry geom;  // by value: the cake may outlive the sampled function
  std::vector<std::uint64_t> codes;
  std::vector<double> values;  // aligned with codes

  explicit LayerCake(const GridGeometry& g) : geom(g) {}

  static LayerCake from(const GridFunction& f) {
    LayerCake lc(f.geometry());
    const GridGeometry& g = f.geometry();
    std::vector<std::pair<std::uint64_t, double>> cells;
    for (std::uint64_t i : f.support().indices())
      if (f.value(i) > 0.0) cells.emplace_back(g.morton_of(g.coords_of(i)), f.value(i));
    std::sort(cells.begin(), cells.end());
    lc.codes.reserve(cells.size());
    lc.values.reserve(cells.size());
    for (auto& [c, v] : cells) {
      lc.codes.push_back(c);
      lc.values.push_back(v);
    }
    return lc;
  }

  std::vector<double> thresholds() const {
    std::vector<double> t(values);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
  }

  // Exact layer cake; `transform(t)` maps each threshold before differencing
  // (identity for I(f), t^p for the substitution route of I(f^p)).
  template <class Transform>
  double accumulate(double delta, const Transform& transform, int* levels_used) const {
    std::vector<double> t = thresholds();
    if (levels_used) *levels_used = static_cast<int>(t.size());
    if (t.empty()) return 0.0;
    std::vector<std::uint64_t> live(codes);
    std::vector<double> live_vals(values);
    KahanSum total;
    double prev = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      // live currently holds {f >= t[i]}.
      double content = content_value_sorted(geom, delta, live);
      double ti = transform(t[i]);
      total.add((ti - prev) * content);
      prev = ti;
      if (i + 1 < t.size()) {
        std::size_t keep = 0;
        for (std::size_t k = 0; k < live.size(); ++k) {
          if (live_vals[k] >= t[i + 1]) {
            live[keep] = live[k];
            live_vals[keep] = live_vals[k];
            ++keep;
          }
        }
        live.resize(keep);
        live_vals.resize(keep);
      }
    }
    return total.value();
  }

  QuantizedIntegral quantized(double delta, int levels) const {
    QuantizedIntegral q;
    q.delta = delta;
    q.levels = levels;
    if (codes.empty()) return q;
    double vmax = *std::max_element(values.begin(), values.end());
    double step = vmax / levels;
    // contents[j] = H({f > j * step}) for j = 0..levels-1; the set at j =
    // levels is empty. Lower/upper Riemann sums of the nonincreasing
    // distribution function bracket the integral.
    std::vector<std::uint64_t> live(codes);
    std::vector<double> live_vals(values);
    std::vector<double> contents(levels, 0.0);
    for (int j = 0; j < levels; ++j) {
      double thr = j * step;
      std::size_t keep = 0;
      for (std::size_t k = 0; k < live.size(); ++k) {
        if (live_vals[k] > thr) {
          live[keep] = live[k];
          live_vals[keep] = live_vals[k];
          ++keep;
        }
      }
      live.resize(keep);
      live_vals.resize(keep);
      contents[j] = content_value_sorted(geom, delta, live);
    }
    KahanSum lower;
    for (int j = 1; j < levels; ++j) lower.add(step * contents[j]);
    q.lower = lower.value();
    q.upper = q.lower + step * contents[0];
    return q;
  }
};

}  // namespace detail

inline IntegralValue choquet_integral(const GridFunction& f, double delta) {
  detail::validate_delta(delta, f.geometry().dim());
  IntegralValue out;
  out.delta = delta;
  detail::LayerCake lc = detail::LayerCake::from(f);
  out.value = lc.accumulate(delta, [](double t) { return t; }, &out.levels_used);
  return out;
}

// I(f^p) computed two ways: directly on the pointwise power, and on f itself
// with transformed thresholds. Both are closed forms of the same sum; their
// disagreement is reported as the residual.
inline PowerIntegral choquet_integral_power(const GridFunction& f, double p, double delta) {
  detail::validate_delta(delta, f.geometry().dim());
  if (!(p > 0.0)) throw std::domain_error("power exponent must be positive");
  PowerIntegral out;
  out.integral.delta = delta;
  detail::LayerCake direct = detail::LayerCake::from(f.pointwise_power(p));
  out.integral.value = direct.accumulate(delta, [](double t) { return t; }, &out.integral.levels_used);
  detail::LayerCake base = detail::LayerCake::from(f);
  double subst = base.accumulate(delta, [p](double t) { return std::pow(t, p); }, nullptr);
  out.residual = std::abs(out.integral.value - subst);
  return out;
}

inline QuantizedIntegral choquet_integral_quantized(const GridFunction& f, double delta, int levels) {
  detail::validate_delta(delta, f.geometry().dim());
  if (levels < 1) throw std::domain_error("quantization needs at least one level");
  return detail::LayerCake::from(f).quantized(delta, levels);
}

// Functional axioms at one exponent pair. (C1) positive homogeneity, (C2)
// vanishing iff f = 0 on its support, (C3) indicators reproduce content,
// (C4) monotonicity in the set, (C5) monotonicity in the integrand, (C6)
// quasi-additivity with factor 2, (C7) Hoelder with factor 2 and conjugate
// exponents. All hold for any monotone subadditive set functional; factors
// in (C6)/(C7) are exactly 2.
struct ChoquetAxiomReport {
  bool c1_homogeneous = true;
  bool c2_null = true;
  bool c3_indicator = true;
  bool c4_set_monotone = true;
  bool c5_integrand_monotone = true;
  bool c6_quasi_additive = true;
  bool c7_hoelder = true;
  int checks = 0;
  double worst_violation = 0.0;

  bool pass() const {
    return c1_homogeneous && c2_null && c3_indicator && c4_set_monotone && c5_integrand_monotone &&
           c6_quasi_additive && c7_hoelder;
  }
};

inline ChoquetAxiomReport check_choquet_axioms(const GridFunction& f, const GridFunction& g, double delta,
                                               double p, double rel_tol = 1e-12) {
  if (f.geometry() != g.geometry()) throw std::invalid_argument("grid geometry mismatch");
  detail::validate_delta(delta, f.geometry().dim());
  if (!(p > 1.0)) throw std::domain_error("Hoelder exponent must exceed 1");

  ChoquetAxiomReport rep;
  auto note = [&](bool& flag, double lhs, double rhs) {
    ++rep.checks;
    double tol = rel_tol * std::max(1.0, std::max(std::abs(lhs), std::abs(rhs)));
    if (lhs > rhs + tol) {
      flag = false;
      rep.worst_violation = std::max(rep.worst_violation, (lhs - rhs) / std::max(1.0, rhs));
    }
  };

  double fi = choquet_integral(f, delta).value;
  double gi = choquet_integral(g, delta).value;

  for (double a : {0.5, 2.0, 3.7}) {
    double scaled = choquet_integral(f.scaled(a), delta).value;
    note(rep.c1_homogeneous, scaled, a * fi);
    note(rep.c1_homogeneous, a * fi, scaled);
  }

  bool f_is_zero = distinct_levels(f).empty();
  if ((fi == 0.0) != f_is_zero) rep.c2_null = false;
  if (choquet_integral(GridFunction::zero(f.geometry()), delta).value != 0.0) rep.c2_null = false;

  {
    const GridSet& e = g.support();
    double ind = choquet_integral(GridFunction::indicator(e), delta).value;
    double h = dyadic_content_value(e, delta);
    note(rep.c3_indicator, ind, h);
    note(rep.c3_indicator, h, ind);
  }

  {
    std::vector<double> lv = distinct_levels(f);
    double mid = lv.empty() ? 0.0 : lv[lv.size() / 2];
    GridSet smaller = superlevel_set(f, mid);
    note(rep.c4_set_monotone, choquet_integral(f.restricted(smaller), delta).value, fi);
  }

  {
    GridFunction m = pointwise_min(f, g);
    double mi = choquet_integral(m, delta).value;
    note(rep.c5_integrand_monotone, mi, fi);
    note(rep.c5_integrand_monotone, mi, gi);
  }

  note(rep.c6_quasi_additive, choquet_integral(pointwise_sum(f, g), delta).value, 2.0 * (fi + gi));

  {
    double q = p / (p - 1.0);
    double lhs = choquet_integral(pointwise_product(f, g), delta).value;
    double fp = choquet_integral_power(f, p, delta).integral.value;
    double gq = choquet_integral_power(g, q, delta).integral.value;
    note(rep.c7_hoelder, lhs, 2.0 * std::pow(fp, 1.0 / p) * std::pow(gq, 1.0 / q));
  }
  return rep;
}

// Exponent embedding: for 0 < d1 < d2 <= n,
//
//   I_{d2}(f) <= (d2/d1) * ( I_{d1}(f^{d1/d2}) )^{d2/d1}.
struct EmbeddingReport {
  double delta1 = 0.0;
  double delta2 = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

inline EmbeddingReport check_content_embedding(const GridFunction& f, double delta1, double delta2,
                                               double rel_tol = 1e-12) {
  if (!(delta1 > 0.0) || !(delta1 < delta2))
    throw std::domain_error("embedding requires 0 < delta1 < delta2 <= n");
  detail::validate_delta(delta2, f.geometry().dim());
  EmbeddingReport rep;
  rep.delta1 = delta1;
  rep.delta2 = delta2;
  rep.lhs = choquet_integral(f, delta2).value;
  double ratio = delta2 / delta1;
  double inner = choquet_integral(f.pointwise_power(1.0 / ratio), delta1).value;
  rep.rhs = ratio * std::pow(inner, ratio);
  rep.pass = rep.lhs <= rep.rhs * (1.0 + rel_tol) + rel_tol * 1e-3;
  return rep;
}

}  // namespace choquet

#endif
