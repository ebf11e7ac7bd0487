#ifndef CHOQUET_FUNCTIONS_HPP
#define CHOQUET_FUNCTIONS_HPP

// Analytic test-function families with exact gradients. Values are signed at
// evaluation time; sampling stores |u| and |grad u| per cell, which is what
// every integrand needs. The signed samples are used only by the
// translation-parameter search in the inequality module.
//
//   radial_bump(c, i, o)   1 on |x-c| <= i, (1 - s^2)^2 on the shell with
//                          s = (|x-c| - i)/(o - i), 0 outside; C^1
//   power_profile(a)       u = x1^a, the spire-adapted profile
//   fourier_field(...)     seeded band-limited trigonometric field, C-infinity
//   distance_power(g)      u = dist(x, boundary)^g, g > 1

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "choquet/domains.hpp"
#include "choquet/grid.hpp"

namespace choquet {

class TestFunction {
 public:
  enum class Family { RadialBump, PowerProfile, FourierField, DistancePower };

  static TestFunction radial_bump(const Vec& center, double inner, double outer) {
    if (!(inner >= 0.0) || !(outer > inner))
      throw std::domain_error("bump radii need 0 <= inner < outer");
    TestFunction f;
    f.family_ = Family::RadialBump;
    f.center_ = center;
    f.inner_ = inner;
    f.outer_ = outer;
    return f;
  }

  static TestFunction power_profile(double alpha) {
    if (!(alpha >= 0.0)) throw std::domain_error("power profile exponent must be >= 0");
    TestFunction f;
    f.family_ = Family::PowerProfile;
    f.alpha_ = alpha;
    return f;
  }

  static TestFunction fourier_field(std::uint64_t seed, int modes, double amplitude) {
    if (modes < 1) throw std::domain_error("fourier field needs at least one mode");
    if (!(amplitude > 0.0)) throw std::domain_error("fourier amplitude must be positive");
    TestFunction f;
    f.family_ = Family::FourierField;
    f.seed_ = seed;
    f.modes_ = modes;
    f.amplitude_ = amplitude;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> freq(-3, 3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int j = 0; j < modes; ++j) {
      std::array<int, kMaxDim> k{};
      bool zero = true;
      while (zero) {
        for (int d = 0; d < kMaxDim; ++d) {
          k[d] = freq(rng);
          if (k[d] != 0) zero = false;
        }
      }
      f.freq_.push_back(k);
      // Coefficients below 1/(2 pi modes) keep |grad u| <= amplitude * sum |k|.
      f.coeff_.push_back((0.5 + 0.5 * unit(rng)) / (2.0 * std::numbers::pi * modes));
      f.phase_.push_back(2.0 * std::numbers::pi * unit(rng));
    }
    return f;
  }

  static TestFunction distance_power(double gamma) {
    if (!(gamma > 1.0)) throw std::domain_error("distance power exponent must exceed 1");
    TestFunction f;
    f.family_ = Family::DistancePower;
    f.gamma_ = gamma;
    return f;
  }

  TestFunction scaled(double a) const {
    if (!(a >= 0.0) || !std::isfinite(a)) throw std::domain_error("scale must be finite and >= 0");
    TestFunction f = *this;
    f.scale_ *= a;
    return f;
  }

  Family family() const { return family_; }
  double scale() const { return scale_; }
  double bump_inner() const { return inner_; }
  double bump_outer() const { return outer_; }
  const Vec& bump_center() const { return center_; }
  double profile_exponent() const { return alpha_; }

  std::string name() const {
    char buf[96];
    switch (family_) {
      case Family::RadialBump:
        std::snprintf(buf, sizeof(buf), "bump(%g,%g,%g,%g)", center_[0], center_[1], inner_, outer_);
        break;
      case Family::PowerProfile:
        std::snprintf(buf, sizeof(buf), "power(%g)", alpha_);
        break;
      case Family::FourierField:
        std::snprintf(buf, sizeof(buf), "fourier(%llu,%d,%g)",
                      static_cast<unsigned long long>(seed_), modes_, amplitude_);
        break;
      case Family::DistancePower:
        std::snprintf(buf, sizeof(buf), "distpow(%g)", gamma_);
        break;
    }
    return buf;
  }

  // Signed value. The domain enters only through DistancePower.
  double value(const DomainSpec& dom, const Vec& x, int n) const {
    switch (family_) {
      case Family::RadialBump: {
        double t = dist(x, center_, n);
        if (t >= outer_) return 0.0;
        if (t <= inner_) return scale_;
        double s = (t - inner_) / (outer_ - inner_);
        return scale_ * sqr(1.0 - s * s);
      }
      case Family::PowerProfile:
        if (x[0] <= 0.0) return 0.0;
        return scale_ * std::pow(x[0], alpha_);
      case Family::FourierField: {
        double sum = 0.0;
        for (std::size_t j = 0; j < freq_.size(); ++j) {
          double theta = phase_[j];
          for (int d = 0; d < n; ++d) theta += 2.0 * std::numbers::pi * freq_[j][d] * x[d];
          sum += coeff_[j] * std::cos(theta);
        }
        return scale_ * (amplitude_ * sum);
      }
      case Family::DistancePower: {
        if (!dom.contains(x, n)) return 0.0;
        return scale_ * std::pow(dom.boundary_distance(x, n), gamma_);
      }
    }
    return 0.0;
  }

  double gradient_magnitude(const DomainSpec& dom, const Vec& x, int n) const {
    switch (family_) {
      case Family::RadialBump: {
        double t = dist(x, center_, n);
        if (t >= outer_ || t <= inner_) return 0.0;
        double s = (t - inner_) / (outer_ - inner_);
        return scale_ * (4.0 * s * (1.0 - s * s) / (outer_ - inner_));
      }
      case Family::PowerProfile:
        if (x[0] <= 0.0 || alpha_ == 0.0) return 0.0;
        return scale_ * (alpha_ * std::pow(x[0], alpha_ - 1.0));
      case Family::FourierField: {
        std::array<double, kMaxDim> g{};
        for (std::size_t j = 0; j < freq_.size(); ++j) {
          double theta = phase_[j];
          for (int d = 0; d < n; ++d) theta += 2.0 * std::numbers::pi * freq_[j][d] * x[d];
          double slope = -coeff_[j] * std::sin(theta) * 2.0 * std::numbers::pi;
          for (int d = 0; d < n; ++d) g[d] += slope * freq_[j][d];
        }
        double norm2 = 0.0;
        for (int d = 0; d < n; ++d) norm2 += g[d] * g[d];
        return scale_ * (amplitude_ * std::sqrt(norm2));
      }
      case Family::DistancePower: {
        if (!dom.contains(x, n)) return 0.0;
        // |grad dist| = 1 almost everywhere inside.
        return scale_ * (gamma_ * std::pow(dom.boundary_distance(x, n), gamma_ - 1.0));
      }
    }
    return 0.0;
  }

  // Whether the centered stencil of half-width h around x stays inside one
  // C^2 piece of u. Central differences are second order only there; a
  // stencil straddling a C^1 seam (the bump's shell radii, a distance
  // function's medial axis) carries an O(h) one-sided error by design.
  bool stencil_smooth(const DomainSpec& dom, const Vec& x, double h, int n) const {
    switch (family_) {
      case Family::RadialBump: {
        double t = dist(x, center_, n);
        return t > inner_ + 1.5 * h && t < outer_ - 1.5 * h;
      }
      case Family::PowerProfile:
        return x[0] > 1.5 * h;
      case Family::FourierField:
        return true;
      case Family::DistancePower: {
        // Smooth where the boundary projection is single-sheeted; detect by
        // projection stability across the stencil.
        for (int d = 0; d < n; ++d) {
          Vec xp = x, xm = x;
          xp[d] += h;
          xm[d] -= h;
          Vec yp = dom.closest_boundary_point(xp, n);
          Vec ym = dom.closest_boundary_point(xm, n);
          if (dist(yp, ym, n) > 6.0 * h) return false;
        }
        return true;
      }
    }
    return true;
  }

  // C^1_0 membership for Hardy-type checks: only bumps whose closed support
  // sits strictly inside the domain qualify.
  bool compact_support_inside(const DomainSpec& dom, int n) const {
    if (family_ != Family::RadialBump) return false;
    if (!dom.contains(center_, n)) return false;
    return outer_ < dom.boundary_distance(center_, n);
  }

  // Gradient bound sum |k| over modes, for the stated FourierField invariant.
  double mode_norm_sum() const {
    double s = 0.0;
    for (const auto& k : freq_) {
      double n2 = 0.0;
      for (int d = 0; d < kMaxDim; ++d) n2 += static_cast<double>(k[d]) * k[d];
      s += std::sqrt(n2);
    }
    return s;
  }

 private:
  Family family_ = Family::PowerProfile;
  Vec center_{};
  double inner_ = 0.0;
  double outer_ = 0.0;
  double alpha_ = 1.0;
  double gamma_ = 2.0;
  std::uint64_t seed_ = 0;
  int modes_ = 0;
  double amplitude_ = 0.0;
  double scale_ = 1.0;
  std::vector<std::array<int, kMaxDim>> freq_;
  std::vector<double> coeff_;
  std::vector<double> phase_;
};

// |u| and |grad u| at occupied cell centers.
inline GridFunction sample_function(const TestFunction& fn, const RasterizedDomain& dom) {
  const GridGeometry& g = dom.geometry();
  const int n = g.dim();
  std::vector<double> values(g.cell_count(), 0.0);
  std::vector<double> grads(g.cell_count(), 0.0);
  std::vector<std::uint64_t> cells = dom.set.indices();
  parallel_for(cells.size(), [&](std::size_t k) {
    Vec x = g.center_of(cells[k]);
    values[cells[k]] = std::abs(fn.value(dom.spec, x, n));
    grads[cells[k]] = fn.gradient_magnitude(dom.spec, x, n);
  });
  return GridFunction(g, dom.set, std::move(values), std::move(grads));
}

// Dense signed samples (zero off the domain), for translation searches.
inline std::vector<double> sample_signed(const TestFunction& fn, const RasterizedDomain& dom) {
  const GridGeometry& g = dom.geometry();
  const int n = g.dim();
  std::vector<double> values(g.cell_count(), 0.0);
  std::vector<std::uint64_t> cells = dom.set.indices();
  parallel_for(cells.size(), [&](std::size_t k) {
    values[cells[k]] = fn.value(dom.spec, g.center_of(cells[k]), n);
  });
  return values;
}

// Central-difference guard on the analytic gradients. Stencils stay strictly
// inside the domain (dist > 1.5 h) and inside one C^2 piece of u, where the
// second-order expansion is valid; the error is measured against the largest
// gradient magnitude so isolated critical points of u cannot dominate.
inline double finite_difference_check(const TestFunction& fn, const RasterizedDomain& dom) {
  const GridGeometry& g = dom.geometry();
  if (g.level() < 5) throw std::domain_error("finite difference check needs level >= 5");
  const int n = g.dim();
  const double h = g.cell_side();
  double worst = 0.0;
  double gmax = 0.0;
  for (std::uint64_t i : dom.set.indices()) {
    if (dom.distance[i] <= 1.5 * h) continue;
    Vec x = g.center_of(i);
    double analytic = fn.gradient_magnitude(dom.spec, x, n);
    if (analytic <= 1e-6) continue;
    if (!fn.stencil_smooth(dom.spec, x, h, n)) continue;
    double fd2 = 0.0;
    for (int d = 0; d < n; ++d) {
      Vec xp = x, xm = x;
      xp[d] += h;
      xm[d] -= h;
      double diff = (fn.value(dom.spec, xp, n) - fn.value(dom.spec, xm, n)) / (2.0 * h);
      fd2 += diff * diff;
    }
    worst = std::max(worst, std::abs(std::sqrt(fd2) - analytic));
    gmax = std::max(gmax, analytic);
  }
  return gmax > 0.0 ? worst / gmax : 0.0;
}

}  // namespace choquet

#endif
