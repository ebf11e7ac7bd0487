#ifndef CHOQUET_GRID_HPP
#define CHOQUET_GRID_HPP

// Dyadic grid on the unit cube [0,1]^n at refinement level L: 2^{nL} closed
// cells of side h = 2^{-L}. Cells are addressed either by integer coordinates
// (i_1, ..., i_n) with 0 <= i_d < 2^L or by a flat row-major index. Morton
// codes order cells so that every dyadic subcube is a contiguous code range,
// which the content solver exploits.

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "choquet/common.hpp"

namespace choquet {

class GridGeometry {
 public:
  GridGeometry(int dim, int level) : dim_(dim), level_(level) {
    if (dim < 2 || dim > kMaxDim) throw std::domain_error("grid dimension must be in [2, 6]");
    if (level < 1) throw std::domain_error("grid level must be >= 1");
    if (dim * level > 24) throw std::domain_error("grid too fine: dim * level must be <= 24");
  }

  int dim() const { return dim_; }
  int level() const { return level_; }
  double cell_side() const { return std::ldexp(1.0, -level_); }
  std::int64_t cells_per_axis() const { return std::int64_t{1} << level_; }
  std::uint64_t cell_count() const { return std::uint64_t{1} << (dim_ * level_); }

  bool operator==(const GridGeometry& o) const { return dim_ == o.dim_ && level_ == o.level_; }
  bool operator!=(const GridGeometry& o) const { return !(*this == o); }

  std::uint64_t index_of(const Coords& c) const {
    std::uint64_t idx = 0;
    for (int d = dim_ - 1; d >= 0; --d) {
      if (c[d] < 0 || c[d] >= cells_per_axis()) throw std::out_of_range("cell coordinate out of range");
      idx = (idx << level_) | static_cast<std::uint64_t>(c[d]);
    }
    return idx;
  }

  Coords coords_of(std::uint64_t idx) const {
    if (idx >= cell_count()) throw std::out_of_range("cell index out of range");
    Coords c{};
    std::uint64_t mask = (std::uint64_t{1} << level_) - 1;
    for (int d = 0; d < dim_; ++d) {
      c[d] = static_cast<std::int32_t>(idx & mask);
      idx >>= level_;
    }
    return c;
  }

  Vec center_of(const Coords& c) const {
    Vec x{};
    double h = cell_side();
    for (int d = 0; d < dim_; ++d) x[d] = (c[d] + 0.5) * h;
    return x;
  }

  Vec center_of(std::uint64_t idx) const { return center_of(coords_of(idx)); }

  // Cell containing an interior point; coordinates clamp to the last cell on
  // the closed upper faces.
  Coords cell_at(const Vec& x) const {
    Coords c{};
    for (int d = 0; d < dim_; ++d) {
      if (x[d] < 0.0 || x[d] > 1.0) throw std::out_of_range("point outside the unit cube");
      auto i = static_cast<std::int64_t>(x[d] * cells_per_axis());
      c[d] = static_cast<std::int32_t>(std::min(i, cells_per_axis() - 1));
    }
    return c;
  }

  // Bit-interleaved cell code. Reading n-bit digits from the most significant
  // end walks the dyadic tree root-to-leaf, so each subtree is a code interval.
  std::uint64_t morton_of(const Coords& c) const {
    std::uint64_t code = 0;
    for (int bit = level_ - 1; bit >= 0; --bit) {
      std::uint64_t digit = 0;
      for (int d = 0; d < dim_; ++d) digit |= static_cast<std::uint64_t>((c[d] >> bit) & 1) << d;
      code = (code << dim_) | digit;
    }
    return code;
  }

  Coords coords_of_morton(std::uint64_t code) const {
    Coords c{};
    for (int bit = 0; bit < level_; ++bit) {
      std::uint64_t digit = (code >> (dim_ * bit)) & ((std::uint64_t{1} << dim_) - 1);
      for (int d = 0; d < dim_; ++d) c[d] |= static_cast<std::int32_t>((digit >> d) & 1) << bit;
    }
    return c;
  }

 private:
  int dim_;
  int level_;
};

// Finite union of grid cells, stored as a dense occupancy mask.
class GridSet {
 public:
  explicit GridSet(const GridGeometry& g) : geom_(g), mask_(g.cell_count(), 0) {}

  const GridGeometry& geometry() const { return geom_; }

  bool contains(std::uint64_t idx) const { return mask_[idx] != 0; }
  bool contains(const Coords& c) const { return contains(geom_.index_of(c)); }

  void insert(std::uint64_t idx) {
    if (!mask_[idx]) {
      mask_[idx] = 1;
      ++count_;
    }
  }
  void insert(const Coords& c) { insert(geom_.index_of(c)); }

  void erase(std::uint64_t idx) {
    if (mask_[idx]) {
      mask_[idx] = 0;
      --count_;
    }
  }

  std::uint64_t count() const { return count_; }
  bool empty() const { return count_ == 0; }

  std::vector<std::uint64_t> indices() const {
    std::vector<std::uint64_t> out;
    out.reserve(count_);
    for (std::uint64_t i = 0; i < mask_.size(); ++i)
      if (mask_[i]) out.push_back(i);
    return out;
  }

  bool operator==(const GridSet& o) const { return geom_ == o.geom_ && mask_ == o.mask_; }

  friend GridSet set_union(const GridSet& a, const GridSet& b) {
    GridSet r = a.require_same(b);
    for (std::uint64_t i = 0; i < r.mask_.size(); ++i)
      if (a.mask_[i] || b.mask_[i]) r.insert(i);
    return r;
  }

  friend GridSet set_intersection(const GridSet& a, const GridSet& b) {
    GridSet r = a.require_same(b);
    for (std::uint64_t i = 0; i < r.mask_.size(); ++i)
      if (a.mask_[i] && b.mask_[i]) r.insert(i);
    return r;
  }

  friend GridSet set_difference(const GridSet& a, const GridSet& b) {
    GridSet r = a.require_same(b);
    for (std::uint64_t i = 0; i < r.mask_.size(); ++i)
      if (a.mask_[i] && !b.mask_[i]) r.insert(i);
    return r;
  }

  friend GridSet set_complement(const GridSet& a) {
    GridSet r(a.geom_);
    for (std::uint64_t i = 0; i < r.mask_.size(); ++i)
      if (!a.mask_[i]) r.insert(i);
    return r;
  }

  friend bool is_subset(const GridSet& a, const GridSet& b) {
    a.require_same(b);
    for (std::uint64_t i = 0; i < a.mask_.size(); ++i)
      if (a.mask_[i] && !b.mask_[i]) return false;
    return true;
  }

 private:
  GridSet require_same(const GridSet& o) const {
    if (geom_ != o.geom_) throw std::invalid_argument("grid geometry mismatch");
    return GridSet(geom_);
  }

  GridGeometry geom_;
  std::vector<std::uint8_t> mask_;
  std::uint64_t count_ = 0;
};

// Nonnegative grid function with optional gradient-magnitude channel. Values
// are stored densely; cells outside the support must carry exactly 0.
class GridFunction {
 public:
  GridFunction(const GridGeometry& g, GridSet support, std::vector<double> values,
               std::optional<std::vector<double>> gradient = std::nullopt)
      : geom_(g), support_(std::move(support)), values_(std::move(values)), gradient_(std::move(gradient)) {
    if (support_.geometry() != geom_) throw std::invalid_argument("support geometry mismatch");
    if (values_.size() != geom_.cell_count()) throw std::invalid_argument("value array size mismatch");
    if (gradient_ && gradient_->size() != geom_.cell_count())
      throw std::invalid_argument("gradient array size mismatch");
    for (std::uint64_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i]) || values_[i] < 0.0)
        throw std::invalid_argument("grid function values must be finite and nonnegative");
      if (!support_.contains(i) && values_[i] != 0.0)
        throw std::invalid_argument("nonzero value outside the declared support");
      if (gradient_) {
        if (!std::isfinite((*gradient_)[i]) || (*gradient_)[i] < 0.0)
          throw std::invalid_argument("gradient magnitudes must be finite and nonnegative");
        if (!support_.contains(i) && (*gradient_)[i] != 0.0)
          throw std::invalid_argument("nonzero gradient outside the declared support");
      }
    }
  }

  static GridFunction zero(const GridGeometry& g) {
    return GridFunction(g, GridSet(g), std::vector<double>(g.cell_count(), 0.0));
  }

  static GridFunction indicator(const GridSet& e) {
    std::vector<double> v(e.geometry().cell_count(), 0.0);
    for (std::uint64_t i : e.indices()) v[i] = 1.0;
    return GridFunction(e.geometry(), e, std::move(v));
  }

  const GridGeometry& geometry() const { return geom_; }
  const GridSet& support() const { return support_; }
  bool has_gradient() const { return gradient_.has_value(); }

  double value(std::uint64_t idx) const { return values_[idx]; }
  double gradient(std::uint64_t idx) const {
    if (!gradient_) throw std::logic_error("grid function carries no gradient channel");
    return (*gradient_)[idx];
  }

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& gradients() const {
    if (!gradient_) throw std::logic_error("grid function carries no gradient channel");
    return *gradient_;
  }

  // Pointwise scaling by a >= 0 of both channels.
  GridFunction scaled(double a) const {
    if (!(a >= 0.0) || !std::isfinite(a)) throw std::domain_error("scale factor must be finite and >= 0");
    std::vector<double> v(values_);
    for (double& x : v) x *= a;
    std::optional<std::vector<double>> gr;
    if (gradient_) {
      gr = *gradient_;
      for (double& x : *gr) x *= a;
    }
    return GridFunction(geom_, a == 0.0 ? GridSet(geom_) : support_, std::move(v), std::move(gr));
  }

  // Restriction: zero out values off the given set, shrink the support.
  GridFunction restricted(const GridSet& to) const {
    if (to.geometry() != geom_) throw std::invalid_argument("grid geometry mismatch");
    GridSet sup = set_intersection(support_, to);
    std::vector<double> v(geom_.cell_count(), 0.0);
    std::optional<std::vector<double>> gr;
    if (gradient_) gr = std::vector<double>(geom_.cell_count(), 0.0);
    for (std::uint64_t i : sup.indices()) {
      v[i] = values_[i];
      if (gr) (*gr)[i] = (*gradient_)[i];
    }
    return GridFunction(geom_, std::move(sup), std::move(v), std::move(gr));
  }

  GridFunction pointwise_power(double p) const {
    std::vector<double> v(geom_.cell_count(), 0.0);
    for (std::uint64_t i : support_.indices()) v[i] = std::pow(values_[i], p);
    return GridFunction(geom_, support_, std::move(v));
  }

  friend GridFunction pointwise_min(const GridFunction& f, const GridFunction& g) {
    if (f.geom_ != g.geom_) throw std::invalid_argument("grid geometry mismatch");
    GridSet sup(f.geom_);
    std::vector<double> v(f.geom_.cell_count(), 0.0);
    for (std::uint64_t i = 0; i < v.size(); ++i) {
      v[i] = std::min(f.values_[i], g.values_[i]);
      if (v[i] > 0.0 || (f.support_.contains(i) && g.support_.contains(i))) sup.insert(i);
    }
    return GridFunction(f.geom_, std::move(sup), std::move(v));
  }

  friend GridFunction pointwise_sum(const GridFunction& f, const GridFunction& g) {
    if (f.geom_ != g.geom_) throw std::invalid_argument("grid geometry mismatch");
    GridSet sup = set_union(f.support_, g.support_);
    std::vector<double> v(f.geom_.cell_count(), 0.0);
    for (std::uint64_t i = 0; i < v.size(); ++i) v[i] = f.values_[i] + g.values_[i];
    return GridFunction(f.geom_, std::move(sup), std::move(v));
  }

  friend GridFunction pointwise_product(const GridFunction& f, const GridFunction& g) {
    if (f.geom_ != g.geom_) throw std::invalid_argument("grid geometry mismatch");
    GridSet sup = set_intersection(f.support_, g.support_);
    std::vector<double> v(f.geom_.cell_count(), 0.0);
    for (std::uint64_t i : sup.indices()) v[i] = f.values_[i] * g.values_[i];
    return GridFunction(f.geom_, std::move(sup), std::move(v));
  }

 private:
  GridGeometry geom_;
  GridSet support_;
  std::vector<double> values_;
  std::optional<std::vector<double>> gradient_;
};

// Strict superlevel set {f > t} for t >= 0.
inline GridSet superlevel_set(const GridFunction& f, double t) {
  if (!(t >= 0.0)) throw std::domain_error("superlevel threshold must be >= 0");
  GridSet s(f.geometry());
  for (std::uint64_t i : f.support().indices())
    if (f.value(i) > t) s.insert(i);
  return s;
}

// Strictly increasing list of distinct positive values attained by f.
inline std::vector<double> distinct_levels(const GridFunction& f) {
  std::vector<double> v;
  for (std::uint64_t i : f.support().indices())
    if (f.value(i) > 0.0) v.push_back(f.value(i));
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Text format: header "n L", then one record per occupied cell, coordinates
// first. Sets write value 1; functions write the value and, when present, the
// gradient magnitude. Records are emitted in ascending flat-index order.
inline void write_text(std::ostream& os, const GridSet& s) {
  os << s.geometry().dim() << ' ' << s.geometry().level() << '\n';
  for (std::uint64_t i : s.indices()) {
    Coords c = s.geometry().coords_of(i);
    for (int d = 0; d < s.geometry().dim(); ++d) os << c[d] << ' ';
    os << "1\n";
  }
}

inline void write_text(std::ostream& os, const GridFunction& f) {
  os << f.geometry().dim() << ' ' << f.geometry().level() << '\n';
  for (std::uint64_t i : f.support().indices()) {
    Coords c = f.geometry().coords_of(i);
    for (int d = 0; d < f.geometry().dim(); ++d) os << c[d] << ' ';
    os << format_double(f.value(i));
    if (f.has_gradient()) os << ' ' << format_double(f.gradient(i));
    os << '\n';
  }
}

namespace detail {

inline GridGeometry read_grid_header(std::istream& is) {
  int n = 0, L = 0;
  if (!(is >> n >> L)) throw std::runtime_error("malformed grid header");
  return GridGeometry(n, L);
}

}  // namespace detail

inline GridSet read_grid_set(std::istream& is) {
  GridGeometry g = detail::read_grid_header(is);
  GridSet s(g);
  Coords c{};
  double ignored = 0.0;
  while (true) {
    for (int d = 0; d < g.dim(); ++d) {
      if (!(is >> c[d])) {
        if (d == 0) return s;
        throw std::runtime_error("truncated grid record");
      }
    }
    if (!(is >> ignored)) throw std::runtime_error("truncated grid record");
    s.insert(c);
  }
}

inline GridFunction read_grid_function(std::istream& is, bool with_gradient = false) {
  GridGeometry g = detail::read_grid_header(is);
  GridSet sup(g);
  std::vector<double> vals(g.cell_count(), 0.0);
  std::vector<double> grads(g.cell_count(), 0.0);
  Coords c{};
  while (true) {
    for (int d = 0; d < g.dim(); ++d) {
      if (!(is >> c[d])) {
        if (d == 0) {
          std::optional<std::vector<double>> gr;
          if (with_gradient) gr = std::move(grads);
          return GridFunction(g, std::move(sup), std::move(vals), std::move(gr));
        }
        throw std::runtime_error("truncated grid record");
      }
    }
    std::uint64_t idx = g.index_of(c);
    double v = 0.0;
    if (!(is >> v)) throw std::runtime_error("truncated grid record");
    vals[idx] = v;
    if (with_gradient) {
      double gmag = 0.0;
      if (!(is >> gmag)) throw std::runtime_error("truncated grid record");
      grads[idx] = gmag;
    }
    sup.insert(idx);
  }
}

}  // namespace choquet

#endif
