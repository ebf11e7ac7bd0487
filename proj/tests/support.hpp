#ifndef CHOQUET_TESTS_SUPPORT_HPP
#define CHOQUET_TESTS_SUPPORT_HPP

// Deterministic random instances shared by the test binaries. All draws go
// through std::mt19937_64 with explicit seeds so failures reproduce.

#include <random>
#include <vector>

#include "choquet/grid.hpp"

namespace testsupport {

using choquet::Coords;
using choquet::GridFunction;
using choquet::GridGeometry;
using choquet::GridSet;

inline GridSet random_set(const GridGeometry& g, std::mt19937_64& rng, double density) {
  GridSet s(g);
  std::bernoulli_distribution coin(density);
  for (std::uint64_t i = 0; i < g.cell_count(); ++i)
    if (coin(rng)) s.insert(i);
  return s;
}

// Union of a few random dyadic cubes: produces sets whose optimal covers mix
// levels, unlike Bernoulli noise which is usually covered cell by cell.
inline GridSet random_blocky_set(const GridGeometry& g, std::mt19937_64& rng, int blocks) {
  GridSet s(g);
  std::uniform_int_distribution<int> level_of(0, g.level());
  for (int b = 0; b < blocks; ++b) {
    int l = level_of(rng);
    int shift = g.level() - l;
    std::uniform_int_distribution<std::int64_t> corner(0, (std::int64_t{1} << l) - 1);
    Coords base{};
    for (int d = 0; d < g.dim(); ++d) base[d] = static_cast<std::int32_t>(corner(rng)) << shift;
    Coords c{};
    std::int64_t cells = std::int64_t{1} << (g.dim() * shift);
    for (std::int64_t k = 0; k < cells; ++k) {
      std::int64_t rest = k;
      for (int d = 0; d < g.dim(); ++d) {
        c[d] = base[d] + static_cast<std::int32_t>(rest & ((std::int64_t{1} << shift) - 1));
        rest >>= shift;
      }
      s.insert(c);
    }
  }
  return s;
}

inline GridSet random_mixed_set(const GridGeometry& g, std::mt19937_64& rng) {
  if (rng() & 1) return random_set(g, rng, 0.05 + 0.4 * std::generate_canonical<double, 53>(rng));
  return random_blocky_set(g, rng, 1 + static_cast<int>(rng() % 5));
}

// Random function with at most `levels` distinct positive values on a random
// support. Quantized values keep the exact layer cake cheap.
inline GridFunction random_function(const GridGeometry& g, std::mt19937_64& rng, int levels = 12,
                                    double density = 0.3) {
  std::vector<double> palette(levels);
  std::uniform_real_distribution<double> val(0.05, 4.0);
  for (double& v : palette) v = val(rng);
  GridSet sup(g);
  std::vector<double> values(g.cell_count(), 0.0);
  std::bernoulli_distribution coin(density);
  std::uniform_int_distribution<int> pick(0, levels - 1);
  for (std::uint64_t i = 0; i < g.cell_count(); ++i) {
    if (coin(rng)) {
      sup.insert(i);
      values[i] = palette[pick(rng)];
    }
  }
  return GridFunction(g, std::move(sup), std::move(values));
}

}  // namespace testsupport

#endif
