#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qso/group.hpp"

namespace qso {

inline constexpr double kMassTolerance = 1e-12;        // post-normalization
inline constexpr double kPreNormalizationTolerance = 1e-6;
inline constexpr double kNegativeClamp = 1e-12;

// A probability vector indexed by flat group index. Construction clamps
// negative round-off within kNegativeClamp and renormalizes the total mass,
// so every live instance sums to 1 within kMassTolerance.
class SimplexPoint {
 public:
  static SimplexPoint validated(std::vector<double> raw);
  static SimplexPoint uniform(int n);
  static SimplexPoint delta(int n, int at);

  // Symmetric Dirichlet(1) interior point: normalized exponentials of a
  // seeded mt19937_64 stream. Deterministic per (n, seed); all weights > 0.
  static SimplexPoint dirichlet(int n, std::uint64_t seed);

  int size() const { return static_cast<int>(w_.size()); }
  double operator[](int i) const { return w_[static_cast<std::size_t>(i)]; }
  std::span<const double> weights() const { return w_; }
  const std::vector<double>& data() const { return w_; }

 private:
  explicit SimplexPoint(std::vector<double> w) : w_(std::move(w)) {}
  std::vector<double> w_;
};

SimplexPoint haar_center(const Group& g);
SimplexPoint sample_interior(const Group& g, std::uint64_t seed);

// Pushforward to G/H: each coset carries the sum of its members' weights.
SimplexPoint factor_measure(const SimplexPoint& x, const QuotientGroup& q);

double sup_norm(const SimplexPoint& x);
double sup_distance_to_center(const SimplexPoint& x);

}  // namespace qso
