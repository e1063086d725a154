#include "qso/simplex.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace qso {

SimplexPoint SimplexPoint::validated(std::vector<double> raw) {
  if (raw.empty()) throw std::invalid_argument("simplex point needs at least one entry");
  double sum = 0.0;
  for (double& v : raw) {
    if (!std::isfinite(v)) throw std::invalid_argument("simplex entry is not finite");
    if (v < -kNegativeClamp)
      throw std::invalid_argument("simplex entry carries negative mass");
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (std::abs(sum - 1.0) > kPreNormalizationTolerance)
    throw std::invalid_argument("simplex mass deviates from 1 beyond tolerance");
  for (double& v : raw) v /= sum;
  return SimplexPoint(std::move(raw));
}

SimplexPoint SimplexPoint::uniform(int n) {
  if (n < 1) throw std::invalid_argument("need a positive dimension");
  std::vector<double> w(static_cast<std::size_t>(n), 1.0 / n);
  return validated(std::move(w));
}

SimplexPoint SimplexPoint::delta(int n, int at) {
  if (n < 1 || at < 0 || at >= n) throw std::invalid_argument("delta index out of range");
  std::vector<double> w(static_cast<std::size_t>(n), 0.0);
  w[static_cast<std::size_t>(at)] = 1.0;
  return SimplexPoint(std::move(w));
}

SimplexPoint SimplexPoint::dirichlet(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("need a positive dimension");
  std::mt19937_64 rng(seed);
  std::vector<double> w(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (double& v : w) {
    // uniform in (0,1), open at both ends, without distribution objects so
    // the stream is identical across standard libraries
    const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
    v = -std::log(u);
    sum += v;
  }
  for (double& v : w) v /= sum;
  return SimplexPoint(std::move(w));
}

SimplexPoint haar_center(const Group& g) { return SimplexPoint::uniform(g.order()); }

SimplexPoint sample_interior(const Group& g, std::uint64_t seed) {
  return SimplexPoint::dirichlet(g.order(), seed);
}

SimplexPoint factor_measure(const SimplexPoint& x, const QuotientGroup& q) {
  if (x.size() != static_cast<int>(q.projection.size()))
    throw std::invalid_argument("measure does not live on the quotient's parent group");
  std::vector<double> w(q.cosets.size(), 0.0);
  for (std::size_t ci = 0; ci < q.cosets.size(); ++ci)
    for (int m : q.cosets[ci].members) w[ci] += x[m];
  return SimplexPoint::validated(std::move(w));
}

double sup_norm(const SimplexPoint& x) {
  double m = 0.0;
  for (double v : x.weights()) m = std::max(m, v);
  return m;
}

double sup_distance_to_center(const SimplexPoint& x) {
  const double c = 1.0 / x.size();
  double m = 0.0;
  for (double v : x.weights()) m = std::max(m, std::abs(v - c));
  return m;
}

}  // namespace qso
