#include "qso/classical.hpp"

#include <cmath>
#include <stdexcept>

namespace qso {

namespace {

double oscillation_after_burn_in(const std::vector<std::vector<double>>& means) {
  const std::size_t windows = means.size();
  const std::size_t n = means.front().size();
  double oscillation = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double lo = means[1][i], hi = means[1][i];
    for (std::size_t w = 1; w < windows; ++w) {
      lo = std::min(lo, means[w][i]);
      hi = std::max(hi, means[w][i]);
    }
    oscillation = std::max(oscillation, hi - lo);
  }
  return oscillation;
}

void check_window(int window, long long horizon) {
  if (window < 1 || horizon < 2LL * window)
    throw std::invalid_argument("degenerate window: need horizon >= 2*window");
}

double log_sum_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace

SimplexPoint volterra_apply(const VolterraParams& params, const SimplexPoint& point) {
  if (std::abs(params.a) > 1.0 || std::abs(params.b) > 1.0 || std::abs(params.c) > 1.0)
    throw std::invalid_argument("Volterra parameters must lie in [-1, 1]");
  if (point.size() != 3)
    throw std::invalid_argument("Volterra operators act on the 3-point simplex");
  const double x = point[0], y = point[1], z = point[2];
  std::vector<double> out{
      x * (1.0 + params.a * y - params.b * z),
      y * (1.0 - params.a * x + params.c * z),
      z * (1.0 + params.b * x - params.c * y),
  };
  return SimplexPoint::validated(std::move(out));
}

SimplexPoint zakharevitch_apply(const SimplexPoint& x) {
  return volterra_apply(VolterraParams{1.0, 1.0, 1.0}, x);
}

bool nonergodic_predicate(const VolterraParams& params) {
  const bool all_positive = params.a > 0.0 && params.b > 0.0 && params.c > 0.0;
  const bool all_negative = params.a < 0.0 && params.b < 0.0 && params.c < 0.0;
  return all_positive || all_negative;
}

double ergodicity_diagnostic(
    const std::function<SimplexPoint(const SimplexPoint&)>& step,
    const SimplexPoint& x0, int window, long long horizon,
    std::vector<std::vector<double>>* window_means_out) {
  check_window(window, horizon);
  const auto n = static_cast<std::size_t>(x0.size());
  const auto windows = static_cast<std::size_t>(horizon / window);

  std::vector<std::vector<double>> means;
  means.reserve(windows);
  SimplexPoint x = x0;
  for (std::size_t w = 0; w < windows; ++w) {
    std::vector<double> acc(n, 0.0);
    for (int s = 0; s < window; ++s) {
      for (std::size_t i = 0; i < n; ++i) acc[i] += x[static_cast<int>(i)];
      x = step(x);
    }
    for (double& v : acc) v /= window;
    means.push_back(std::move(acc));
  }

  const double oscillation = oscillation_after_burn_in(means);
  if (window_means_out) *window_means_out = std::move(means);
  return oscillation;
}

ZakharevitchLogOrbit::ZakharevitchLogOrbit(const SimplexPoint& x0) {
  if (x0.size() != 3)
    throw std::invalid_argument("Zakharevitch orbits live on the 3-point simplex");
  for (int i = 0; i < 3; ++i)
    if (!(x0[i] > 0.0))
      throw std::invalid_argument("log-coordinate orbit needs an interior point");
  for (int i = 0; i < 3; ++i) log_w_[static_cast<std::size_t>(i)] = std::log(x0[i]);
}

void ZakharevitchLogOrbit::advance() {
  // x' = x(x+2y), y' = y(y+2z), z' = z(z+2x): every factor is a positive sum,
  // so the step stays well defined arbitrarily close to the boundary.
  constexpr double kLog2 = 0.69314718055994530942;
  std::array<double, 3> next;
  for (std::size_t i = 0; i < 3; ++i)
    next[i] = log_w_[i] + log_sum_exp(log_w_[i], kLog2 + log_w_[(i + 1) % 3]);
  const double total = log_sum_exp(log_sum_exp(next[0], next[1]), next[2]);
  for (std::size_t i = 0; i < 3; ++i) log_w_[i] = next[i] - total;
}

std::array<double, 3> ZakharevitchLogOrbit::weights() const {
  return {std::exp(log_w_[0]), std::exp(log_w_[1]), std::exp(log_w_[2])};
}

double zakharevitch_log_diagnostic(const SimplexPoint& x0, int window, long long horizon,
                                   std::vector<std::vector<double>>* window_means_out) {
  check_window(window, horizon);
  const auto windows = static_cast<std::size_t>(horizon / window);
  std::vector<std::vector<double>> means;
  means.reserve(windows);
  ZakharevitchLogOrbit orbit(x0);
  for (std::size_t w = 0; w < windows; ++w) {
    std::vector<double> acc(3, 0.0);
    for (int s = 0; s < window; ++s) {
      const auto weights = orbit.weights();
      for (std::size_t i = 0; i < 3; ++i) acc[i] += weights[i];
      orbit.advance();
    }
    for (double& v : acc) v /= window;
    means.push_back(std::move(acc));
  }
  const double oscillation = oscillation_after_burn_in(means);
  if (window_means_out) *window_means_out = std::move(means);
  return oscillation;
}

}  // namespace qso
