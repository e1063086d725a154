#pragma once

#include <array>
#include <functional>
#include <vector>

#include "qso/simplex.hpp"

namespace qso {

struct VolterraParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

// x' = x(1+ay-bz), y' = y(1-ax+cz), z' = z(1+bx-cy) on the 3-point simplex.
// The three correction terms cancel pairwise, so mass is conserved.
SimplexPoint volterra_apply(const VolterraParams& params, const SimplexPoint& x);

// The a=b=c=1 member of the family, x' = x^2+2xy and cyclic.
SimplexPoint zakharevitch_apply(const SimplexPoint& x);

// True iff a, b, c are all strictly positive or all strictly negative.
// A zero parameter breaks same-sign: a=b=c=0 is the identity map.
bool nonergodic_predicate(const VolterraParams& params);

// Oscillation of per-window time averages: the horizon splits into
// horizon/window disjoint windows, the first is discarded as burn-in, and
// the result is the largest per-coordinate (max - min) across the remaining
// window means. Converging time averages drive this to zero; persistent
// oscillation keeps it large. Evidence, not proof.
double ergodicity_diagnostic(
    const std::function<SimplexPoint(const SimplexPoint&)>& step,
    const SimplexPoint& x0, int window, long long horizon,
    std::vector<std::vector<double>>* window_means_out = nullptr);

// The same map tracked in log coordinates, x' = x(x+2y) etc. The boundary
// spiral drives coordinates below the smallest double; the plain orbit then
// collapses onto a vertex, which is fixed, and the oscillating time averages
// flatline. Log coordinates keep the vertex stays stretching the way the
// exact orbit does.
class ZakharevitchLogOrbit {
 public:
  explicit ZakharevitchLogOrbit(const SimplexPoint& x0);  // needs an interior point
  void advance();
  std::array<double, 3> weights() const;  // may underflow to 0; logs stay finite

 private:
  std::array<double, 3> log_w_;
};

// ergodicity_diagnostic evaluated on the log-coordinate Zakharevitch orbit.
double zakharevitch_log_diagnostic(
    const SimplexPoint& x0, int window, long long horizon,
    std::vector<std::vector<double>>* window_means_out = nullptr);

}  // namespace qso
