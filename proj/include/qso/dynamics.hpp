#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qso/group.hpp"
#include "qso/qso_operator.hpp"
#include "qso/simplex.hpp"

namespace qso {

inline constexpr int kDefaultMaxSteps = 10'000;
inline constexpr double kDefaultConvergenceTol = 1e-9;
// Coordinates are rounded to this quantum before cycle hashing. Exceptional
// orbits are exact lattice states, separated by at least 1/|G|, so this sits
// far above round-off and far below state separation.
inline constexpr double kCycleQuantum = 1e-10;

struct CycleInfo {
  int preperiod = 0;
  int period = 0;
  bool operator==(const CycleInfo&) const = default;
};

enum class TrajectoryVerdict { kConvergedToCenter, kCycleDetected, kBudgetExhausted };

std::string_view to_string(TrajectoryVerdict verdict);

struct TrajectoryReport {
  int steps = 0;  // number of operator applications performed
  std::vector<double> sup_norm_series;         // length steps + 1, starts at x0
  std::vector<double> center_distance_series;  // same indexing
  TrajectoryVerdict verdict = TrajectoryVerdict::kBudgetExhausted;
  std::optional<CycleInfo> cycle;
  std::optional<SimplexPoint> final_state;
};

TrajectoryReport iterate(const QsoOperator& op, const SimplexPoint& x0,
                         int max_steps = kDefaultMaxSteps,
                         double tol = kDefaultConvergenceTol);

// (1/k) * sum_{i<k} V^i x0.
SimplexPoint cesaro_average(const QsoOperator& op, const SimplexPoint& x0, int term_count);

// Exact revisit detection on quantized states.
std::optional<CycleInfo> detect_cycle(std::span<const SimplexPoint> series,
                                      double quantum = kCycleQuantum);

// max of sum x_i^2 over probability vectors with every entry <= p; closed
// form k*p^2 + (1-k*p)^2 with k = floor(1/p). Domain (0, 1].
double envelope(double p);

// Same maximum evaluated by constructing the extremal vector in n slots
// (floor(1/p) entries at p, the remainder in one slot). Needs n*p >= 1.
double envelope_maximizer_value(double p, int n);

// Same maximum through the recursion that peels one maximal slot per level.
double envelope_recurrence(double p, int n);

// A coset-uniform initial state together with its doubling orbit
// p+H -> 2p+H -> 4p+H -> ..., computed on coset labels.
struct ExceptionalState {
  int shift = 0;  // flat index of p
  Subgroup subgroup;
  SimplexPoint state;
  int doubling_preperiod = 0;
  int doubling_period = 1;
};

// Every coset-uniform state of every subgroup, with its doubling orbit.
std::vector<ExceptionalState> enumerate_exceptional_states(
    const Group& g, int max_order = kDefaultEnumerationBound);

// True iff the subset is closed under i+j-k, which characterizes cosets.
bool verify_coset_criterion(const Group& g, std::span<const int> subset);

struct InstabilityReport {
  int period = 1;
  std::vector<double> direction;   // +1 on the orbit coset, -1 on another, 0 elsewhere
  double growth_factor = 0.0;      // Rayleigh growth under the first-return differential
  double finite_difference_error = 0.0;  // relative deviation of the central-difference check
};

// Growth of the tangent direction above under the differential of the
// first-return map of the trivial-subgroup operator, accumulated along the
// orbit as a product of per-step differentials v -> 2*(x_t * v).
// Preperiodic states are advanced onto their cycle first. H = G is rejected:
// the center admits no such direction.
InstabilityReport instability_report(const Group& g, const ExceptionalState& state);

// Largest tangent-direction growth of the differential at the Haar center;
// zero in exact arithmetic since uniform convolution kills sum-zero vectors.
double max_center_tangent_growth(const Group& g);

}  // namespace qso
