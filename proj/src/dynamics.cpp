#include "qso/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "qso/convolution.hpp"

namespace qso {

namespace {

std::vector<std::int64_t> quantize(const SimplexPoint& x, double quantum) {
  std::vector<std::int64_t> key(static_cast<std::size_t>(x.size()));
  for (int i = 0; i < x.size(); ++i)
    key[static_cast<std::size_t>(i)] = std::llround(x[i] / quantum);
  return key;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

std::vector<double> self_convolved(const Group& g, const std::vector<double>& x) {
  std::vector<double> y(x.size());
  self_convolve_direct(g, x, y);
  return y;
}

}  // namespace

std::string_view to_string(TrajectoryVerdict verdict) {
  switch (verdict) {
    case TrajectoryVerdict::kConvergedToCenter: return "converged-to-center";
    case TrajectoryVerdict::kCycleDetected: return "cycle-detected";
    case TrajectoryVerdict::kBudgetExhausted: return "budget-exhausted";
  }
  return "unknown";
}

TrajectoryReport iterate(const QsoOperator& op, const SimplexPoint& x0, int max_steps,
                         double tol) {
  if (max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (x0.size() != op.group().order())
    throw std::invalid_argument("point does not live on this group");

  TrajectoryReport report;
  std::map<std::vector<std::int64_t>, int> seen;
  SimplexPoint x = x0;
  for (int t = 0;; ++t) {
    report.sup_norm_series.push_back(sup_norm(x));
    const double dist = sup_distance_to_center(x);
    report.center_distance_series.push_back(dist);
    report.steps = t;
    if (dist < tol) {
      report.verdict = TrajectoryVerdict::kConvergedToCenter;
      break;
    }
    auto [it, inserted] = seen.emplace(quantize(x, kCycleQuantum), t);
    if (!inserted) {
      report.verdict = TrajectoryVerdict::kCycleDetected;
      report.cycle = CycleInfo{it->second, t - it->second};
      break;
    }
    if (t == max_steps) {
      report.verdict = TrajectoryVerdict::kBudgetExhausted;
      break;
    }
    x = op.apply(x);
  }
  report.final_state = std::move(x);
  return report;
}

SimplexPoint cesaro_average(const QsoOperator& op, const SimplexPoint& x0,
                            int term_count) {
  if (term_count < 1) throw std::invalid_argument("need at least one term");
  if (x0.size() != op.group().order())
    throw std::invalid_argument("point does not live on this group");
  std::vector<double> acc(static_cast<std::size_t>(x0.size()), 0.0);
  SimplexPoint x = x0;
  for (int i = 0; i < term_count; ++i) {
    for (int j = 0; j < x.size(); ++j) acc[static_cast<std::size_t>(j)] += x[j];
    if (i + 1 < term_count) x = op.apply(x);
  }
  for (double& v : acc) v /= term_count;
  return SimplexPoint::validated(std::move(acc));
}

std::optional<CycleInfo> detect_cycle(std::span<const SimplexPoint> series,
                                      double quantum) {
  std::map<std::vector<std::int64_t>, int> seen;
  for (std::size_t t = 0; t < series.size(); ++t) {
    auto [it, inserted] = seen.emplace(quantize(series[t], quantum), static_cast<int>(t));
    if (!inserted) return CycleInfo{it->second, static_cast<int>(t) - it->second};
  }
  return std::nullopt;
}

double envelope(double p) {
  if (!(p > 0.0) || p > 1.0)
    throw std::domain_error("envelope argument must lie in (0, 1]");
  const double k = std::floor(1.0 / p);
  const double r = 1.0 - k * p;
  return k * p * p + r * r;
}

double envelope_maximizer_value(double p, int n) {
  if (!(p > 0.0) || p > 1.0)
    throw std::domain_error("envelope argument must lie in (0, 1]");
  if (n < 1 || static_cast<double>(n) * p < 1.0 - 1e-9)
    throw std::domain_error("infeasible: n*p < 1");
  auto full = static_cast<long long>(std::floor(1.0 / p));
  full = std::min<long long>(full, n);
  double remainder = 1.0 - static_cast<double>(full) * p;
  if (remainder < 0.0) remainder = 0.0;  // p ~ 1/k round-off
  if (remainder > 1e-12 && full + 1 > n)
    throw std::domain_error("infeasible: remainder does not fit");
  std::vector<double> x(static_cast<std::size_t>(full), p);
  if (remainder > 1e-12) x.push_back(remainder);
  double value = 0.0;
  for (double v : x) value += v * v;
  return value;
}

double envelope_recurrence(double p, int n) {
  if (!(p > 0.0)) throw std::domain_error("envelope argument must be positive");
  if (p >= 1.0) return 1.0;
  if (n < 1 || static_cast<double>(n) * p < 1.0 - 1e-9)
    throw std::domain_error("infeasible: n*p < 1");
  if (n == 1) return 1.0;  // single slot forces p >= 1, handled above up to round-off
  const double inner = p / (1.0 - p);
  const double tail = inner >= 1.0 ? 1.0 : envelope_recurrence(inner, n - 1);
  return p * p + (1.0 - p) * (1.0 - p) * tail;
}

std::vector<ExceptionalState> enumerate_exceptional_states(const Group& g,
                                                           int max_order) {
  std::vector<ExceptionalState> out;
  for (const Subgroup& h : enumerate_subgroups(g, max_order)) {
    const QuotientGroup q = quotient(g, h);
    const int nq = q.group.order();
    for (int ci = 0; ci < nq; ++ci) {
      // doubling orbit on coset labels
      std::vector<int> seen(static_cast<std::size_t>(nq), -1);
      int c = ci, t = 0;
      while (seen[static_cast<std::size_t>(c)] < 0) {
        seen[static_cast<std::size_t>(c)] = t++;
        c = q.group.add(c, c);
      }
      const int preperiod = seen[static_cast<std::size_t>(c)];
      std::vector<double> w(static_cast<std::size_t>(g.order()), 0.0);
      for (int m : q.cosets[static_cast<std::size_t>(ci)].members)
        w[static_cast<std::size_t>(m)] = 1.0 / h.order();
      out.push_back(ExceptionalState{q.cosets[static_cast<std::size_t>(ci)].representative,
                                     h, SimplexPoint::validated(std::move(w)), preperiod,
                                     t - preperiod});
    }
  }
  return out;
}

bool verify_coset_criterion(const Group& g, std::span<const int> subset) {
  if (subset.empty()) throw std::invalid_argument("subset must be nonempty");
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(g.order()), 0);
  for (int v : subset) {
    if (v < 0 || v >= g.order()) throw std::invalid_argument("element index out of range");
    mask[static_cast<std::size_t>(v)] = 1;
  }
  for (int i : subset)
    for (int j : subset)
      for (int k : subset)
        if (!mask[static_cast<std::size_t>(g.add(g.add(i, j), g.neg(k)))]) return false;
  return true;
}

InstabilityReport instability_report(const Group& g, const ExceptionalState& state) {
  if (state.subgroup.order() == g.order())
    throw std::domain_error("the center admits no instability direction");
  if (state.doubling_period < 1) throw std::invalid_argument("period must be at least 1");

  const int n = g.order();
  std::vector<double> x(state.state.data());
  for (int t = 0; t < state.doubling_preperiod; ++t) x = self_convolved(g, x);

  const int period = state.doubling_period;
  std::vector<std::vector<double>> orbit;
  orbit.reserve(static_cast<std::size_t>(period));
  orbit.push_back(x);
  for (int t = 1; t < period; ++t) orbit.push_back(self_convolved(g, orbit.back()));

  // +1 on the coset supporting the cycle state, -1 on the first other coset.
  const auto cs = cosets(g, state.subgroup);
  const double positive_level = 0.5 / state.subgroup.order();
  int support = -1;
  for (std::size_t ci = 0; ci < cs.size(); ++ci)
    if (x[static_cast<std::size_t>(cs[ci].members.front())] > positive_level) {
      support = static_cast<int>(ci);
      break;
    }
  const int other = support == 0 ? 1 : 0;
  std::vector<double> direction(static_cast<std::size_t>(n), 0.0);
  for (int m : cs[static_cast<std::size_t>(support)].members)
    direction[static_cast<std::size_t>(m)] = 1.0;
  for (int m : cs[static_cast<std::size_t>(other)].members)
    direction[static_cast<std::size_t>(m)] = -1.0;

  // chain rule along the orbit: D(V^l) = prod_t (v -> 2 * x_t * v)
  std::vector<double> v = direction;
  std::vector<double> scratch(static_cast<std::size_t>(n));
  for (int t = 0; t < period; ++t) {
    convolve_direct(g, orbit[static_cast<std::size_t>(t)], v, scratch);
    for (double& e : scratch) e *= 2.0;
    v.swap(scratch);
  }
  const double growth = dot(direction, v) / dot(direction, direction);

  // central finite differences on the raw polynomial first-return map
  const double eps = 1e-6;
  auto advance = [&](std::vector<double> y) {
    for (int t = 0; t < period; ++t) y = self_convolved(g, y);
    return y;
  };
  std::vector<double> plus(x), minus(x);
  for (int i = 0; i < n; ++i) {
    plus[static_cast<std::size_t>(i)] += eps * direction[static_cast<std::size_t>(i)];
    minus[static_cast<std::size_t>(i)] -= eps * direction[static_cast<std::size_t>(i)];
  }
  plus = advance(std::move(plus));
  minus = advance(std::move(minus));
  std::vector<double> fd(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    fd[static_cast<std::size_t>(i)] =
        (plus[static_cast<std::size_t>(i)] - minus[static_cast<std::size_t>(i)]) /
        (2.0 * eps);
  for (int i = 0; i < n; ++i) fd[static_cast<std::size_t>(i)] -= v[static_cast<std::size_t>(i)];
  const double rel = norm2(fd) / std::max(norm2(v), 1e-300);

  return InstabilityReport{period, std::move(direction), growth, rel};
}

double max_center_tangent_growth(const Group& g) {
  const int n = g.order();
  if (n == 1) return 0.0;
  const std::vector<double> center(static_cast<std::size_t>(n), 1.0 / n);
  std::vector<double> v(static_cast<std::size_t>(n));
  std::vector<double> image(static_cast<std::size_t>(n));
  double worst = 0.0;
  for (int i = 1; i < n; ++i) {
    std::fill(v.begin(), v.end(), 0.0);
    v[0] = -1.0;
    v[static_cast<std::size_t>(i)] = 1.0;
    convolve_direct(g, center, v, image);
    for (double& e : image) e *= 2.0;
    worst = std::max(worst, norm2(image) / norm2(v));
  }
  return worst;
}

}  // namespace qso
