#include "qso/qso_operator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qso {

QsoOperator::QsoOperator(Group g, Subgroup h, SimplexPoint mu, BuildOptions options)
    : group_(std::move(g)),
      subgroup_(std::move(h)),
      mu_(std::move(mu)),
      options_(options) {
  const int n = group_.order();
  cosets_ = qso::cosets(group_, subgroup_);
  coset_of_.assign(n, -1);
  coset_mass_.assign(cosets_.size(), 0.0);
  for (std::size_t ci = 0; ci < cosets_.size(); ++ci)
    for (int m : cosets_[ci].members) {
      coset_of_[m] = static_cast<std::int32_t>(ci);
      coset_mass_[ci] += mu_[m];
    }

  if (group_.is_product())
    plan_ = std::make_shared<const CharacterTransform>(group_);

  if (n <= options_.dense_storage_bound) {
    mode_ = StorageMode::kDense;
    dense_.assign(static_cast<std::size_t>(n) * n * n, 0.0);
    const auto fill = [&](int f_begin, int f_end) {
      for (int f = f_begin; f < f_end; ++f)
        for (int g2 = 0; g2 < n; ++g2) {
          const int ci = coset_of_[group_.add(f, g2)];
          const double mass = coset_mass_[ci];
          double* row = &dense_[(static_cast<std::size_t>(f) * n + g2) * n];
          for (int child : cosets_[ci].members) row[child] = mu_[child] / mass;
        }
    };
    if (n >= 24) {
#pragma omp parallel for schedule(static)
      for (int f = 0; f < n; ++f) fill(f, f + 1);
    } else {
      fill(0, n);
    }
  }
}

QsoOperator build_operator(const Group& g, const Subgroup& h, SimplexPoint mu,
                           BuildOptions options) {
  if (mu.size() != g.order())
    throw std::invalid_argument("measure does not live on this group");
  for (double v : mu.weights())
    if (v < kMinPositiveMass)
      throw std::invalid_argument("measure must be strictly positive");
  if (!is_subgroup(g, h)) throw std::invalid_argument("not a subgroup of this group");
  return QsoOperator(g, h, std::move(mu), options);
}

double QsoOperator::coefficient(int parent_a, int parent_b, int child) const {
  const int n = group_.order();
  if (parent_a < 0 || parent_a >= n || parent_b < 0 || parent_b >= n || child < 0 ||
      child >= n)
    throw std::out_of_range("element index out of range");
  const int ci = coset_of_[group_.add(parent_a, parent_b)];
  if (coset_of_[child] != ci) return 0.0;
  return mu_[child] / coset_mass_[ci];
}

std::vector<double> QsoOperator::convolved(const SimplexPoint& x, ConvPath path) const {
  const int n = group_.order();
  if (x.size() != n) throw std::invalid_argument("point does not live on this group");
  if (path == ConvPath::kTransform && !plan_)
    throw std::invalid_argument("transform path needs a product group");
  const bool use_transform =
      path == ConvPath::kTransform ||
      (path == ConvPath::kAuto && plan_ && n > options_.transform_threshold);
  std::vector<double> y(static_cast<std::size_t>(n));
  if (use_transform) {
    plan_->self_convolve(x.weights(), y);
    clamp_roundoff(y);
  } else {
    self_convolve_direct(group_, x.weights(), y);
  }
  return y;
}

SimplexPoint QsoOperator::apply(const SimplexPoint& x, ConvPath path) const {
  std::vector<double> y = convolved(x, path);
  if (trivial_subgroup()) return SimplexPoint::validated(std::move(y));
  // (Vx)_h = mu(h) * S_C / mu(C) where S_C collects the convolution mass of
  // the coset C containing h.
  std::vector<double> coset_sum(cosets_.size(), 0.0);
  for (std::size_t ci = 0; ci < cosets_.size(); ++ci)
    for (int m : cosets_[ci].members) coset_sum[ci] += y[m];
  std::vector<double> out(y.size());
  for (int h = 0; h < group_.order(); ++h) {
    const int ci = coset_of_[h];
    out[h] = mu_[h] * coset_sum[ci] / coset_mass_[ci];
  }
  return SimplexPoint::validated(std::move(out));
}

SimplexPoint QsoOperator::apply_dense(const SimplexPoint& x) const {
  if (mode_ != StorageMode::kDense)
    throw std::logic_error("dense tensor was not materialized for this operator");
  const int n = group_.order();
  if (x.size() != n) throw std::invalid_argument("point does not live on this group");
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  const auto contract = [&](int h) {
    double acc = 0.0;
    for (int f = 0; f < n; ++f)
      for (int g2 = 0; g2 < n; ++g2)
        acc += dense_[(static_cast<std::size_t>(f) * n + g2) * n + h] * x[f] * x[g2];
    out[h] = acc;
  };
  if (n >= 24) {
#pragma omp parallel for schedule(static)
    for (int h = 0; h < n; ++h) contract(h);
  } else {
    for (int h = 0; h < n; ++h) contract(h);
  }
  return SimplexPoint::validated(std::move(out));
}

SimplexPoint QsoOperator::apply_convolution(const SimplexPoint& x, ConvPath path) const {
  if (!trivial_subgroup())
    throw std::invalid_argument("convolution form needs the trivial subgroup");
  return apply(x, path);
}

CoefficientReport QsoOperator::check_stochasticity() const {
  const int n = group_.order();
  CoefficientReport report;
  report.min_coefficient = n > subgroup_.order() ? 0.0 : 1.0;  // zeros exist off-coset
  double max_row = 0.0, max_sym = 0.0, min_coeff = report.min_coefficient;
  const auto scan_row = [&](int f, double& row_dev, double& sym_dev, double& coeff_min) {
    for (int g2 = f; g2 < n; ++g2) {
      const int ci = coset_of_[group_.add(f, g2)];
      double row = 0.0;
      for (int child : cosets_[ci].members) {
        const double p = coefficient(f, g2, child);
        const double q = coefficient(g2, f, child);
        sym_dev = std::max(sym_dev, std::abs(p - q));
        coeff_min = std::min(coeff_min, std::min(p, q));
        row += p;
      }
      row_dev = std::max(row_dev, std::abs(row - 1.0));
    }
  };
  if (n >= 64) {
#pragma omp parallel for schedule(dynamic) reduction(max : max_row, max_sym) \
    reduction(min : min_coeff)
    for (int f = 0; f < n; ++f) scan_row(f, max_row, max_sym, min_coeff);
  } else {
    for (int f = 0; f < n; ++f) scan_row(f, max_row, max_sym, min_coeff);
  }
  report.max_row_sum_deviation = max_row;
  report.max_symmetry_deviation = max_sym;
  report.min_coefficient = min_coeff;
  return report;
}

QsoOperator quotient_operator(const QsoOperator& op, const Subgroup& k) {
  const QuotientGroup q = quotient(op.group(), k);
  SimplexPoint factored = factor_measure(op.mu(), q);
  return build_operator(q.group, trivial_subgroup(q.group), std::move(factored),
                        BuildOptions{});
}

}  // namespace qso
