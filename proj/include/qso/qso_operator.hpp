#pragma once

#include <memory>
#include <vector>

#include "qso/convolution.hpp"
#include "qso/group.hpp"
#include "qso/simplex.hpp"
#include "qso/transform.hpp"

namespace qso {

inline constexpr double kMinPositiveMass = 1e-15;
inline constexpr int kDefaultDenseBound = 64;

enum class StorageMode { kDense, kLazy };

struct BuildOptions {
  int dense_storage_bound = kDefaultDenseBound;
  int transform_threshold = kDefaultTransformThreshold;
};

struct CoefficientReport {
  double max_row_sum_deviation = 0.0;
  double max_symmetry_deviation = 0.0;
  double min_coefficient = 0.0;

  bool within(double tol = 1e-12) const {
    return max_row_sum_deviation <= tol && max_symmetry_deviation <= tol &&
           min_coefficient >= 0.0;
  }
};

// The heredity operator induced by (G, H, mu): parents f and g produce
// child h with probability mu(h)/mu(f+g+H) when h lies in the coset f+g+H,
// zero otherwise. Weighting the child (and not a parent) by mu is the one
// choice proportional to mu on the child coset whose rows sum to one; it
// also reproduces both degenerate cases, plain convolution for H = {e} and
// the constant map onto mu for H = G.
// Immutable after build; apply is pure and reentrant.
class QsoOperator {
 public:
  const Group& group() const { return group_; }
  const Subgroup& subgroup() const { return subgroup_; }
  const SimplexPoint& mu() const { return mu_; }
  StorageMode mode() const { return mode_; }
  bool trivial_subgroup() const { return subgroup_.order() == 1; }

  const std::vector<Coset>& cosets() const { return cosets_; }
  int coset_index_of(int g) const { return coset_of_[static_cast<std::size_t>(g)]; }
  double coset_mass(int coset_index) const {
    return coset_mass_[static_cast<std::size_t>(coset_index)];
  }

  // Probability that the parent pair produces the child, evaluated from the
  // coset structure rather than the dense tensor.
  double coefficient(int parent_a, int parent_b, int child) const;

  // Production path: group self-convolution (direct or transform kernel)
  // followed by per-coset redistribution proportional to mu.
  SimplexPoint apply(const SimplexPoint& x, ConvPath path = ConvPath::kAuto) const;

  // O(n^3) contraction against the stored coefficient tensor. Validation
  // route; requires StorageMode::kDense.
  SimplexPoint apply_dense(const SimplexPoint& x) const;

  // Pure convolution form; only defined for the trivial subgroup.
  SimplexPoint apply_convolution(const SimplexPoint& x,
                                 ConvPath path = ConvPath::kAuto) const;

  // Row sums, symmetry, and sign of the full coefficient family.
  CoefficientReport check_stochasticity() const;

  friend QsoOperator build_operator(const Group& g, const Subgroup& h, SimplexPoint mu,
                                    BuildOptions options);

 private:
  QsoOperator(Group g, Subgroup h, SimplexPoint mu, BuildOptions options);

  std::vector<double> convolved(const SimplexPoint& x, ConvPath path) const;

  Group group_;
  Subgroup subgroup_;
  SimplexPoint mu_;
  BuildOptions options_;
  std::vector<Coset> cosets_;
  std::vector<std::int32_t> coset_of_;
  std::vector<double> coset_mass_;
  StorageMode mode_ = StorageMode::kLazy;
  std::vector<double> dense_;  // [(f*n + g)*n + h] when kDense
  std::shared_ptr<const CharacterTransform> plan_;
};

QsoOperator build_operator(const Group& g, const Subgroup& h, SimplexPoint mu,
                           BuildOptions options = {});

// The operator induced on G/K by the factor measure mu_K and the trivial
// subgroup. Projection intertwines the dynamics whenever K contains the
// operator's subgroup.
QsoOperator quotient_operator(const QsoOperator& op, const Subgroup& k);

}  // namespace qso
