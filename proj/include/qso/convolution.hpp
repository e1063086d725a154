#pragma once

#include <span>

#include "qso/group.hpp"
#include "qso/simplex.hpp"

namespace qso {

enum class ConvPath { kAuto, kDirect, kTransform };

inline constexpr int kDefaultTransformThreshold = 64;
inline constexpr double kRoundoffClamp = 1e-10;

// Serial reference kernels, scatter form straight from the definition.
// Kept unoptimized on purpose; the parallel kernels are tested against them.
void convolve_reference(const Group& g, std::span<const double> a,
                        std::span<const double> b, std::span<double> out);
void self_convolve_reference(const Group& g, std::span<const double> x,
                             std::span<double> out);

// OpenMP gather kernels: out_h = sum_f a_f * b_{h-f}.
void convolve_direct(const Group& g, std::span<const double> a,
                     std::span<const double> b, std::span<double> out);
void self_convolve_direct(const Group& g, std::span<const double> x,
                          std::span<double> out);

// Clamp small negative round-off to zero; throws NumericError below -tol.
void clamp_roundoff(std::span<double> values, double tol = kRoundoffClamp);

// Group self-convolution of a probability vector, (x*x)_h = sum_{f+g=h} x_f x_g.
// kAuto picks the character-transform path for product groups with
// order > transform_threshold, the direct kernel otherwise.
SimplexPoint apply_convolution(const Group& g, const SimplexPoint& x,
                               ConvPath path = ConvPath::kAuto,
                               int transform_threshold = kDefaultTransformThreshold);

}  // namespace qso
