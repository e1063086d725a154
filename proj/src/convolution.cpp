#include "qso/convolution.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <vector>

#include "qso/errors.hpp"
#include "qso/transform.hpp"

namespace qso {

namespace {

constexpr int kMaxAxes = 32;  // matches the order cap in Group

// Fork only when the n^2 loop amortizes the parallel-region launch; GOMP
// charges a team start even for if(false) regions, so small orders take a
// pragma-free path.
constexpr int kParallelOrderThreshold = 256;

// Tracks the flat index of (base - t) while t runs through flat order.
// One mixed-radix decrement per step, no divisions or heap in the loop.
class Countdown {
 public:
  Countdown(const Group& g, int base)
      : factors_(g.factors().data()),
        strides_(g.strides().data()),
        axes_(static_cast<int>(g.factors().size())),
        flat_(base) {
    for (int a = axes_ - 1; a >= 0; --a) {
      diff_[a] = base % factors_[a];
      base /= factors_[a];
      counter_[a] = 0;
    }
  }

  int flat() const { return flat_; }

  void step() {
    for (int axis = axes_ - 1; axis >= 0; --axis) {
      const int m = factors_[axis];
      const auto stride = static_cast<int>(strides_[axis]);
      if (diff_[axis] > 0) {
        --diff_[axis];
        flat_ -= stride;
      } else {
        diff_[axis] = m - 1;
        flat_ += stride * (m - 1);
      }
      if (++counter_[axis] < m) return;
      counter_[axis] = 0;  // carry
    }
  }

 private:
  const int* factors_;
  const std::int64_t* strides_;
  int axes_;
  int flat_;
  std::array<int, kMaxAxes> diff_{};
  std::array<int, kMaxAxes> counter_{};
};

void check_sizes(const Group& g, std::span<const double> a, std::span<const double> b,
                 std::span<double> out) {
  const auto n = static_cast<std::size_t>(g.order());
  if (a.size() != n || b.size() != n || out.size() != n)
    throw std::invalid_argument("buffer size does not match the group order");
}

void convolve_rows(const Group& g, std::span<const double> a, std::span<const double> b,
                   std::span<double> out, int begin, int end) {
  const int n = g.order();
  if (g.is_product()) {
    for (int h = begin; h < end; ++h) {
      Countdown d(g, h);
      double acc = 0.0;
      for (int f = 0; f < n; ++f) {
        acc += a[f] * b[d.flat()];
        d.step();
      }
      out[h] = acc;
    }
  } else {
    for (int h = begin; h < end; ++h) {
      double acc = 0.0;
      for (int f = 0; f < n; ++f) acc += a[f] * b[g.sub(h, f)];
      out[h] = acc;
    }
  }
}

}  // namespace

void convolve_reference(const Group& g, std::span<const double> a,
                        std::span<const double> b, std::span<double> out) {
  check_sizes(g, a, b, out);
  const int n = g.order();
  std::fill(out.begin(), out.end(), 0.0);
  for (int f = 0; f < n; ++f)
    for (int k = 0; k < n; ++k) out[g.add(f, k)] += a[f] * b[k];
}

void self_convolve_reference(const Group& g, std::span<const double> x,
                             std::span<double> out) {
  convolve_reference(g, x, x, out);
}

void convolve_direct(const Group& g, std::span<const double> a,
                     std::span<const double> b, std::span<double> out) {
  check_sizes(g, a, b, out);
  const int n = g.order();
  if (n >= kParallelOrderThreshold) {
    constexpr int kChunks = 64;
#pragma omp parallel for schedule(static)
    for (int c = 0; c < kChunks; ++c) {
      const int begin = static_cast<int>(static_cast<std::int64_t>(n) * c / kChunks);
      const int end = static_cast<int>(static_cast<std::int64_t>(n) * (c + 1) / kChunks);
      convolve_rows(g, a, b, out, begin, end);
    }
  } else {
    convolve_rows(g, a, b, out, 0, n);
  }
}

void self_convolve_direct(const Group& g, std::span<const double> x,
                          std::span<double> out) {
  convolve_direct(g, x, x, out);
}

void clamp_roundoff(std::span<double> values, double tol) {
  for (double& v : values) {
    if (v < -tol)
      throw NumericError("negative mass beyond the round-off clamp tolerance");
    if (v < 0.0) v = 0.0;
  }
}

SimplexPoint apply_convolution(const Group& g, const SimplexPoint& x, ConvPath path,
                               int transform_threshold) {
  if (x.size() != g.order())
    throw std::invalid_argument("point does not live on this group");
  if (path == ConvPath::kTransform && !g.is_product())
    throw std::invalid_argument("transform path needs a product group");
  const bool use_transform =
      path == ConvPath::kTransform ||
      (path == ConvPath::kAuto && g.is_product() && g.order() > transform_threshold);
  std::vector<double> y(static_cast<std::size_t>(g.order()));
  if (use_transform) {
    CharacterTransform plan(g);
    plan.self_convolve(x.weights(), y);
    clamp_roundoff(y);
  } else {
    self_convolve_direct(g, x.weights(), y);
  }
  return SimplexPoint::validated(std::move(y));
}

}  // namespace qso
