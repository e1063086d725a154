#include "qso/transform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qso {

namespace {

using cd = std::complex<double>;

bool is_pow2(int m) { return m > 0 && (m & (m - 1)) == 0; }

int next_pow2(int m) {
  int p = 1;
  while (p < m) p <<= 1;
  return p;
}

struct Pow2Fft {
  int n = 1;
  std::vector<cd> roots;  // roots[k] = exp(-2*pi*i*k/n), k < n/2

  explicit Pow2Fft(int size) : n(size) {
    roots.resize(static_cast<std::size_t>(n) / 2);
    for (std::size_t k = 0; k < roots.size(); ++k)
      roots[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / n);
  }

  void forward(std::vector<cd>& a) const {
    const std::size_t size = a.size();
    for (std::size_t i = 1, j = 0; i < size; ++i) {
      std::size_t bit = size >> 1;
      for (; j & bit; bit >>= 1) j ^= bit;
      j ^= bit;
      if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= size; len <<= 1) {
      const std::size_t step = size / len;
      for (std::size_t i = 0; i < size; i += len)
        for (std::size_t k = 0; k < len / 2; ++k) {
          const cd u = a[i + k];
          const cd v = a[i + k + len / 2] * roots[k * step];
          a[i + k] = u + v;
          a[i + k + len / 2] = u - v;
        }
    }
  }

  void inverse(std::vector<cd>& a) const {
    for (cd& v : a) v = std::conj(v);
    forward(a);
    const double scale = 1.0 / static_cast<double>(a.size());
    for (cd& v : a) v = std::conj(v) * scale;
  }
};

// Arbitrary-length DFT as a chirp-modulated circular convolution of
// power-of-two length L >= 2m-1.
struct BluesteinFft {
  int m;
  int padded;
  std::vector<cd> chirp;  // chirp[j] = exp(-i*pi*j^2/m)
  Pow2Fft fft;
  std::vector<cd> kernel_fft;

  explicit BluesteinFft(int size)
      : m(size), padded(next_pow2(2 * size - 1)), fft(padded) {
    chirp.resize(m);
    for (int j = 0; j < m; ++j) {
      const auto t = static_cast<double>((static_cast<std::int64_t>(j) * j) % (2 * m));
      chirp[j] = std::polar(1.0, -std::numbers::pi * t / m);
    }
    std::vector<cd> b(padded, cd{0.0, 0.0});
    b[0] = std::conj(chirp[0]);
    for (int j = 1; j < m; ++j) {
      b[j] = std::conj(chirp[j]);
      b[padded - j] = b[j];
    }
    fft.forward(b);
    kernel_fft = std::move(b);
  }

  void forward(std::vector<cd>& line) const {
    std::vector<cd> a(padded, cd{0.0, 0.0});
    for (int j = 0; j < m; ++j) a[j] = line[j] * chirp[j];
    fft.forward(a);
    for (int k = 0; k < padded; ++k) a[k] *= kernel_fft[k];
    fft.inverse(a);
    for (int k = 0; k < m; ++k) line[k] = a[k] * chirp[k];
  }

  void inverse(std::vector<cd>& line) const {
    for (cd& v : line) v = std::conj(v);
    forward(line);
    const double scale = 1.0 / m;
    for (cd& v : line) v = std::conj(v) * scale;
  }
};

struct AxisPlan {
  int m = 1;
  std::int64_t stride = 1;
  std::unique_ptr<Pow2Fft> pow2;
  std::unique_ptr<BluesteinFft> bluestein;

  void forward(std::vector<cd>& line) const {
    if (pow2)
      pow2->forward(line);
    else
      bluestein->forward(line);
  }
  void inverse(std::vector<cd>& line) const {
    if (pow2)
      pow2->inverse(line);
    else
      bluestein->inverse(line);
  }
};

}  // namespace

struct CharacterTransform::Impl {
  int n = 1;
  std::vector<AxisPlan> axes;

  template <bool Forward>
  void run(std::vector<cd>& data) const {
    for (const AxisPlan& ax : axes) {
      if (ax.m == 1) continue;
      const std::int64_t lines = n / ax.m;
      const std::int64_t stride = ax.stride;
      const int m = ax.m;
      const auto transform_line = [&](std::int64_t li) {
        const std::int64_t inner = li % stride;
        const std::int64_t outer = li / stride;
        const std::int64_t base = outer * stride * m + inner;
        std::vector<cd> line(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) line[j] = data[base + j * stride];
        if constexpr (Forward)
          ax.forward(line);
        else
          ax.inverse(line);
        for (int j = 0; j < m; ++j) data[base + j * stride] = line[j];
      };
      if (lines >= 8 && n >= 2048) {
#pragma omp parallel for schedule(static)
        for (std::int64_t li = 0; li < lines; ++li) transform_line(li);
      } else {
        for (std::int64_t li = 0; li < lines; ++li) transform_line(li);
      }
    }
  }
};

CharacterTransform::CharacterTransform(const Group& group) {
  if (!group.is_product())
    throw std::invalid_argument("character transform needs a product group");
  auto impl = std::make_unique<Impl>();
  impl->n = group.order();
  const auto& factors = group.factors();
  const auto& strides = group.strides();
  impl->axes.resize(factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i) {
    AxisPlan& ax = impl->axes[i];
    ax.m = factors[i];
    ax.stride = strides[i];
    if (ax.m == 1) continue;
    if (is_pow2(ax.m))
      ax.pow2 = std::make_unique<Pow2Fft>(ax.m);
    else
      ax.bluestein = std::make_unique<BluesteinFft>(ax.m);
  }
  impl_ = std::move(impl);
}

CharacterTransform::~CharacterTransform() = default;
CharacterTransform::CharacterTransform(CharacterTransform&&) noexcept = default;
CharacterTransform& CharacterTransform::operator=(CharacterTransform&&) noexcept = default;

int CharacterTransform::size() const { return impl_->n; }

void CharacterTransform::forward(std::vector<cd>& data) const {
  if (static_cast<int>(data.size()) != impl_->n)
    throw std::invalid_argument("data size does not match the group order");
  impl_->run<true>(data);
}

void CharacterTransform::inverse(std::vector<cd>& data) const {
  if (static_cast<int>(data.size()) != impl_->n)
    throw std::invalid_argument("data size does not match the group order");
  impl_->run<false>(data);
}

void CharacterTransform::self_convolve(std::span<const double> x,
                                       std::span<double> out) const {
  const int n = impl_->n;
  if (static_cast<int>(x.size()) != n || static_cast<int>(out.size()) != n)
    throw std::invalid_argument("buffer size does not match the group order");
  std::vector<cd> buf(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) buf[i] = cd{x[i], 0.0};
  impl_->run<true>(buf);
  for (cd& v : buf) v *= v;
  impl_->run<false>(buf);
  for (int i = 0; i < n; ++i) out[i] = buf[i].real();
}

}  // namespace qso
