#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "qso/group.hpp"

namespace qso {

// Character transform of a product group: a multidimensional DFT over the
// cyclic factors. Power-of-two axes run radix-2 Cooley-Tukey, everything
// else goes through Bluestein's chirp embedding. Plans are immutable after
// construction and safe to share between threads.
class CharacterTransform {
 public:
  explicit CharacterTransform(const Group& group);
  ~CharacterTransform();
  CharacterTransform(CharacterTransform&&) noexcept;
  CharacterTransform& operator=(CharacterTransform&&) noexcept;

  int size() const;

  void forward(std::vector<std::complex<double>>& data) const;
  void inverse(std::vector<std::complex<double>>& data) const;

  // out = x * x via pointwise squaring in the character domain. Raw output:
  // entries may carry tiny negative round-off, callers clamp.
  void self_convolve(std::span<const double> x, std::span<double> out) const;

 private:
  struct Impl;
  std::unique_ptr<const Impl> impl_;
};

}  // namespace qso
