#include <doctest.h>

#include <cmath>
#include <complex>

#include "qso/convolution.hpp"
#include "qso/errors.hpp"
#include "qso/transform.hpp"
#include "support.hpp"

using namespace qso;

namespace {

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("convolution");

TEST_CASE("delta convolution doubles the shift") {
  const Group z3({3});
  const auto d1 = SimplexPoint::delta(3, 1);
  const auto y = apply_convolution(z3, d1, ConvPath::kDirect);
  CHECK(y[2] == doctest::Approx(1.0));
  CHECK(y[0] == doctest::Approx(0.0));
  CHECK(y[1] == doctest::Approx(0.0));
}

TEST_CASE("coset-uniform states double their coset") {
  const Group z4({4});
  const auto on_subgroup = SimplexPoint::validated({0.5, 0.0, 0.5, 0.0});
  const auto fixed = apply_convolution(z4, on_subgroup, ConvPath::kDirect);
  for (int i = 0; i < 4; ++i) CHECK(fixed[i] == doctest::Approx(on_subgroup[i]).epsilon(1e-14));

  const auto on_coset = SimplexPoint::validated({0.0, 0.5, 0.0, 0.5});
  const auto doubled = apply_convolution(z4, on_coset, ConvPath::kDirect);
  CHECK(doubled[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(doubled[2] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(doubled[1] == doctest::Approx(0.0));
  CHECK(doubled[3] == doctest::Approx(0.0));
}

TEST_CASE("uniform is a fixed point") {
  for (const auto& factors : {std::vector<int>{5}, {4, 2}, {3, 3}}) {
    const Group g(factors);
    const auto y = apply_convolution(g, SimplexPoint::uniform(g.order()));
    for (int i = 0; i < g.order(); ++i)
      CHECK(y[i] == doctest::Approx(1.0 / g.order()).epsilon(1e-13));
  }
}

TEST_CASE("parallel gather matches the serial reference") {
  for (const auto& factors :
       {std::vector<int>{2}, {7}, {12}, {4, 2}, {3, 5}, {2, 2, 3}, {97}, {6, 6}}) {
    const Group g(factors);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto x = SimplexPoint::dirichlet(g.order(), seed);
      std::vector<double> ref(g.order()), par(g.order());
      self_convolve_reference(g, x.weights(), ref);
      self_convolve_direct(g, x.weights(), par);
      CHECK(max_abs_diff(ref, par) < 1e-14);
    }
  }
}

TEST_CASE("bilinear convolution is commutative and mass preserving") {
  const Group g({4, 3});
  const auto a = SimplexPoint::dirichlet(12, 3);
  const auto b = SimplexPoint::dirichlet(12, 4);
  std::vector<double> ab(12), ba(12);
  convolve_direct(g, a.weights(), b.weights(), ab);
  convolve_direct(g, b.weights(), a.weights(), ba);
  CHECK(max_abs_diff(ab, ba) < 1e-15);
  double mass = 0.0;
  for (double v : ab) mass += v;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("transform path agrees with the direct kernel") {
  for (const auto& factors : {std::vector<int>{2}, {3}, {8}, {12}, {31}, {97}, {128},
                              {360}, {4, 2}, {3, 9}, {16, 16}, {5, 7}, {2, 2, 2, 2}}) {
    const Group g(factors);
    const CharacterTransform plan(g);
    for (std::uint64_t seed = 10; seed < 13; ++seed) {
      const auto x = SimplexPoint::dirichlet(g.order(), seed);
      std::vector<double> ref(g.order()), tra(g.order());
      self_convolve_reference(g, x.weights(), ref);
      plan.self_convolve(x.weights(), tra);
      CHECK(max_abs_diff(ref, tra) < 1e-12);
    }
  }
}

TEST_CASE("transform round-trips") {
  for (const auto& factors : {std::vector<int>{16}, {7}, {60}, {4, 9}}) {
    const Group g(factors);
    const CharacterTransform plan(g);
    const auto x = SimplexPoint::dirichlet(g.order(), 77);
    std::vector<std::complex<double>> data(g.order());
    for (int i = 0; i < g.order(); ++i) data[i] = x[i];
    plan.forward(data);
    plan.inverse(data);
    for (int i = 0; i < g.order(); ++i) {
      CHECK(std::abs(data[i].real() - x[i]) < 1e-13);
      CHECK(std::abs(data[i].imag()) < 1e-13);
    }
  }
}

TEST_CASE("path selection and guards") {
  const Group big({100});
  const auto x = SimplexPoint::dirichlet(100, 5);
  const auto a = apply_convolution(big, x, ConvPath::kAuto);      // transform (n > 64)
  const auto d = apply_convolution(big, x, ConvPath::kDirect);
  const auto t = apply_convolution(big, x, ConvPath::kTransform);
  CHECK(max_abs_diff(a.weights(), d.weights()) < 1e-12);
  CHECK(max_abs_diff(t.weights(), d.weights()) < 1e-12);

  // table-backed groups have no transform path
  const auto q = quotient(Group({8}), subgroup_closure(Group({8}), std::vector<int>{4}));
  const auto xq = SimplexPoint::dirichlet(q.group.order(), 6);
  CHECK_THROWS_AS(apply_convolution(q.group, xq, ConvPath::kTransform), std::invalid_argument);
  CHECK_NOTHROW(apply_convolution(q.group, xq, ConvPath::kDirect));

  std::vector<double> dirty{0.5, -1e-3};
  CHECK_THROWS_AS(clamp_roundoff(dirty), NumericError);
  std::vector<double> dusty{0.5, -1e-12, 0.5};
  clamp_roundoff(dusty);
  CHECK(dusty[1] == 0.0);
}

TEST_SUITE_END();
