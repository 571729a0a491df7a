#include "doctest.h"
#include "support.hpp"

#include "hilmod/algebra.hpp"
#include "hilmod/error.hpp"
#include "hilmod/random.hpp"

#include <cmath>

using namespace hilmod;
using test::m2;

TEST_CASE("shape validation") {
  CHECK_THROWS_AS(AlgebraShape(std::vector<Index>{}), Error);
  CHECK_THROWS_AS(AlgebraShape({2, 0}), Error);
  CHECK(AlgebraShape({2, 1}).algebra_dim() == 5);
}

TEST_CASE("operator norm") {
  CHECK(operator_norm(AlgebraElement::identity(AlgebraShape{2})) == doctest::Approx(1.0));
  CHECK(operator_norm(test::gap_x()) == doctest::Approx(1.0));
  const AlgebraElement d(AlgebraShape{1, 1}, {test::mat({{3}}), test::mat({{-4}})});
  CHECK(operator_norm(d) == doctest::Approx(4.0));
}

TEST_CASE("C*-identity on random elements") {
  random::Rng rng(21);
  for (int rep = 0; rep < 20; ++rep) {
    const AlgebraElement a = random::random_element(AlgebraShape{3, 1, 2}, rng);
    const double n = operator_norm(a);
    CHECK(operator_norm(a.adjoint() * a) == doctest::Approx(n * n).epsilon(1e-10));
  }
}

TEST_CASE("hermitian eigensystem") {
  const auto e = hermitian_eigensystem(m2({{4, 0}, {0, 9}}));
  CHECK(e.eigenvalues[0](0) == doctest::Approx(9.0));
  CHECK(e.eigenvalues[0](1) == doctest::Approx(4.0));
  const auto f = hermitian_eigensystem(m2({{2, 1}, {1, 2}}));
  CHECK(f.eigenvalues[0](0) == doctest::Approx(3.0));
  CHECK(f.eigenvalues[0](1) == doctest::Approx(1.0));
  const auto z = hermitian_eigensystem(AlgebraElement::zero(AlgebraShape{2, 1}));
  CHECK(z.eigenvalues[0].cwiseAbs().maxCoeff() == 0.0);
  CHECK(z.eigenvalues[1].cwiseAbs().maxCoeff() == 0.0);
  try {
    hermitian_eigensystem(m2({{0, 1}, {0, 0}}));
    FAIL("expected NotHermitian");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::NotHermitian);
  }
}

TEST_CASE("positive square root") {
  CHECK(test::max_abs_diff(positive_sqrt(m2({{4, 0}, {0, 9}})), m2({{2, 0}, {0, 3}})) < 1e-12);
  const double s = std::sqrt(3.0);
  const AlgebraElement expected = m2({{(s + 1) / 2, (s - 1) / 2}, {(s - 1) / 2, (s + 1) / 2}});
  CHECK(test::max_abs_diff(positive_sqrt(m2({{2, 1}, {1, 2}})), expected) < 1e-12);
  const AlgebraElement id = AlgebraElement::identity(AlgebraShape{2, 3});
  CHECK(test::max_abs_diff(positive_sqrt(id), id) < 1e-12);
  try {
    positive_sqrt(m2({{1, 0}, {0, -1}}));
    FAIL("expected NotPositive");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::NotPositive);
  }
}

TEST_CASE("square root reconstructs random positive elements") {
  random::Rng rng(22);
  for (int rep = 0; rep < 20; ++rep) {
    const AlgebraElement g = random::random_element(AlgebraShape{2, 3}, rng);
    const AlgebraElement a = g.adjoint() * g;
    const AlgebraElement r = positive_sqrt(a);
    CHECK(test::max_abs_diff(r * r, a) < 1e-10 * operator_norm(a));
    CHECK(is_positive(r).positive);
  }
}

TEST_CASE("polar decomposition examples") {
  const AlgebraElement swap = m2({{0, 1}, {1, 0}});
  const auto p = polar_decompose(swap);
  CHECK_FALSE(p.singular);
  CHECK(test::max_abs_diff(p.u, swap) < 1e-12);
  CHECK(test::max_abs_diff(p.h, AlgebraElement::identity(AlgebraShape{2})) < 1e-12);

  const auto q = polar_decompose(m2({{2, 0}, {0, -3}}));
  CHECK(test::max_abs_diff(q.u, m2({{1, 0}, {0, -1}})) < 1e-12);
  CHECK(test::max_abs_diff(q.h, m2({{2, 0}, {0, 3}})) < 1e-12);

  const auto r = polar_decompose(test::gap_x());
  CHECK(r.singular);
  CHECK(test::max_abs_diff(r.u, test::gap_x()) < 1e-12);
  CHECK(test::max_abs_diff(r.h, test::gap_x()) < 1e-12);
}

TEST_CASE("polar consistency on random elements, including a completed unitary factor") {
  random::Rng rng(23);
  for (int rep = 0; rep < 20; ++rep) {
    const AlgebraElement a = random::random_element(AlgebraShape{2, 1, 3}, rng);
    const auto p = polar_decompose(a);
    CHECK(test::max_abs_diff(p.u * p.h, a) < 1e-10 * operator_norm(a));
    CHECK(test::max_abs_diff(p.h, abs_element(a)) < 1e-10 * operator_norm(a));
  }
  const AlgebraElement u = unitary_polar_factor(test::gap_x());
  CHECK(test::max_abs_diff(u.adjoint() * u, AlgebraElement::identity(AlgebraShape{2})) < 1e-12);
  CHECK(test::max_abs_diff(u * abs_element(test::gap_x()), test::gap_x()) < 1e-12);
}

TEST_CASE("range projection") {
  const AlgebraElement id = AlgebraElement::identity(AlgebraShape{2});
  CHECK(test::max_abs_diff(range_projection(m2({{2, 1}, {1, 2}})), id) < 1e-12);
  CHECK(test::max_abs_diff(range_projection(test::gap_x()), test::gap_x()) < 1e-12);
  const AlgebraElement zero = AlgebraElement::zero(AlgebraShape{2});
  CHECK(test::max_abs_diff(range_projection(zero), zero) == 0.0);

  random::Rng rng(24);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix g = random::gaussian_matrix(3, 1, rng);
    const AlgebraElement a = AlgebraElement::from_matrix(g * g.adjoint());
    const AlgebraElement p = range_projection(a);
    CHECK(test::max_abs_diff(p * p, p) < 1e-10);
    CHECK(test::max_abs_diff(p.adjoint(), p) < 1e-12);
    CHECK(test::max_abs_diff(p * a, a) < 1e-10 * operator_norm(a));
    CHECK(test::max_abs_diff(a * p, a) < 1e-10 * operator_norm(a));
  }
}

TEST_CASE("inversion") {
  const AlgebraElement id = AlgebraElement::identity(AlgebraShape{2});
  const auto a = invert(id);
  CHECK(test::max_abs_diff(a.inverse, id) < 1e-14);
  CHECK(a.inverse_norm == doctest::Approx(1.0));
  const auto b = invert(m2({{2, 0}, {0, 4}}));
  CHECK(test::max_abs_diff(b.inverse, m2({{0.5, 0}, {0, 0.25}})) < 1e-14);
  CHECK(b.inverse_norm == doctest::Approx(0.5));
  const auto c = invert(m2({{2, 1}, {1, 2}}));
  CHECK(test::max_abs_diff(c.inverse, m2({{2.0 / 3, -1.0 / 3}, {-1.0 / 3, 2.0 / 3}})) < 1e-14);
  try {
    invert(AlgebraElement(AlgebraShape{1, 2}, {test::mat({{1}}), test::mat({{1, 1}, {1, 1}})}));
    FAIL("expected Singular");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::Singular);
    REQUIRE(err.index());
    CHECK(*err.index() == 1);
  }
}

TEST_CASE("positivity check") {
  const auto id = is_positive(AlgebraElement::identity(AlgebraShape{2}));
  CHECK(id.positive);
  CHECK(id.margin == doctest::Approx(1.0));
  CHECK_FALSE(is_positive(m2({{0, 1}, {0, 0}})).positive);
  const auto edge = is_positive(m2({{2, 1}, {1, 2}}) - AlgebraElement::identity(AlgebraShape{2}));
  CHECK(edge.positive);
  CHECK(std::abs(edge.margin) < 1e-12);
}
