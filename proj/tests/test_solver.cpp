#include "doctest.h"
#include "support.hpp"

#include "hilmod/error.hpp"
#include "hilmod/flatten.hpp"
#include "hilmod/random.hpp"
#include "hilmod/solver.hpp"

#include <cmath>

using namespace hilmod;

namespace {

// Independent route: dense solve of the flattened system.
ModuleElement dense_solve(const ModuleOperator& t, const ModuleElement& z) {
  const FlattenedSystem sys = flatten(t);
  return unflatten(t.domain(), Eigen::FullPivLU<Matrix>(sys.matrix).solve(flatten(z)));
}

double relative_diff(const ModuleElement& a, const ModuleElement& b) {
  return (flatten(a) - flatten(b)).norm() / std::max(1e-300, flatten(b).norm());
}

CoercivityCertificate cert_with(double c) {
  CoercivityCertificate cert;
  cert.c = c;
  cert.k = 1.0;
  return cert;
}

}  // namespace

TEST_CASE("Riesz case: identity form") {
  random::Rng rng(81);
  const ModuleSpace space(AlgebraShape{2, 1}, 2);
  const auto b = SesquilinearForm::inner_product(space);
  const auto z = random::random_module_element(space, rng);
  const auto r = lax_milgram_solve(b, DualFunctional::represented_by(z), certify_positive_invertible(b));
  CHECK(test::max_abs_diff(r.solution, z) < 1e-14);
  CHECK(r.residual < 1e-13);
  CHECK(r.norm_bound_ok);
  CHECK(std::abs(r.bound_slack) < 1e-12);
  CHECK(r.route == CoercivityRoute::PositiveInvertible);
}

TEST_CASE("scaled identity") {
  random::Rng rng(82);
  const ModuleSpace space(AlgebraShape{2}, 1);
  const SesquilinearForm b(ModuleOperator::scalar(space, 2.0));
  const auto z = random::random_module_element(space, rng);
  const auto r = lax_milgram_solve(b, DualFunctional::represented_by(z), certify_positive_invertible(b));
  CHECK(test::max_abs_diff(r.solution, z * Complex(0.5)) < 1e-14);
  CHECK(r.c == doctest::Approx(2.0));
  CHECK(std::abs(r.bound_slack) < 1e-12);
}

TEST_CASE("positive invertible operators match the flattened dense solve") {
  random::Rng rng(83);
  const ModuleSpace space(AlgebraShape{2, 1}, 2);
  for (int rep = 0; rep < 20; ++rep) {
    const ModuleOperator t = random::random_positive_operator(space, rng);
    const SesquilinearForm b(t);
    const auto z = random::random_module_element(space, rng);
    const auto r = lax_milgram_solve(b, DualFunctional::represented_by(z), certify_positive_invertible(b));
    CHECK(relative_diff(r.solution, dense_solve(t, z)) < 1e-9);
    CHECK(r.residual <= 1e-8 * std::max(1.0, r.tau_norm));
    CHECK(r.norm_bound_ok);
    CHECK(r.uniqueness_gap < 1e-9);
  }
}

TEST_CASE("black-box functionals use the sampled norm") {
  random::Rng rng(84);
  const ModuleSpace space(AlgebraShape{2}, 2);
  const ModuleOperator t = random::random_positive_operator(space, rng);
  const SesquilinearForm b(t);
  const auto z = random::random_module_element(space, rng);
  const auto tau = DualFunctional::black_box(space, [&](const ModuleElement& y) { return inner_product(z, y); });
  const auto r = lax_milgram_solve(b, tau, certify_positive_invertible(b));
  CHECK(r.tau_norm_is_lower_bound);
  CHECK(r.tau_norm <= module_norm(z) * (1 + 1e-12));
  CHECK(relative_diff(r.solution, dense_solve(t, z)) < 1e-9);
}

TEST_CASE("singular operators are reported") {
  const ModuleSpace space(AlgebraShape{2}, 1);
  const SesquilinearForm b(ModuleOperator(space, space, {test::gap_x()}));
  try {
    lax_milgram_solve(b, DualFunctional::represented_by(ModuleElement::generator(space, 0)), cert_with(1.0));
    FAIL("expected SingularOperator");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::SingularOperator);
  }
}

TEST_CASE("the norm bound flags an overstated constant") {
  random::Rng rng(85);
  const ModuleSpace space(AlgebraShape{2}, 1);
  const SesquilinearForm b(ModuleOperator(space, space, {test::m2({{1, 0}, {0, 0.5}})}));
  const auto z = ModuleElement(space, {test::m2({{0, 0}, {0, 1}})});
  const auto r = lax_milgram_solve(b, DualFunctional::represented_by(z), cert_with(1.0));
  CHECK_FALSE(r.norm_bound_ok);
  CHECK(r.bound_slack == doctest::Approx(-1.0));
}

TEST_CASE("constant family equals the plain solve") {
  random::Rng rng(86);
  const ModuleSpace space(AlgebraShape{2, 1}, 2);
  const SesquilinearForm b(random::random_positive_operator(space, rng));
  const auto cert = certify_positive_invertible(b);
  const auto tau = DualFunctional::represented_by(random::random_module_element(space, rng));
  const auto whole = Submodule::whole(space);
  const auto fam = directed_family_solve(b, tau, {whole, whole}, {whole, whole}, cert);
  const auto plain = lax_milgram_solve(b, tau, cert);
  CHECK(test::max_abs_diff(fam.final.solution, plain.solution) < 1e-12);
  CHECK(fam.levels.size() == 2);
}

TEST_CASE("scalar chain: levels are orthogonal projections of z") {
  random::Rng rng(87);
  const ModuleSpace space(AlgebraShape{1}, 4);
  const auto b = SesquilinearForm::inner_product(space);
  const auto z = random::random_module_element(space, rng);
  std::vector<Submodule> chain;
  for (std::size_t l = 1; l <= 4; ++l) {
    std::vector<std::size_t> idx(l);
    for (std::size_t k = 0; k < l; ++k) idx[k] = k;
    chain.push_back(Submodule::coordinate(space, idx));
  }
  const auto fam = hilbert_space_solve(b, DualFunctional::represented_by(z), chain, chain, certify_positive_invertible(b));
  for (std::size_t l = 0; l < 4; ++l) {
    CHECK(test::max_abs_diff(fam.levels[l].solution, chain[l].project(z)) < 1e-14);
    if (l > 0) CHECK(fam.levels[l].distance_to_final <= fam.levels[l - 1].distance_to_final + 1e-14);
  }
  CHECK(test::max_abs_diff(fam.final.solution, z) < 1e-14);
  CHECK(fam.union_residual < 1e-12);
}

TEST_CASE("M2 chain with a positive operator converges to the full solve") {
  random::Rng rng(88);
  const ModuleSpace space(AlgebraShape{2}, 2);
  const SesquilinearForm b(random::random_positive_operator(space, rng));
  const auto cert = certify_positive_invertible(b);
  const auto tau = DualFunctional::represented_by(random::random_module_element(space, rng));
  const std::vector<Submodule> chain{Submodule::coordinate(space, {0}), Submodule::whole(space)};
  const auto fam = directed_family_solve(b, tau, chain, chain, cert);
  const auto full = lax_milgram_solve(b, tau, cert);
  CHECK(relative_diff(fam.final.solution, full.solution) < 1e-8);
  for (const auto& level : fam.levels) {
    CHECK(level.residual <= 1e-8);
    CHECK(level.c_level >= cert.c * (1 - 1e-9));
  }
}

TEST_CASE("family errors") {
  const ModuleSpace space(AlgebraShape{2}, 2);
  const auto b = SesquilinearForm::inner_product(space);
  const auto tau = DualFunctional::represented_by(ModuleElement::generator(space, 0));
  const auto e1 = Submodule::coordinate(space, {0});
  const auto e2 = Submodule::coordinate(space, {1});
  try {
    directed_family_solve(b, tau, {e1, e2}, {e1, e2}, cert_with(1.0));
    FAIL("expected NotNested");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::NotNested);
  }
  try {
    directed_family_solve(b, tau, {e1}, {e1}, cert_with(2.0));
    FAIL("expected LevelCertificateFailed");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::LevelCertificateFailed);
    REQUIRE(err.index());
    CHECK(*err.index() == 0);
  }
  CHECK_THROWS_AS(hilbert_space_solve(b, tau, {e1}, {e1}, cert_with(1.0)), Error);
}

TEST_CASE("classical Hilbert-space cases") {
  random::Rng rng(89);
  const ModuleSpace c3(AlgebraShape{1}, 3);
  const auto whole = Submodule::whole(c3);
  const auto u = random::random_module_element(c3, rng);
  const auto ip = SesquilinearForm::inner_product(c3);
  const auto riesz = hilbert_space_solve(ip, DualFunctional::represented_by(u), {whole}, {whole},
                                         certify_positive_invertible(ip));
  CHECK(test::max_abs_diff(riesz.final.solution, u) < 1e-15);

  const auto zero = hilbert_space_solve(ip, DualFunctional::represented_by(ModuleElement::zero(c3)), {whole}, {whole},
                                        certify_positive_invertible(ip));
  CHECK(zero.final.solution.max_abs() == 0.0);

  const ModuleOperator spd = random::random_positive_operator(c3, rng);
  const SesquilinearForm b(spd);
  const auto cert = certify_positive_invertible(b);
  const Matrix m = spd.block_matrix(0);
  CHECK(cert.c == doctest::Approx(Eigen::SelfAdjointEigenSolver<Matrix>(m).eigenvalues().minCoeff()));
  const auto r = hilbert_space_solve(b, DualFunctional::represented_by(u), {whole}, {whole}, cert);
  const Vector expected = m.fullPivLu().solve(flatten(u));
  CHECK((flatten(r.final.solution) - expected).norm() <= 1e-10 * expected.norm());
  CHECK(module_norm(r.final.solution) <= module_norm(u) / cert.c + 1e-9);
}
