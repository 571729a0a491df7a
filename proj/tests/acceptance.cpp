// Acceptance run: one PASS/FAIL line per criterion. Expected values come from
// dense Eigen computations or closed forms written out here, never from the
// library routine under test.

#include "hilmod/error.hpp"
#include "hilmod/flatten.hpp"
#include "hilmod/forms.hpp"
#include "hilmod/localization.hpp"
#include "hilmod/random.hpp"
#include "hilmod/scenario.hpp"
#include "hilmod/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace hilmod;
using io::Json;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Operator norm of a module operator, or module norm of an element, read off
// the flattened picture: max over blocks of a spectral norm.
double spectral(const Matrix& m) { return m.size() == 0 ? 0.0 : Eigen::JacobiSVD<Matrix>(m).singularValues()(0); }

double dense_norm(const ModuleElement& x) {
  double best = 0.0;
  for (std::size_t i = 0; i < x.space().shape.num_blocks(); ++i) best = std::max(best, spectral(x.stacked(i)));
  return best;
}

double dense_inverse_norm(const ModuleOperator& t) { return spectral(flatten(t).matrix.inverse()); }

Vector dense_solve(const ModuleOperator& t, const ModuleElement& z) {
  return Eigen::FullPivLU<Matrix>(flatten(t).matrix).solve(flatten(z));
}

double rel(const Vector& a, const Vector& b) { return (a - b).norm() / std::max(1e-300, b.norm()); }

PureState random_state(const AlgebraShape& shape, random::Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, shape.num_blocks() - 1);
  const std::size_t i = pick(rng);
  Vector v = random::gaussian_matrix(shape.block_dims()[i], 1, rng).col(0);
  return PureState(i, v / v.norm());
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// --- 1 ------------------------------------------------------------------------
Outcome m2_gap() {
  const auto t0 = Clock::now();
  const Report r = run_scenario(builtin_scenario("m2-gap"));
  const double secs = seconds_since(t0);
  Outcome o;
  const Json& d = r.body["demo"];
  const Json& ex = d["example"];
  // x*y = 0 exactly; |x| = x and |y| = y are rank-one projections with f = 1/2.
  const double e_b = std::hypot(ex["f_B_xy"][0].get<double>(), ex["f_B_xy"][1].get<double>());
  const double e_x = std::abs(ex["f_abs_x"].get<double>() - 0.5);
  const double e_y = std::abs(ex["f_abs_y"].get<double>() - 0.5);
  o.pass = e_b <= 1e-12 && e_x <= 1e-12 && e_y <= 1e-12;
  const Json& w = r.body["certificates"][0];
  const std::size_t found = d["pointwise"]["found"].get<std::size_t>();
  o.pass = o.pass && w["c"].get<double>() == 1.0 && w["k"].get<double>() == 1.0 && found >= 100;
  bool all = d["uniform"].size() == 3;
  for (const auto& u : d["uniform"]) {
    const double c = u["c"].get<double>();
    all = all && u["violated"].get<bool>() && std::abs(u["lhs"].get<double>()) <= 1e-12 &&
          std::abs(u["rhs"].get<double>() - c * 0.5 * 0.5) <= 1e-12;
  }
  o.pass = o.pass && all && r.exit_code == 2 && secs < 10.0;
  o.detail = "max example error " + fmt("%.1e", std::max({e_b, e_x, e_y})) + ", witnesses " + std::to_string(found) +
             ", violations for c in {0.01,0.1,1}: " + (all ? "yes" : "no") + ", " + fmt("%.2fs", secs);
  return o;
}

// --- 2 ------------------------------------------------------------------------
Outcome norm_bound() {
  const auto t0 = Clock::now();
  random::Rng rng(20201);
  const AlgebraShape shapes[] = {AlgebraShape{2}, AlgebraShape{2, 1}, AlgebraShape{3}};
  Outcome o;
  double worst_res = 0.0, worst_slack = 1e300, worst_c = 0.0;
  for (int n = 0; n < 100; ++n) {
    const ModuleSpace space(shapes[n % 3], 1 + (n / 3) % 3);
    const ModuleOperator t = random::random_positive_operator(space, rng);
    const ModuleElement z = random::random_module_element(space, rng);
    const SesquilinearForm b(t);
    const CoercivityCertificate cert = certify_positive_invertible(b);
    const double c_oracle = 1.0 / dense_inverse_norm(t);
    worst_c = std::max(worst_c, std::abs(cert.c - c_oracle) / c_oracle);
    const SolveResult s = lax_milgram_solve(b, DualFunctional::represented_by(z), cert);
    worst_res = std::max(worst_res, s.residual);
    worst_slack = std::min(worst_slack, dense_norm(z) / c_oracle - dense_norm(s.solution));
  }
  const double secs = seconds_since(t0);
  o.pass = worst_res <= 1e-8 && worst_slack >= -1e-9 && worst_c <= 1e-9 && secs < 30.0;
  o.detail = "100 solves, max residual " + fmt("%.1e", worst_res) + ", min ||tau||/c - ||x|| " +
             fmt("%.2e", worst_slack) + ", c vs inverse-norm oracle " + fmt("%.1e", worst_c) + ", " +
             fmt("%.2fs", secs);
  return o;
}

// --- 3 ------------------------------------------------------------------------
Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  random::Rng rng(30303);
  const AlgebraShape shapes[] = {AlgebraShape{2}, AlgebraShape{2, 1}, AlgebraShape{3}, AlgebraShape{1, 2, 1}};
  double worst = 0.0;
  for (int n = 0; n < 100; ++n) {
    const ModuleSpace space(shapes[n % 4], 1 + n % 3);
    const ModuleOperator t = random::random_positive_operator(space, rng, 0.2);
    const ModuleElement z = random::random_module_element(space, rng);
    const SesquilinearForm b(t);
    const SolveResult s = lax_milgram_solve(b, DualFunctional::represented_by(z), certify_positive_invertible(b));
    worst = std::max(worst, rel(flatten(s.solution), dense_solve(t, z)));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && secs < 30.0,
          "100 instances, max relative gap to dense flattened solve " + fmt("%.1e", worst) + ", " + fmt("%.2fs", secs)};
}

// --- 4 ------------------------------------------------------------------------
Outcome pairing_identities() {
  random::Rng rng(40404);
  const AlgebraShape shapes[] = {AlgebraShape{1}, AlgebraShape{2}, AlgebraShape{2, 1}};
  double d1 = 0.0, d2 = 0.0, d3 = 0.0, dense_gap = 0.0;
  for (const auto& shape : shapes) {
    for (int n = 0; n < 50; ++n) {
      const ModuleSpace space(shape, 1 + n % 3);
      const PureState f = random_state(shape, rng);
      const ModuleElement x = random::random_module_element(space, rng);
      const ModuleElement zt = random::random_module_element(space, rng);
      const ModuleElement zr = random::random_module_element(space, rng);
      const auto tau = DualFunctional::black_box(space, [zt](const ModuleElement& y) { return inner_product(zt, y); });
      const auto rho = DualFunctional::represented_by(zr);
      const LocalizedSpacePtr l = localize_space(space, f);
      d1 = std::max(d1, localized_pairing_defect(l, tau, x));
      d2 = std::max(d2, representation_defect(tau, x));
      d3 = std::max(d3, functional_pairing_defect(l, tau, rho));
      // Dense model: x + N_f corresponds to X_i v, and (x, y)_f = (Y_i v)^* (X_i v).
      const std::size_t i = f.block();
      const Vector& v = f.vector();
      const Vector xv = x.stacked(i) * v, tv = zt.stacked(i) * v, rv = zr.stacked(i) * v;
      const Complex lhs1 = localized_inner(localize_vector(l, x), localize_functional(l, tau));
      const Complex lhs3 = localized_inner(localize_functional(l, rho), localize_functional(l, tau));
      dense_gap = std::max({dense_gap, std::abs(lhs1 - tv.dot(xv)), std::abs(lhs3 - tv.dot(rv))});
    }
  }
  const double worst = std::max({d1, d2, d3, dense_gap});
  return {worst <= 1e-9, "150 triples, defects " + fmt("%.1e", d1) + " / " + fmt("%.1e", d2) + " / " + fmt("%.1e", d3) +
                             ", dense model gap " + fmt("%.1e", dense_gap)};
}

// --- 5 ------------------------------------------------------------------------
Outcome complementation() {
  random::Rng rng(50505);
  const AlgebraShape m2{2};
  const ModuleSpace space(m2, 2);
  double sum_gap = 0.0, proj_gap = 0.0, orth = 0.0, rep_res = 0.0, rep_out = 0.0;
  for (int n = 0; n < 50; ++n) {
    std::vector<ModuleElement> gens;
    const int count = 1 + n % 3;
    for (int g = 0; g < count; ++g) {
      ModuleElement e = random::random_module_element(space, rng);
      // Right-multiplying by a rank-one element keeps the span proper.
      if ((n + g) % 2 == 0) e = e * AlgebraElement::from_matrix(random::gaussian_matrix(2, 1, rng) *
                                                               random::gaussian_matrix(1, 2, rng));
      gens.push_back(e);
    }
    const Submodule y(space, gens);
    const Submodule yp = orthogonal_complement(y);
    const ModuleElement x = random::random_module_element(space, rng);
    const ModuleElement px = project_onto(y, x);
    const ModuleElement qx = project_onto(yp, x);
    sum_gap = std::max(sum_gap, (px + qx - x).max_abs());
    // Dense projector onto the column span of the stacked generators.
    Matrix span(4, 2 * count);
    for (int g = 0; g < count; ++g) span.middleCols(2 * g, 2) = gens[g].stacked(0);
    Eigen::JacobiSVD<Matrix> svd(span, Eigen::ComputeFullU);
    const Index r = (svd.singularValues().array() > 1e-8 * svd.singularValues()(0)).count();
    const Matrix u = svd.matrixU().leftCols(r);
    const Matrix proj = u * u.adjoint();
    proj_gap = std::max(proj_gap, (px.stacked(0) - proj * x.stacked(0)).cwiseAbs().maxCoeff());
    orth = std::max(orth, inner_product(px, qx).max_abs());
    // A bounded functional on Y that is not given by an element of Y.
    const ModuleElement w = random::random_module_element(space, rng);
    const auto tau = DualFunctional::black_box(space, [w](const ModuleElement& v) { return inner_product(w, v); });
    const ModuleElement rep = represent_on_submodule(y, tau);
    rep_out = std::max(rep_out, (rep.stacked(0) - proj * rep.stacked(0)).cwiseAbs().maxCoeff());
    for (int k = 0; k < 5; ++k) {
      const ModuleElement v = project_onto(y, random::random_module_element(space, rng));
      rep_res = std::max(rep_res, (tau(v) - inner_product(rep, v)).max_abs());
    }
  }
  const double worst = std::max({sum_gap, proj_gap, orth, rep_res, rep_out});
  return {worst <= 1e-9, "50 submodules, P + P_perp - I " + fmt("%.1e", sum_gap) + ", vs dense projector " +
                             fmt("%.1e", proj_gap) + ", representer residual " + fmt("%.1e", rep_res) +
                             ", representer outside Y " + fmt("%.1e", rep_out)};
}

// --- 6 ------------------------------------------------------------------------
Outcome directed_family() {
  const Scenario s = builtin_scenario("nested-family");
  const Report r = run_scenario(s);
  if (r.exit_code != 0) return {false, "run failed: " + r.body.dump()};
  const Json& fam = r.body["solves"][0];
  double worst_level = 0.0;
  for (const auto& l : fam["levels"]) worst_level = std::max(worst_level, l["residual"].get<double>());
  // Rebuild the instance from its seeds and solve it densely.
  const ModuleSpace space(s.shape, s.p);
  random::Rng trng(s.sampling.seed);
  const ModuleOperator t = random::random_positive_operator(space, trng, s.form.min_eig);
  random::Rng zrng(s.sampling.seed + 1);
  const ModuleElement z = random::random_module_element(space, zrng);
  const ModuleElement x = io::module_element_from_json(fam["final"]["solution"], "");
  const double gap = rel(flatten(x), dense_solve(t, z));
  const double reported = fam["final_vs_unrestricted"].get<double>();
  return {gap <= 1e-8 && reported <= 1e-8 && worst_level <= 1e-8,
          std::to_string(fam["levels"].size()) + " levels, final vs dense unrestricted " + fmt("%.1e", gap) +
              ", max level residual " + fmt("%.1e", worst_level)};
}

// --- 7 ------------------------------------------------------------------------
Outcome classical() {
  random::Rng rng(70707);
  const AlgebraShape c{1};
  double gap = 0.0, c_gap = 0.0, slack = 1e300;
  for (int n = 0; n < 50; ++n) {
    const Index dim = 2 + n % 5;
    const Matrix g = random::gaussian_matrix(dim, dim, rng);
    const Matrix spd = g * g.adjoint() + 0.1 * Matrix::Identity(dim, dim);
    const Vector zv = random::gaussian_matrix(dim, 1, rng).col(0);
    std::vector<AlgebraElement> entries;
    for (Index row = 0; row < dim; ++row)
      for (Index col = 0; col < dim; ++col) entries.push_back(AlgebraElement::scalar(c, spd(row, col)));
    const ModuleSpace space(c, static_cast<std::size_t>(dim));
    std::vector<AlgebraElement> zc;
    for (Index k = 0; k < dim; ++k) zc.push_back(AlgebraElement::scalar(c, zv(k)));
    const SesquilinearForm b(ModuleOperator(space, space, entries));
    const CoercivityCertificate cert = certify_positive_invertible(b);
    std::vector<Submodule> chain;
    for (Index l = 1; l <= dim; ++l) {
      std::vector<std::size_t> idx(static_cast<std::size_t>(l));
      for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
      chain.push_back(Submodule::coordinate(space, idx));
    }
    const FamilySolveResult r =
        hilbert_space_solve(b, DualFunctional::represented_by(ModuleElement(space, zc)), chain, chain, cert);
    const Vector direct = spd.llt().solve(zv);
    const Vector got = flatten(r.final.solution);
    gap = std::max(gap, rel(got, direct));
    const double lmin = Eigen::SelfAdjointEigenSolver<Matrix>(spd).eigenvalues()(0);
    c_gap = std::max(c_gap, std::abs(cert.c - lmin) / lmin);
    slack = std::min(slack, zv.norm() / lmin - got.norm());
  }
  return {gap <= 1e-10 && c_gap <= 1e-10 && slack >= -1e-9,
          "50 SPD systems, max relative gap " + fmt("%.1e", gap) + ", c vs lambda_min " + fmt("%.1e", c_gap) +
              ", min bound slack " + fmt("%.2e", slack)};
}

// --- 8 ------------------------------------------------------------------------
Outcome counterexample() {
  const Json d = demo_counterexample({64, 256, 1024});
  // Closed form of the grid solution: sin(n/j) at t_j = j/n.
  auto osc = [](double n) {
    double lo = 1.0, hi = -1.0;
    for (double j = 1; j / n < 0.25; ++j) {
      lo = std::min(lo, std::sin(n / j));
      hi = std::max(hi, std::sin(n / j));
    }
    return hi - lo;
  };
  bool agree = true;
  std::vector<double> seen;
  for (const auto& g : d["grids"]) {
    const double v = g["oscillation"][0]["oscillation"].get<double>();
    agree = agree && std::abs(v - osc(g["n"].get<double>())) <= 1e-10 && g["max_error_vs_sin"].get<double>() <= 1e-10;
    seen.push_back(v);
  }
  const bool trend = std::is_sorted(seen.begin(), seen.end());
  return {agree && trend && seen.back() >= 1.9,
          "oscillation on (0,1/4): " + fmt("%.4f", seen[0]) + " / " + fmt("%.4f", seen[1]) + " / " +
              fmt("%.4f", seen[2]) + " for n = 64/256/1024"};
}

// --- 9 ------------------------------------------------------------------------
Outcome determinism() {
  std::size_t same = 0;
  const auto all = list_builtins();
  for (const auto& b : all) {
    const Json a = strip_timing(run_scenario(builtin_scenario(b.name)).body);
    const Json c = strip_timing(run_scenario(builtin_scenario(b.name)).body);
    if (a.dump() == c.dump()) ++same;
  }
  return {same == all.size(), std::to_string(same) + "/" + std::to_string(all.size()) + " builtins identical"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"m2 gap example", m2_gap},
      {"norm bound", norm_bound},
      {"oracle equivalence", oracle_equivalence},
      {"pairing identities", pairing_identities},
      {"complementation", complementation},
      {"directed family", directed_family},
      {"classical reduction", classical},
      {"counterexample demo", counterexample},
      {"determinism", determinism},
  };
  std::printf("note: %.*s\n", static_cast<int>(kSlotConventionNote.size()), kSlotConventionNote.data());
  int failed = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str());
  }
  return failed == 0 ? 0 : 1;
}
