#include "hilmod/state.hpp"

#include "hilmod/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace hilmod {

PureState::PureState(std::size_t block, Vector vector) : block_(block), vector_(std::move(vector)) {
  const double n = vector_.norm();
  if (n == 0.0 || !std::isfinite(n)) throw Error(ErrorKind::ZeroElement, "state vector must be nonzero");
  vector_ /= n;
}

PureState PureState::basis(const AlgebraShape& shape, std::size_t block, Index k) {
  return {block, Vector::Unit(shape.dim(block), k)};
}

std::string_view to_string(SamplingStrategy s) noexcept {
  switch (s) {
    case SamplingStrategy::Grid: return "grid";
    case SamplingStrategy::Random: return "random";
    case SamplingStrategy::EigenDirected: return "eigen-directed";
  }
  return "random";
}

SamplingStrategy parse_sampling_strategy(std::string_view s) {
  if (s == "grid") return SamplingStrategy::Grid;
  if (s == "random") return SamplingStrategy::Random;
  if (s == "eigen-directed") return SamplingStrategy::EigenDirected;
  throw Error(ErrorKind::ValidationError, "unknown sampling strategy '" + std::string(s) + "'");
}

Complex evaluate(const PureState& f, const AlgebraElement& a) {
  if (f.block() >= a.num_blocks() || a.shape().dim(f.block()) != f.vector().size())
    throw Error(ErrorKind::ShapeMismatch, "state does not live on this algebra");
  return f.vector().dot(a.block(f.block()) * f.vector());
}

PureState norm_attaining_state(const AlgebraElement& a, double zero_tol) {
  const HermitianEigensystem eig = hermitian_eigensystem(a);
  std::size_t best_block = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues[i](0) > best) {
      best = eig.eigenvalues[i](0);
      best_block = i;
    }
  }
  if (best <= zero_tol) throw Error(ErrorKind::ZeroElement, "no norm-attaining state for a zero element");
  return {best_block, eig.eigenvectors[best_block].col(0)};
}

namespace {

Vector haar_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Index k = 0; k < n; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(k) = Complex(re, im);
  }
  return v;
}

// Fibonacci lattice on the Bloch sphere of span{e_a, e_b}, cycling through
// the coordinate pairs of the block.
std::vector<PureState> grid_states(std::size_t block, Index n, std::size_t count) {
  std::vector<std::pair<Index, Index>> pairs;
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  const std::size_t per_pair = (count + pairs.size() - 1) / pairs.size();
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<PureState> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    const auto [a, b] = pairs[j % pairs.size()];
    const std::size_t idx = j / pairs.size();
    const double z = 1.0 - (2.0 * static_cast<double>(idx) + 1.0) / static_cast<double>(per_pair);
    const double theta = std::acos(std::clamp(z, -1.0, 1.0));
    const double phi = golden * static_cast<double>(idx);
    Vector v = Vector::Zero(n);
    v(a) = std::cos(theta / 2.0);
    v(b) = std::polar(std::sin(theta / 2.0), phi);
    out.emplace_back(block, std::move(v));
  }
  return out;
}

}  // namespace

StateSample sample_pure_states(const AlgebraShape& shape, SamplingStrategy strategy, std::size_t count,
                               std::uint64_t seed, std::span<const AlgebraElement> directions) {
  if (count < 1) throw Error(ErrorKind::ValidationError, "state sample count must be at least 1");
  StateSample sample{{}, strategy, seed};
  std::mt19937_64 rng(seed);

  if (strategy == SamplingStrategy::EigenDirected) {
    for (const AlgebraElement& d : directions) {
      require_same_shape(shape, d.shape(), "sample_pure_states");
      const bool hermitian = hermiticity_defect(d) <= 1e-10 * std::max(1.0, d.max_abs());
      const AlgebraElement h = hermitian ? d : d.adjoint() * d;
      const HermitianEigensystem eig = hermitian_eigensystem(h);
      for (std::size_t i = 0; i < eig.eigenvectors.size(); ++i)
        for (Index k = 0; k < eig.eigenvectors[i].cols(); ++k)
          sample.states.emplace_back(i, eig.eigenvectors[i].col(k));
    }
  }
  const std::size_t taken = sample.states.size();
  if (taken >= count && strategy == SamplingStrategy::EigenDirected) return sample;
  const std::size_t wanted = count - std::min(count, taken);

  std::vector<std::size_t> trivial;
  std::vector<std::size_t> nontrivial;
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) (shape.dim(i) == 1 ? trivial : nontrivial).push_back(i);

  const std::size_t n_trivial = std::min(trivial.size(), wanted);
  const std::size_t remaining = wanted - n_trivial;
  std::vector<std::size_t> per_block(shape.num_blocks(), 0);
  for (std::size_t j = 0; j < n_trivial; ++j) per_block[trivial[j]] = 1;
  if (!nontrivial.empty()) {
    for (std::size_t j = 0; j < nontrivial.size(); ++j)
      per_block[nontrivial[j]] = remaining / nontrivial.size() + (j < remaining % nontrivial.size() ? 1 : 0);
  }

  const SamplingStrategy fill = strategy == SamplingStrategy::Grid ? SamplingStrategy::Grid : SamplingStrategy::Random;
  for (std::size_t i = 0; i < shape.num_blocks(); ++i) {
    const Index n = shape.dim(i);
    if (per_block[i] == 0) continue;
    if (n == 1) {
      sample.states.emplace_back(i, Vector::Ones(1));
    } else if (fill == SamplingStrategy::Grid) {
      for (auto& s : grid_states(i, n, per_block[i])) sample.states.push_back(std::move(s));
    } else {
      for (std::size_t j = 0; j < per_block[i]; ++j) sample.states.emplace_back(i, haar_vector(n, rng));
    }
  }
  return sample;
}

}  // namespace hilmod
