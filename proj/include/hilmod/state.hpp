#pragma once

// Pure states on A = (+)_i M_{n_i}(C). Every pure state is a vector state
// f(a) = v* a_i v on a single block, so a state is a (block, unit vector) pair.

#include "hilmod/algebra.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace hilmod {

class PureState {
 public:
  // Normalizes `vector`; throws ZeroElement for a zero vector.
  PureState(std::size_t block, Vector vector);

  std::size_t block() const noexcept { return block_; }
  const Vector& vector() const noexcept { return vector_; }

  // Basis state e_k on a block.
  static PureState basis(const AlgebraShape& shape, std::size_t block, Index k);

 private:
  std::size_t block_;
  Vector vector_;
};

enum class SamplingStrategy { Grid, Random, EigenDirected };

std::string_view to_string(SamplingStrategy s) noexcept;
SamplingStrategy parse_sampling_strategy(std::string_view s);

struct StateSample {
  std::vector<PureState> states;
  SamplingStrategy strategy = SamplingStrategy::Random;
  std::uint64_t seed = 0;
};

Complex evaluate(const PureState& f, const AlgebraElement& a);

// Eigenvector state of the largest eigenvalue over all blocks of a positive a.
PureState norm_attaining_state(const AlgebraElement& a, double zero_tol = 1e-12);

// Deterministic in (shape, strategy, count, seed). One-dimensional blocks carry
// a single state and contribute it once. The eigen-directed strategy puts the
// eigenvector states of `directions` first (of a for Hermitian a, of a*a
// otherwise) and fills up with Haar-random states.
StateSample sample_pure_states(const AlgebraShape& shape, SamplingStrategy strategy,
                               std::size_t count, std::uint64_t seed,
                               std::span<const AlgebraElement> directions = {});

}  // namespace hilmod
