#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace geostoch {

// Rearrangement experiments on the series sum_n s_n / n, n >= 1.

/// Partial sums recorded every `stride` terms; the last term is always recorded.
struct SeriesTrace {
  std::vector<std::size_t> terms;
  std::vector<double> partial_sums;

  double final_sum() const { return partial_sums.empty() ? 0.0 : partial_sums.back(); }
};

/// Alternating harmonic series 1 - 1/2 + 1/3 - ... in natural order.
SeriesTrace alternating_harmonic(std::size_t n_terms, std::size_t stride = 1);

/// Greedy rearrangement of the alternating harmonic series towards `target`:
/// take the next unused positive term 1/(2k-1) while the partial sum is at or
/// below the target, otherwise the next unused negative term -1/(2k).
SeriesTrace rearrange_to_target(double target, std::size_t n_terms, std::size_t stride = 1);

/// Permutation of the positive integers that repeatedly emits `odd_block`
/// unused odd indices followed by `even_block` unused even indices. The
/// classic 1 + 1/3 - 1/2 + 1/5 + 1/7 - 1/4 ... rearrangement is (2, 1).
struct BlockInterleave {
  std::size_t odd_block = 2;
  std::size_t even_block = 1;

  /// First `count` values of the permutation (1-based indices).
  std::vector<std::size_t> first(std::size_t count) const;
};

/// Partial sums of sum_n signs[n-1] / n taken in the order given by `order`
/// (1-based indices into `signs`).
SeriesTrace permuted_partial_sums(const std::vector<int>& signs, const std::vector<std::size_t>& order,
                                  std::size_t stride = 1);

struct RandomSignExperiment {
  SeriesTrace natural;   // S_N
  SeriesTrace permuted;  // T_N
};

/// Draws iid fair signs for the terms +-1/n from the (seed, 0) Gaussian
/// stream and sums the first n_terms in natural order and under `perm`.
RandomSignExperiment random_sign_rearrangement(std::size_t n_terms, std::uint64_t seed, const BlockInterleave& perm,
                                               std::size_t stride = 1);

}  // namespace geostoch
