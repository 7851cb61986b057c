#include "geostoch/series.hpp"

#include <algorithm>

#include "geostoch/errors.hpp"
#include "geostoch/randomness.hpp"

namespace geostoch {

namespace {

class TraceRecorder {
 public:
  TraceRecorder(std::size_t n_terms, std::size_t stride) : n_terms_(n_terms), stride_(stride) {
    if (n_terms == 0) throw InputError("series experiment needs at least one term");
    if (stride == 0) throw InputError("trace stride must be positive");
    trace_.terms.reserve(n_terms / stride + 2);
    trace_.partial_sums.reserve(n_terms / stride + 2);
  }

  // i is the 1-based count of terms summed so far.
  void record(std::size_t i, double sum) {
    if (i % stride_ == 0 || i == n_terms_) {
      trace_.terms.push_back(i);
      trace_.partial_sums.push_back(sum);
    }
  }

  SeriesTrace take() { return std::move(trace_); }

 private:
  std::size_t n_terms_;
  std::size_t stride_;
  SeriesTrace trace_;
};

}  // namespace

SeriesTrace alternating_harmonic(std::size_t n_terms, std::size_t stride) {
  TraceRecorder rec(n_terms, stride);
  double sum = 0.0;
  for (std::size_t n = 1; n <= n_terms; ++n) {
    const double term = 1.0 / static_cast<double>(n);
    sum += (n % 2 == 1) ? term : -term;
    rec.record(n, sum);
  }
  return rec.take();
}

SeriesTrace rearrange_to_target(double target, std::size_t n_terms, std::size_t stride) {
  TraceRecorder rec(n_terms, stride);
  double sum = 0.0;
  std::size_t next_odd = 1;
  std::size_t next_even = 2;
  for (std::size_t i = 1; i <= n_terms; ++i) {
    if (sum <= target) {
      sum += 1.0 / static_cast<double>(next_odd);
      next_odd += 2;
    } else {
      sum -= 1.0 / static_cast<double>(next_even);
      next_even += 2;
    }
    rec.record(i, sum);
  }
  return rec.take();
}

std::vector<std::size_t> BlockInterleave::first(std::size_t count) const {
  if (odd_block == 0 || even_block == 0) throw InputError("block interleave needs non-empty blocks");
  std::vector<std::size_t> out;
  out.reserve(count);
  std::size_t next_odd = 1;
  std::size_t next_even = 2;
  while (out.size() < count) {
    for (std::size_t j = 0; j < odd_block && out.size() < count; ++j, next_odd += 2) out.push_back(next_odd);
    for (std::size_t j = 0; j < even_block && out.size() < count; ++j, next_even += 2) out.push_back(next_even);
  }
  return out;
}

SeriesTrace permuted_partial_sums(const std::vector<int>& signs, const std::vector<std::size_t>& order,
                                  std::size_t stride) {
  TraceRecorder rec(order.size(), stride);
  double sum = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t n = order[i];
    if (n == 0 || n > signs.size()) throw InputError("permutation index outside the sign table");
    sum += signs[n - 1] / static_cast<double>(n);
    rec.record(i + 1, sum);
  }
  return rec.take();
}

RandomSignExperiment random_sign_rearrangement(std::size_t n_terms, std::uint64_t seed, const BlockInterleave& perm,
                                               std::size_t stride) {
  const auto order = perm.first(n_terms);
  const std::size_t max_index = std::max(n_terms, *std::max_element(order.begin(), order.end()));
  GaussianStream stream(seed, 0);
  std::vector<int> signs(max_index);
  for (auto& s : signs) s = stream.next() >= 0.0 ? 1 : -1;

  std::vector<std::size_t> identity(n_terms);
  for (std::size_t i = 0; i < n_terms; ++i) identity[i] = i + 1;
  return {permuted_partial_sums(signs, identity, stride), permuted_partial_sums(signs, order, stride)};
}

}  // namespace geostoch
