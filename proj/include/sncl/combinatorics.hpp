#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sncl {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Calls fn(indices) for every k-subset of {0..n-1} in lexicographic order.
template <typename Fn>
void for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(static_cast<const std::vector<std::size_t>&>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// base^exp for small exponents; throws std::overflow_error past 2^63.
std::uint64_t checked_pow(std::uint64_t base, unsigned exp);

}  // namespace sncl
