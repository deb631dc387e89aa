#include "sncl/combinatorics.hpp"

#include <limits>
#include <stdexcept>

namespace sncl {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) is divisible by i at every step.
    result = result * (n - k + i) / i;
  }
  return result;
}

std::uint64_t checked_pow(std::uint64_t base, unsigned exp) {
  std::uint64_t result = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && result > (std::numeric_limits<std::uint64_t>::max() >> 1) / base)
      throw std::overflow_error("checked_pow: result too large");
    result *= base;
  }
  return result;
}

}  // namespace sncl
