#include <algorithm>
#include <bit>
#include <vector>

#include "stochca/kernels.hpp"

namespace stochca::kernels {

namespace {
constexpr std::size_t kBlock = 256;
}

void cca_step_soa_scalar(const CcaStepArgs& a) {
  const std::size_t n_states = a.states;
  const std::size_t window = a.window;
  const std::size_t rows = a.table.size() / n_states;
  // prefix[m][i]: product of the first m+1 window factors for cell b+i.
  std::vector<double> prefix(window * kBlock);
  std::vector<std::size_t> digit(window);

  for (std::size_t b = 0; b < a.cells; b += kBlock) {
    const std::size_t n = std::min(kBlock, a.cells - b);
    for (std::size_t j = 0; j < n_states; ++j) std::fill_n(a.out + j * a.cells + b, n, 0.0);

    std::fill(digit.begin(), digit.end(), 0);
    auto refresh = [&](std::size_t from) {
      for (std::size_t m = from; m < window; ++m) {
        const double* src = a.padded + digit[m] * a.stride + b + m;
        double* dst = prefix.data() + m * kBlock;
        if (m == 0) {
          for (std::size_t i = 0; i < n; ++i) dst[i] = src[i];
        } else {
          const double* prev = dst - kBlock;
          for (std::size_t i = 0; i < n; ++i) dst[i] = prev[i] * src[i];
        }
      }
    };
    refresh(0);

    const double* weight = prefix.data() + (window - 1) * kBlock;
    for (std::size_t k = 0; k < rows; ++k) {
      for (std::size_t j = 0; j < n_states; ++j) {
        const double p = a.table[k * n_states + j];
        if (p == 0.0) continue;
        double* dst = a.out + j * a.cells + b;
        for (std::size_t i = 0; i < n; ++i) dst[i] += p * weight[i];
      }
      if (k + 1 == rows) break;
      std::size_t m = window - 1;
      while (digit[m] == n_states - 1) digit[m--] = 0;
      ++digit[m];
      refresh(m);
    }
  }
}

std::uint64_t xor_popcount_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t words) {
  std::uint64_t count = 0;
  for (std::size_t w = 0; w < words; ++w) count += std::popcount(a[w] ^ b[w]);
  return count;
}

}  // namespace stochca::kernels
