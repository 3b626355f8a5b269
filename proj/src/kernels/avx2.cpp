// Compiled with -mavx2 (no -mfma): multiplies and adds stay separate so the
// lanes round exactly like the scalar kernel.

#include <immintrin.h>

#include <algorithm>
#include <bit>
#include <vector>

#include "stochca/kernels.hpp"

namespace stochca::kernels {

namespace {

constexpr std::size_t kBlock = 256;

inline void mul_rows(double* dst, const double* lhs, const double* rhs, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(dst + i, _mm256_mul_pd(_mm256_loadu_pd(lhs + i), _mm256_loadu_pd(rhs + i)));
  for (; i < n; ++i) dst[i] = lhs[i] * rhs[i];
}

inline void axpy_rows(double* dst, double p, const double* weight, std::size_t n) {
  const __m256d pv = _mm256_set1_pd(p);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d term = _mm256_mul_pd(pv, _mm256_loadu_pd(weight + i));
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(dst + i), term));
  }
  for (; i < n; ++i) dst[i] += p * weight[i];
}

// Per-byte popcount via two nibble lookups, summed into 64-bit lanes.
inline __m256i popcount_bytes(__m256i v) {
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                          0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  return _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
}

}  // namespace

void cca_step_soa_avx2(const CcaStepArgs& a) {
  const std::size_t n_states = a.states;
  const std::size_t window = a.window;
  const std::size_t rows = a.table.size() / n_states;
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
        if (m == 0)
          std::copy_n(src, n, dst);
        else
          mul_rows(dst, dst - kBlock, src, n);
      }
    };
    refresh(0);

    const double* weight = prefix.data() + (window - 1) * kBlock;
    for (std::size_t k = 0; k < rows; ++k) {
      for (std::size_t j = 0; j < n_states; ++j) {
        const double p = a.table[k * n_states + j];
        if (p == 0.0) continue;
        axpy_rows(a.out + j * a.cells + b, p, weight, n);
      }
      if (k + 1 == rows) break;
      std::size_t m = window - 1;
      while (digit[m] == n_states - 1) digit[m--] = 0;
      ++digit[m];
      refresh(m);
    }
  }
}

std::uint64_t xor_popcount_avx2(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t words) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t w = 0;
  for (; w + 4 <= words; w += 4) {
    const __m256i x = _mm256_xor_si256(
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + w)),
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + w)));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(popcount_bytes(x), _mm256_setzero_si256()));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::uint64_t count = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; w < words; ++w) count += std::popcount(a[w] ^ b[w]);
  return count;
}

}  // namespace stochca::kernels
