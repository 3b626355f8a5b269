#pragma once

// Data-parallel inner loops. Each kernel has a portable scalar reference and
// an AVX2 variant; the variant is picked once at runtime from CPUID and can
// be overridden with STOCHCA_ISA=scalar|avx2 or set_active_isa().
//
// The variants perform the same IEEE operations in the same order per
// element (no FMA contraction), so their results are bit-identical; the
// equivalence tests assert exactly that.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace stochca::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);
Isa parse_isa(std::string_view name);
bool isa_available(Isa isa);

Isa active_isa();
void set_active_isa(Isa isa);

/// One CCA step over a ring in structure-of-arrays layout.
///
/// `table` holds the pLUT row-major (rows x states). `padded` holds `states`
/// planes spaced `stride` doubles apart; plane j holds P(state j) for
/// positions p = 0 .. cells + window - 2, where position p is cell
/// (p - radius) mod cells. `out` receives `states` planes of `cells`
/// doubles.
///
/// For every cell the result is sum_k table[k][j] * prod_m window[m][digit_m(k)]
/// accumulated in increasing k with the product taken left to right. Zero
/// table entries are skipped, which does not change the sum.
struct CcaStepArgs {
  std::span<const double> table;
  std::size_t states;
  std::size_t window;
  std::size_t cells;
  const double* padded;
  std::size_t stride;
  double* out;
};

void cca_step_soa_scalar(const CcaStepArgs& args);
void cca_step_soa_avx2(const CcaStepArgs& args);
void cca_step_soa(const CcaStepArgs& args);

/// Number of differing bits between two packed bit arrays.
std::uint64_t xor_popcount_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                  std::size_t words);
std::uint64_t xor_popcount_avx2(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t words);
std::uint64_t xor_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);

}  // namespace stochca::kernels
