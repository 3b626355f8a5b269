#include <atomic>
#include <cstdlib>
#include <string>

#include "stochca/error.hpp"
#include "stochca/kernels.hpp"

namespace stochca::kernels {

namespace {

Isa best_available() {
  if (isa_available(Isa::avx2)) return Isa::avx2;
  return Isa::scalar;
}

Isa initial_isa() {
  if (const char* forced = std::getenv("STOCHCA_ISA")) {
    const Isa isa = parse_isa(forced);
    if (isa_available(isa)) return isa;
  }
  return best_available();
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

Isa parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::scalar;
  if (name == "avx2") return Isa::avx2;
  throw ValidationError("unknown instruction set '" + std::string(name) + "'");
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(STOCHCA_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa))
    throw UnsupportedError("instruction set '" + std::string(isa_name(isa)) +
                           "' is not available on this machine or build");
  current().store(isa, std::memory_order_relaxed);
}

#if !defined(STOCHCA_HAVE_AVX2)
void cca_step_soa_avx2(const CcaStepArgs&) { throw UnsupportedError("built without AVX2"); }
std::uint64_t xor_popcount_avx2(const std::uint64_t*, const std::uint64_t*, std::size_t) {
  throw UnsupportedError("built without AVX2");
}
#endif

void cca_step_soa(const CcaStepArgs& args) {
  if (active_isa() == Isa::avx2)
    cca_step_soa_avx2(args);
  else
    cca_step_soa_scalar(args);
}

std::uint64_t xor_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  if (active_isa() == Isa::avx2) return xor_popcount_avx2(a, b, words);
  return xor_popcount_scalar(a, b, words);
}

}  // namespace stochca::kernels
