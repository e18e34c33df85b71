#include <cstdlib>
#include <string_view>

#include "damt/kernels.hpp"

namespace damt::kernels {

#if defined(DAMT_HAVE_AVX2_TU)
const KernelSet& avx2_kernels();

namespace {
bool cpu_has_avx2() {
#if defined(__GNUC__) || defined(__clang__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}
}  // namespace
#endif

std::vector<const KernelSet*> available_kernels() {
  std::vector<const KernelSet*> sets{&scalar_kernels()};
#if defined(DAMT_HAVE_AVX2_TU)
  if (cpu_has_avx2()) sets.push_back(&avx2_kernels());
#endif
  return sets;
}

const KernelSet& active_kernels() {
  static const KernelSet* chosen = [] {
    const KernelSet* best = &scalar_kernels();
#if defined(DAMT_HAVE_AVX2_TU)
    if (cpu_has_avx2()) best = &avx2_kernels();
#endif
    if (const char* req = std::getenv("DAMT_KERNELS")) {
      const std::string_view want(req);
      for (const KernelSet* s : available_kernels()) {
        if (want == s->name) return s;
      }
      best = &scalar_kernels();
    }
    return best;
  }();
  return *chosen;
}

}  // namespace damt::kernels
