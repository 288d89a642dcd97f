#include <cstdlib>
#include <string_view>

#include "kanbench/numeric/kernels.hpp"

namespace kanbench::kernels {

#if defined(KANBENCH_HAS_AVX2)
namespace avx2 {
extern const KernelTable table;
}
#endif
#if defined(KANBENCH_HAS_NEON)
namespace neon {
extern const KernelTable table;
}
#endif

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &scalar::table;
    case Isa::avx2:
#if defined(KANBENCH_HAS_AVX2)
      if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return &avx2::table;
#endif
      return nullptr;
    case Isa::neon:
#if defined(KANBENCH_HAS_NEON)
      return &neon::table;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

std::vector<Isa> available() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
    if (table_for(isa) != nullptr) out.push_back(isa);
  }
  return out;
}

namespace {

const KernelTable& select() {
  if (const char* env = std::getenv("KANBENCH_SIMD")) {
    const std::string_view want(env);
    for (Isa isa : available()) {
      if (isa_name(isa) == want) return *table_for(isa);
    }
  }
  const auto isas = available();
  return *table_for(isas.back());
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& chosen = select();
  return chosen;
}

}  // namespace kanbench::kernels
