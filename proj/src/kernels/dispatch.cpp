#include <cstdlib>
#include <string>

#include "gibc/kernels.hpp"

namespace gibc::kernels {

namespace {

bool cpu_has_avx2_fma() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select() {
  const char* env = std::getenv("WORKBENCH_SIMD");
  if (env != nullptr && std::string(env) == "scalar") return *detail::scalar_table();
  if (isa_available(Isa::avx2)) return *detail::avx2_table();
  if (isa_available(Isa::neon)) return *detail::neon_table();
  return *detail::scalar_table();
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
      return detail::avx2_table() != nullptr && cpu_has_avx2_fma();
    case Isa::neon:
      return detail::neon_table() != nullptr;
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
  if (!isa_available(isa)) return *detail::scalar_table();
  switch (isa) {
    case Isa::avx2:
      return *detail::avx2_table();
    case Isa::neon:
      return *detail::neon_table();
    default:
      return *detail::scalar_table();
  }
}

const KernelTable& active() {
  static const KernelTable& t = select();
  return t;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

}  // namespace gibc::kernels
