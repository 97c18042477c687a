#include <atomic>
#include <cstdlib>

#include "kernels_impl.hpp"
#include "mvsrc/kernels.hpp"

namespace mvsrc::kernels {

namespace {

const KernelTable kScalar{"scalar", detail::dot_scalar, detail::axpy_scalar,
                          detail::sq_dist_scalar};

#if defined(MVSRC_HAVE_AVX2)
const KernelTable kAvx2{"avx2", detail::dot_avx2, detail::axpy_avx2, detail::sq_dist_avx2};
#endif

#if defined(MVSRC_HAVE_NEON)
const KernelTable kNeon{"neon", detail::dot_neon, detail::axpy_neon, detail::sq_dist_neon};
#endif

const KernelTable* find(std::string_view name) {
  if (name == kScalar.name) return &kScalar;
  if (name == "avx2") return avx2_table();
  if (name == "neon") return neon_table();
  return nullptr;
}

const KernelTable* initial_choice() {
  if (const char* env = std::getenv("MVSRC_KERNELS")) {
    if (const KernelTable* t = find(env)) return t;
  }
  if (const KernelTable* t = avx2_table()) return t;
  if (const KernelTable* t = neon_table()) return t;
  return &kScalar;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_choice()};
  return table;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(MVSRC_HAVE_AVX2)
  static const bool supported =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_table() noexcept {
#if defined(MVSRC_HAVE_NEON)
  return &kNeon;
#else
  return nullptr;
#endif
}

std::vector<const KernelTable*> available_tables() {
  std::vector<const KernelTable*> out{&kScalar};
  if (const KernelTable* t = avx2_table()) out.push_back(t);
  if (const KernelTable* t = neon_table()) out.push_back(t);
  return out;
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_relaxed); }

bool select(std::string_view name) {
  const KernelTable* t = find(name);
  if (t == nullptr) return false;
  current().store(t, std::memory_order_relaxed);
  return true;
}

}  // namespace mvsrc::kernels
