#include <atomic>
#include <cstdlib>
#include <string_view>

#include "gustcast/simd/kernels.hpp"

namespace gustcast::simd {

#if defined(GUSTCAST_HAVE_AVX2)
namespace avx2 {
double dot(const double*, const double*, std::size_t) noexcept;
void axpy(double, const double*, double*, std::size_t) noexcept;
void gemv_acc(const double*, std::size_t, std::size_t, const double*, double*) noexcept;
}  // namespace avx2
#endif
#if defined(GUSTCAST_HAVE_NEON)
namespace neon {
double dot(const double*, const double*, std::size_t) noexcept;
void axpy(double, const double*, double*, std::size_t) noexcept;
void gemv_acc(const double*, std::size_t, std::size_t, const double*, double*) noexcept;
}  // namespace neon
#endif

namespace {

constexpr KernelTable kScalar{&scalar::dot, &scalar::axpy, &scalar::gemv_acc};
#if defined(GUSTCAST_HAVE_AVX2)
constexpr KernelTable kAvx2{&avx2::dot, &avx2::axpy, &avx2::gemv_acc};
#endif
#if defined(GUSTCAST_HAVE_NEON)
constexpr KernelTable kNeon{&neon::dot, &neon::axpy, &neon::gemv_acc};
#endif

bool cpu_has_avx2() noexcept {
#if defined(GUSTCAST_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend initial_backend() noexcept {
  if (const char* env = std::getenv("GUSTCAST_SIMD")) {
    const std::string_view want(env);
    if (want == "scalar") return Backend::scalar;
    if (want == "avx2" && backend_available(Backend::avx2)) return Backend::avx2;
    if (want == "neon" && backend_available(Backend::neon)) return Backend::neon;
  }
  return detect_backend();
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{table_for(initial_backend())};
  return table;
}

}  // namespace

std::string_view to_string(Backend b) noexcept {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

const KernelTable* table_for(Backend b) noexcept {
  switch (b) {
    case Backend::scalar: return &kScalar;
    case Backend::avx2:
#if defined(GUSTCAST_HAVE_AVX2)
      return cpu_has_avx2() ? &kAvx2 : nullptr;
#else
      return nullptr;
#endif
    case Backend::neon:
#if defined(GUSTCAST_HAVE_NEON)
      return &kNeon;  // baseline on AArch64
#else
      return nullptr;
#endif
  }
  return nullptr;
}

bool backend_available(Backend b) noexcept { return table_for(b) != nullptr; }

Backend detect_backend() noexcept {
  if (backend_available(Backend::avx2)) return Backend::avx2;
  if (backend_available(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_acquire); }

Backend active_backend() noexcept {
  const KernelTable* t = current().load(std::memory_order_acquire);
  if (t == table_for(Backend::avx2)) return Backend::avx2;
  if (t == table_for(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

bool set_backend(Backend b) noexcept {
  const KernelTable* t = table_for(b);
  if (!t) return false;
  current().store(t, std::memory_order_release);
  return true;
}

}  // namespace gustcast::simd
