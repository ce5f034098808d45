#pragma once

// Inner-loop kernels with a scalar reference and vector variants chosen at
// runtime. Every variant reproduces the scalar reference bit for bit: dot
// products use four interleaved partial sums reduced as (s0+s1)+(s2+s3),
// and no variant uses fused multiply-add.

#include <cstddef>
#include <string_view>

namespace gustcast::simd {

enum class Backend { scalar, avx2, neon };

std::string_view to_string(Backend b) noexcept;

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n) noexcept;
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n) noexcept;
  // y[r] += dot(m[r, :], x) for a row-major rows x cols matrix
  void (*gemv_acc)(const double* m, std::size_t rows, std::size_t cols, const double* x,
                   double* y) noexcept;
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
void gemv_acc(const double* m, std::size_t rows, std::size_t cols, const double* x,
              double* y) noexcept;
}  // namespace scalar

/// Variant table for a backend; nullptr if it is not compiled in or the CPU
/// lacks the instructions.
const KernelTable* table_for(Backend b) noexcept;

bool backend_available(Backend b) noexcept;

/// Best available backend. Honors GUSTCAST_SIMD=scalar|avx2|neon at first use.
Backend detect_backend() noexcept;

const KernelTable& active() noexcept;
Backend active_backend() noexcept;

/// Returns false (and changes nothing) if `b` is unavailable.
bool set_backend(Backend b) noexcept;

}  // namespace gustcast::simd
