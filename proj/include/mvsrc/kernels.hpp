#pragma once

// Dense vector kernels used by the solver inner loops.
//
// Every kernel has a portable scalar reference implementation and, where the
// target supports it, an AVX2+FMA (x86-64) or NEON (AArch64) variant. The
// variant is picked once per process: the best one the CPU supports, unless
// the environment variable MVSRC_KERNELS names another (scalar|avx2|neon).
// Vector variants reassociate sums, so results agree with the scalar
// reference to rounding, not bit-for-bit. Within one process the choice is
// fixed, so repeated runs are bit-identical.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace mvsrc::kernels {

struct KernelTable {
  std::string_view name;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // sum_i (a[i] - b[i])^2
  double (*sq_dist)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;

// All tables usable on this machine, scalar first.
std::vector<const KernelTable*> available_tables();

const KernelTable& active() noexcept;

// Overrides the process-wide choice. Returns false (and keeps the current
// table) if `name` is unknown or unsupported here.
bool select(std::string_view name);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline double sq_dist(std::span<const double> a, std::span<const double> b) {
  return active().sq_dist(a.data(), b.data(), a.size());
}

inline double sq_norm(std::span<const double> a) {
  return active().dot(a.data(), a.data(), a.size());
}

}  // namespace mvsrc::kernels
