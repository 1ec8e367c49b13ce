#pragma once

#include <cstddef>

namespace mnmt::kernels {

// Double-precision inner loops behind every tensor operation. A scalar
// reference implementation always exists; an AVX2+FMA variant is compiled
// on x86-64 and selected at runtime. SIMD results may differ from scalar
// in the last bits (different summation order), which the equivalence
// tests bound; a single process always uses one backend, so runs are
// reproducible on a given machine.
struct Ops {
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*nrm2sq)(const double* x, std::size_t n);
  // y += a*x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // x *= a
  void (*scal)(double a, double* x, std::size_t n);
  // out = x + y
  void (*vadd)(const double* x, const double* y, double* out, std::size_t n);
  // out = x ⊙ y
  void (*vmul)(const double* x, const double* y, double* out, std::size_t n);
  // acc += x ⊙ y
  void (*vmac)(const double* x, const double* y, double* acc, std::size_t n);
  // y = A·x, A row-major [rows × cols]
  void (*matvec)(const double* a, const double* x, double* y, std::size_t rows,
                 std::size_t cols);
  // y += A·x
  void (*matvec_acc)(const double* a, const double* x, double* y,
                     std::size_t rows, std::size_t cols);
  // y += Aᵀ·x, x has `rows` entries, y has `cols`
  void (*matvec_t_acc)(const double* a, const double* x, double* y,
                       std::size_t rows, std::size_t cols);
  // A += x·yᵀ, x has `rows` entries, y has `cols`
  void (*ger)(const double* x, const double* y, double* a, std::size_t rows,
              std::size_t cols);
};

enum class Backend { scalar, avx2 };

extern const Ops scalar_ops;

// Active backend: picked once per process from CPU capabilities, or forced
// via the MNMT_KERNELS environment variable ("scalar" / "avx2").
const Ops& active();
Backend active_backend();
const char* backend_name();

// Test hook; throws std::invalid_argument if the backend is unavailable.
void force_backend(Backend b);

// nullptr when not compiled in or the CPU lacks AVX2/FMA.
const Ops* avx2_ops();

}  // namespace mnmt::kernels
