#pragma once

// Dense inner-loop kernels behind the spectral transforms.
//
// Every kernel has a portable scalar reference in bubble::kernels::scalar and,
// on x86-64, an AVX2/FMA variant in bubble::kernels::avx2. The unqualified
// entry points dispatch once per process on the detected instruction set.
// Setting BUBBLE_SIMD=scalar in the environment forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace bubble::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// True when the running CPU can execute the given variant.
bool isa_supported(Isa isa) noexcept;

/// The variant the dispatching entry points use.
Isa active_isa() noexcept;

/// y = A x with A row-major, rows x cols.
void matvec(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);
/// out[i] = a[i] * b[i]
void hadamard(std::span<const double> a, std::span<const double> b, std::span<double> out);
/// y[i] += s * x[i]
void axpy(double s, std::span<const double> x, std::span<double> y);

namespace scalar {
void matvec(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);
void hadamard(std::span<const double> a, std::span<const double> b, std::span<double> out);
void axpy(double s, std::span<const double> x, std::span<double> y);
} // namespace scalar

#if defined(BUBBLE_HAVE_AVX2_KERNELS)
namespace avx2 {
void matvec(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);
void hadamard(std::span<const double> a, std::span<const double> b, std::span<double> out);
void axpy(double s, std::span<const double> x, std::span<double> y);
} // namespace avx2
#endif

} // namespace bubble::kernels
