#include "bubble/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace bubble::kernels {

std::string_view isa_name(Isa isa) noexcept
{
    switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    }
    return "unknown";
}

bool isa_supported(Isa isa) noexcept
{
    switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(BUBBLE_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    }
    return false;
}

namespace {

Isa detect() noexcept
{
    if (const char* env = std::getenv("BUBBLE_SIMD"); env && std::string_view(env) == "scalar")
        return Isa::scalar;
    return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

} // namespace

Isa active_isa() noexcept
{
    static const Isa isa = detect();
    return isa;
}

void matvec(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y)
{
#if defined(BUBBLE_HAVE_AVX2_KERNELS)
    if (active_isa() == Isa::avx2)
        return avx2::matvec(a, rows, cols, x, y);
#endif
    scalar::matvec(a, rows, cols, x, y);
}

double dot(std::span<const double> a, std::span<const double> b)
{
#if defined(BUBBLE_HAVE_AVX2_KERNELS)
    if (active_isa() == Isa::avx2)
        return avx2::dot(a, b);
#endif
    return scalar::dot(a, b);
}

void hadamard(std::span<const double> a, std::span<const double> b, std::span<double> out)
{
#if defined(BUBBLE_HAVE_AVX2_KERNELS)
    if (active_isa() == Isa::avx2)
        return avx2::hadamard(a, b, out);
#endif
    scalar::hadamard(a, b, out);
}

void axpy(double s, std::span<const double> x, std::span<double> y)
{
#if defined(BUBBLE_HAVE_AVX2_KERNELS)
    if (active_isa() == Isa::avx2)
        return avx2::axpy(s, x, y);
#endif
    scalar::axpy(s, x, y);
}

} // namespace bubble::kernels
