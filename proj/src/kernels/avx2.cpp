#include "bubble/kernels.hpp"

#include <cassert>
#include <immintrin.h>

namespace bubble::kernels::avx2 {

namespace {

inline double hsum(__m256d v)
{
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

// Two accumulators hide FMA latency; the tail is folded in scalar.
inline double dot_impl(const double* a, const double* b, std::size_t n)
{
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i)
        acc += a[i] * b[i];
    return acc;
}

} // namespace

void matvec(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y)
{
    assert(a.size() >= rows * cols && x.size() >= cols && y.size() >= rows);
    for (std::size_t i = 0; i < rows; ++i)
        y[i] = dot_impl(a.data() + i * cols, x.data(), cols);
}

double dot(std::span<const double> a, std::span<const double> b)
{
    assert(a.size() == b.size());
    return dot_impl(a.data(), b.data(), a.size());
}

void hadamard(std::span<const double> a, std::span<const double> b, std::span<double> out)
{
    assert(a.size() == b.size() && out.size() >= a.size());
    const std::size_t n = a.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out.data() + i,
                         _mm256_mul_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i)));
    for (; i < n; ++i)
        out[i] = a[i] * b[i];
}

void axpy(double s, std::span<const double> x, std::span<double> y)
{
    assert(y.size() >= x.size());
    const std::size_t n = x.size();
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y.data() + i);
        _mm256_storeu_pd(y.data() + i, _mm256_fmadd_pd(vs, _mm256_loadu_pd(x.data() + i), vy));
    }
    for (; i < n; ++i)
        y[i] += s * x[i];
}

} // namespace bubble::kernels::avx2
