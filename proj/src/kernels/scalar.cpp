#include "bubble/kernels.hpp"

#include <cassert>

namespace bubble::kernels::scalar {

void matvec(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y)
{
    assert(a.size() >= rows * cols && x.size() >= cols && y.size() >= rows);
    for (std::size_t i = 0; i < rows; ++i) {
        const double* row = a.data() + i * cols;
        double acc = 0.0;
        for (std::size_t j = 0; j < cols; ++j)
            acc += row[j] * x[j];
        y[i] = acc;
    }
}

double dot(std::span<const double> a, std::span<const double> b)
{
    assert(a.size() == b.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += a[i] * b[i];
    return acc;
}

void hadamard(std::span<const double> a, std::span<const double> b, std::span<double> out)
{
    assert(a.size() == b.size() && out.size() >= a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] * b[i];
}

void axpy(double s, std::span<const double> x, std::span<double> y)
{
    assert(y.size() >= x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] += s * x[i];
}

} // namespace bubble::kernels::scalar
