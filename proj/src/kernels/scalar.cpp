#include "calab/kernels.hpp"

namespace calab::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void multiply_scalar(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

double sum_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

void squared_deviation_scalar(const double* x, const double* mean, double* acc, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - mean[i];
        acc[i] += d * d;
    }
}

void arrow_matvec_scalar(double head, double edge, const double* diag, const double* q,
                         double* out, std::size_t n) {
    if (n == 0) return;
    const double q0 = q[0];
    double tail = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        tail += q[j];
        out[j] = diag[j] * q[j] + edge * q0;
    }
    out[0] = head * q0 + edge * tail;
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{Isa::scalar,          dot_scalar,
                                   axpy_scalar,          multiply_scalar,
                                   sum_scalar,           squared_deviation_scalar,
                                   arrow_matvec_scalar};
    return table;
}

}  // namespace calab::kernels
