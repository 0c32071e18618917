#include <arm_neon.h>

#include "calab/kernels.hpp"

namespace calab::kernels {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void multiply_neon(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

double sum_neon(const double* x, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vaddq_f64(acc0, vld1q_f64(x + i));
        acc1 = vaddq_f64(acc1, vld1q_f64(x + i + 2));
    }
    double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) acc += x[i];
    return acc;
}

void squared_deviation_neon(const double* x, const double* mean, double* acc, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(x + i), vld1q_f64(mean + i));
        vst1q_f64(acc + i, vfmaq_f64(vld1q_f64(acc + i), d, d));
    }
    for (; i < n; ++i) {
        const double d = x[i] - mean[i];
        acc[i] += d * d;
    }
}

void arrow_matvec_neon(double head, double edge, const double* diag, const double* q,
                       double* out, std::size_t n) {
    if (n == 0) return;
    const double q0 = q[0];
    const float64x2_t vedge_q0 = vdupq_n_f64(edge * q0);
    float64x2_t tail = vdupq_n_f64(0.0);
    std::size_t j = 1;
    for (; j + 2 <= n; j += 2) {
        const float64x2_t qj = vld1q_f64(q + j);
        tail = vaddq_f64(tail, qj);
        vst1q_f64(out + j, vfmaq_f64(vedge_q0, vld1q_f64(diag + j), qj));
    }
    double tail_sum = vaddvq_f64(tail);
    for (; j < n; ++j) {
        tail_sum += q[j];
        out[j] = diag[j] * q[j] + edge * q0;
    }
    out[0] = head * q0 + edge * tail_sum;
}

}  // namespace

const KernelTable& neon_table() {
    static const KernelTable table{Isa::neon,          dot_neon,
                                   axpy_neon,          multiply_neon,
                                   sum_neon,           squared_deviation_neon,
                                   arrow_matvec_neon};
    return table;
}

}  // namespace calab::kernels
