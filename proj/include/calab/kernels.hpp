#pragma once

// Data-parallel inner loops shared by the integrator, the FIR filter, the
// Green's-function quadrature and the ensemble reductions.
//
// Every kernel has a scalar reference implementation. Vector variants (AVX2+FMA
// on x86-64, NEON on aarch64) are selected once at runtime from the CPU
// features, and can be pinned with CALAB_KERNELS=scalar|avx2|neon. Vector
// variants reassociate sums, so results agree with the scalar path to rounding,
// not bit for bit; a given machine and kernel set is always bit-reproducible.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace calab::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

struct KernelTable {
    Isa isa;

    /// sum_i a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);

    /// y[i] += alpha * x[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);

    /// out[i] = a[i] * b[i]
    void (*multiply)(const double* a, const double* b, double* out, std::size_t n);

    /// sum_i x[i]
    double (*sum)(const double* x, std::size_t n);

    /// acc[i] += (x[i] - mean[i])^2
    void (*accumulate_squared_deviation)(const double* x, const double* mean, double* acc,
                                         std::size_t n);

    /// Arrowhead product. out[0] = head * q[0] + edge * sum_{j>=1} q[j];
    /// out[j] = diag[j] * q[j] + edge * q[0] for j >= 1. diag[0] is ignored.
    void (*arrow_matvec)(double head, double edge, const double* diag, const double* q,
                         double* out, std::size_t n);
};

const KernelTable& scalar_table();
#if defined(CALAB_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(CALAB_HAVE_NEON)
const KernelTable& neon_table();
#endif

/// ISAs compiled in and supported by the running CPU, scalar first.
std::vector<Isa> available_isas();

/// Table for a specific ISA; throws std::invalid_argument if unavailable.
const KernelTable& table_for(Isa isa);

/// The process-wide selection (CPU detection, overridable via CALAB_KERNELS).
const KernelTable& active();

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active().axpy(alpha, x.data(), y.data(), x.size());
}

inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

}  // namespace calab::kernels
