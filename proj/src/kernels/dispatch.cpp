#include <cstdlib>
#include <stdexcept>
#include <string>

#include "calab/kernels.hpp"

namespace calab::kernels {
namespace {

bool cpu_supports(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if defined(CALAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Isa::neon:
#if defined(CALAB_HAVE_NEON)
            return true;  // mandatory on aarch64
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& select() {
    if (const char* forced = std::getenv("CALAB_KERNELS"); forced != nullptr && *forced != '\0') {
        const std::string name(forced);
        for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
            if (name == isa_name(isa)) return table_for(isa);
        }
        if (name != "auto") throw std::invalid_argument("CALAB_KERNELS: unknown kernel set '" + name + "'");
    }
    const auto isas = available_isas();
    return table_for(isas.back());
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

std::vector<Isa> available_isas() {
    std::vector<Isa> out{Isa::scalar};
    for (Isa isa : {Isa::avx2, Isa::neon}) {
        if (cpu_supports(isa)) out.push_back(isa);
    }
    return out;
}

const KernelTable& table_for(Isa isa) {
    if (!cpu_supports(isa)) {
        throw std::invalid_argument("kernel set '" + std::string(isa_name(isa)) +
                                    "' is not available on this machine");
    }
    switch (isa) {
#if defined(CALAB_HAVE_AVX2)
        case Isa::avx2: return avx2_table();
#endif
#if defined(CALAB_HAVE_NEON)
        case Isa::neon: return neon_table();
#endif
        default: return scalar_table();
    }
}

const KernelTable& active() {
    static const KernelTable& table = select();
    return table;
}

}  // namespace calab::kernels
