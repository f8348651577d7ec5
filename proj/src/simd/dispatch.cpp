#include <atomic>
#include <cstdlib>
#include <string>

#include "drselect/simd/kernels.hpp"

namespace drselect::simd {

#if defined(DRSELECT_HAVE_AVX2)
const KernelTable* avx2_kernels_compiled();
#endif

const KernelTable* avx2_kernels() {
#if defined(DRSELECT_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? avx2_kernels_compiled() : nullptr;
#else
    return nullptr;
#endif
}

namespace {

const KernelTable* detect() {
    if (const char* env = std::getenv("DRSELECT_SIMD")) {
        const std::string want(env);
        if (want == "scalar") return &scalar_kernels();
        if (want == "avx2" && avx2_kernels() != nullptr) return avx2_kernels();
    }
    if (const KernelTable* t = avx2_kernels()) return t;
    return &scalar_kernels();
}

std::atomic<const KernelTable*>& slot() {
    static std::atomic<const KernelTable*> table{detect()};
    return table;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

void force_isa(Isa isa) {
    if (isa == Isa::avx2 && avx2_kernels() != nullptr) {
        slot().store(avx2_kernels(), std::memory_order_release);
    } else {
        slot().store(&scalar_kernels(), std::memory_order_release);
    }
}

std::string_view active_name() { return active().name; }

}  // namespace drselect::simd
