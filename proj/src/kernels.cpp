#include "aigc/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define AIGC_X86 1
#else
#define AIGC_X86 0
#endif

namespace aigc::kernels {

namespace {

bool detect_avx2() {
#if AIGC_X86 && defined(__GNUC__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

bool g_dispatch_enabled = true;

bool use_avx2() {
    static const bool available = detect_avx2();
    return available && g_dispatch_enabled;
}

}  // namespace

bool avx2_available() { return detect_avx2(); }

void use_runtime_dispatch(bool enabled) { g_dispatch_enabled = enabled; }

float dot(const float* a, const float* b, std::size_t n) {
#if AIGC_X86
    if (use_avx2()) return avx2::dot(a, b, n);
#endif
    return scalar::dot(a, b, n);
}

void axpy(float alpha, const float* x, float* y, std::size_t n) {
#if AIGC_X86
    if (use_avx2()) {
        avx2::axpy(alpha, x, y, n);
        return;
    }
#endif
    scalar::axpy(alpha, x, y, n);
}

}  // namespace aigc::kernels
