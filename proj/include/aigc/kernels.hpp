#pragma once

#include <cstddef>

// Vector arithmetic kernels behind the recurrent head. Scalar reference
// implementations are the source of truth; float paths may be routed to an
// AVX2 variant picked once at startup. The double instantiations always run
// scalar so gradient checks are reproducible.

namespace aigc::kernels {

namespace scalar {

template <typename T>
T dot(const T* a, const T* b, std::size_t n) {
    T acc = T(0);
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

// y += alpha * x
template <typename T>
void axpy(T alpha, const T* x, T* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

// y = W x + y, W row-major (rows x cols)
template <typename T>
void gemv_add(const T* w, const T* x, T* y, std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) y[r] += dot(w + r * cols, x, cols);
}

// y += W^T x, W row-major (rows x cols), x length rows, y length cols
template <typename T>
void gemv_t_add(const T* w, const T* x, T* y, std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) axpy(x[r], w + r * cols, y, cols);
}

}  // namespace scalar

namespace avx2 {
float dot(const float* a, const float* b, std::size_t n);
void axpy(float alpha, const float* x, float* y, std::size_t n);
}  // namespace avx2

bool avx2_available();

// Force-select the scalar path (used by equivalence tests); pass true to
// restore runtime detection.
void use_runtime_dispatch(bool enabled);

float dot(const float* a, const float* b, std::size_t n);
void axpy(float alpha, const float* x, float* y, std::size_t n);

inline double dot(const double* a, const double* b, std::size_t n) {
    return scalar::dot(a, b, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
    scalar::axpy(alpha, x, y, n);
}

template <typename T>
void gemv_add(const T* w, const T* x, T* y, std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) y[r] += dot(w + r * cols, x, cols);
}

template <typename T>
void gemv_t_add(const T* w, const T* x, T* y, std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) axpy(x[r], w + r * cols, y, cols);
}

}  // namespace aigc::kernels
