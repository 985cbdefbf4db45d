#include "kernels.hpp"

#include <algorithm>
#include <vector>

namespace surfrank::nn::kernels {

void affine_forward(const double* in, std::size_t rows, std::size_t k, const double* w,
                    const double* bias, std::size_t m, double* out) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* x = in + r * k;
        double* o = out + r * m;
        std::copy(bias, bias + m, o);
        for (std::size_t kk = 0; kk < k; ++kk) {
            const double a = x[kk];
            if (a == 0.0) continue;
            const double* wr = w + kk * m;
            for (std::size_t j = 0; j < m; ++j) o[j] += a * wr[j];
        }
    }
}

void affine_backward(const double* in, std::size_t rows, std::size_t k, const double* w,
                     std::size_t m, const double* dz, double* dw, double* dbias, double* din) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* x = in + r * k;
        const double* g = dz + r * m;
        for (std::size_t j = 0; j < m; ++j) dbias[j] += g[j];
        for (std::size_t kk = 0; kk < k; ++kk) {
            const double a = x[kk];
            if (a == 0.0) continue;
            double* dwr = dw + kk * m;
            for (std::size_t j = 0; j < m; ++j) dwr[j] += a * g[j];
        }
    }
    if (!din) return;

    // din = dz * w^T, computed against a transposed copy so the inner loop
    // runs over contiguous memory.
    std::vector<double> wt(m * k);
    for (std::size_t kk = 0; kk < k; ++kk)
        for (std::size_t j = 0; j < m; ++j) wt[j * k + kk] = w[kk * m + j];
    for (std::size_t r = 0; r < rows; ++r) {
        const double* g = dz + r * m;
        double* d = din + r * k;
        std::fill(d, d + k, 0.0);
        for (std::size_t j = 0; j < m; ++j) {
            const double gj = g[j];
            if (gj == 0.0) continue;
            const double* wtr = wt.data() + j * k;
            for (std::size_t kk = 0; kk < k; ++kk) d[kk] += gj * wtr[kk];
        }
    }
}

void im2col3x3(const double* image, std::size_t n, std::size_t h, std::size_t w, std::size_t c,
               double* col) {
    const std::size_t patch = 9 * c;
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t y = 0; y < h; ++y) {
            for (std::size_t x = 0; x < w; ++x) {
                double* dst = col + ((b * h + y) * w + x) * patch;
                for (std::size_t ky = 0; ky < 3; ++ky) {
                    const auto sy = static_cast<std::ptrdiff_t>(y + ky) - 1;
                    for (std::size_t kx = 0; kx < 3; ++kx) {
                        const auto sx = static_cast<std::ptrdiff_t>(x + kx) - 1;
                        double* cell = dst + (ky * 3 + kx) * c;
                        if (sy < 0 || sx < 0 || sy >= static_cast<std::ptrdiff_t>(h) ||
                            sx >= static_cast<std::ptrdiff_t>(w)) {
                            std::fill(cell, cell + c, 0.0);
                        } else {
                            const double* src =
                                image + ((b * h + static_cast<std::size_t>(sy)) * w +
                                         static_cast<std::size_t>(sx)) * c;
                            std::copy(src, src + c, cell);
                        }
                    }
                }
            }
        }
    }
}

void col2im3x3(const double* col, std::size_t n, std::size_t h, std::size_t w, std::size_t c,
               double* image) {
    const std::size_t patch = 9 * c;
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t y = 0; y < h; ++y) {
            for (std::size_t x = 0; x < w; ++x) {
                const double* src = col + ((b * h + y) * w + x) * patch;
                for (std::size_t ky = 0; ky < 3; ++ky) {
                    const auto sy = static_cast<std::ptrdiff_t>(y + ky) - 1;
                    if (sy < 0 || sy >= static_cast<std::ptrdiff_t>(h)) continue;
                    for (std::size_t kx = 0; kx < 3; ++kx) {
                        const auto sx = static_cast<std::ptrdiff_t>(x + kx) - 1;
                        if (sx < 0 || sx >= static_cast<std::ptrdiff_t>(w)) continue;
                        double* dst = image + ((b * h + static_cast<std::size_t>(sy)) * w +
                                               static_cast<std::size_t>(sx)) * c;
                        const double* cell = src + (ky * 3 + kx) * c;
                        for (std::size_t ch = 0; ch < c; ++ch) dst[ch] += cell[ch];
                    }
                }
            }
        }
    }
}

}  // namespace surfrank::nn::kernels
