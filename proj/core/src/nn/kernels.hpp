#pragma once

// Row-major dense kernels shared by the dense and conv2d layers.
//
// Every output row is accumulated over the inner dimension in a fixed order
// that does not depend on the number of rows, so a row evaluated alone and
// the same row evaluated inside a large batch produce bit-identical values.

#include <cstddef>

namespace surfrank::nn::kernels {

/// out[r, :] = bias + in[r, :] * w, with w stored k x m.
void affine_forward(const double* in, std::size_t rows, std::size_t k, const double* w,
                    const double* bias, std::size_t m, double* out);

/// Accumulates dw += in^T dz and dbias += column sums of dz; when din is not
/// null also writes din = dz w^T.
void affine_backward(const double* in, std::size_t rows, std::size_t k, const double* w,
                     std::size_t m, const double* dz, double* dw, double* dbias, double* din);

/// Gathers 3x3 zero-padded patches: col has (n*h*w) rows of 9*c values
/// ordered (ky, kx, channel).
void im2col3x3(const double* image, std::size_t n, std::size_t h, std::size_t w, std::size_t c,
               double* col);

/// Adjoint of im2col3x3: scatters-and-adds patch gradients back onto the image.
void col2im3x3(const double* col, std::size_t n, std::size_t h, std::size_t w, std::size_t c,
               double* image);

}  // namespace surfrank::nn::kernels
