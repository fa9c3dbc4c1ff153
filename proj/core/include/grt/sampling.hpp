#pragma once

#include <cstddef>

#include "grt/geometry.hpp"
#include "grt/grids.hpp"
#include "grt/kernels.hpp"
#include "grt/phantom.hpp"

namespace grt {

/// Exact GRT data of a disk phantom: the curve is split at its crossings with
/// the disk boundary and the support box, and W / |grad phi| is integrated
/// piecewise with Gauss-Legendre. Curves missing the support give 0.
Sinogram synthesize_sinogram(const GrtModel &model, const Phantom &phantom,
                             const SinogramGrid &grid);

/// Single-ray variant of synthesize_sinogram.
double synthesize_ray(const GrtModel &model, const Phantom &phantom, DataPoint y);

/// Arc-length quadrature of f W / |grad phi| along S_y with sampling step
/// `step`; jumps of f located by bisection between samples. Works for any
/// phantom (only f is evaluated). Needs phantom.support.
double quadrature_ray(const GrtModel &model, const Phantom &phantom, DataPoint y, double step);

/// Tensor-product kernel interpolation of coarse data onto the dense grid:
///   g_dense(a, p) = sum_j phi_alpha((a - a_j1) / d_alpha) phi_p((p - p_j2) / d_p) g(y_j)
/// Alpha taps wrap when the coarse grid is periodic; p taps outside the
/// coarse grid read 0.
Sinogram upsample(const Sinogram &coarse, const KernelSpec &kernel_alpha,
                  const KernelSpec &kernel_p, const SinogramGrid &dense);

}  // namespace grt
