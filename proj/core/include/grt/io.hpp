#pragma once

#include <filesystem>

#include "grt/dtb.hpp"
#include "grt/grids.hpp"
#include "grt/recon.hpp"

namespace grt {

/// Binary layout: 8-byte magic "GRTSINO1", n_alpha and n_p as little-endian
/// uint64, alpha0, d_alpha, p0, d_p as little-endian float64, then the
/// row-major float64 values.
void write_sinogram(const std::filesystem::path &path, const Sinogram &sino);
Sinogram read_sinogram(const std::filesystem::path &path);
/// Columns alpha,p,value.
void write_sinogram_csv(const std::filesystem::path &path, const Sinogram &sino);

/// Binary layout: magic "GRTIMAG1", n_x and n_y as uint64, x_min, x_max,
/// y_min, y_max as float64, then row-major float64 values (row = y).
void write_image(const std::filesystem::path &path, const Image &img);
Image read_image(const std::filesystem::path &path);

/// Columns iter,cost,update_linf,step.
void write_iteration_log(const std::filesystem::path &path,
                         const std::vector<IterationRecord> &log);

/// Columns r,upsilon, then upsilon_1..upsilon_L for the individual tangencies.
void write_dtb_csv(const std::filesystem::path &path, const DtbCurve &curve);
/// One row per tangency: l,alpha,p,nu,dalpha,delta_phi,grad_norm.
void write_tangencies_csv(const std::filesystem::path &path, const std::vector<Tangency> &fan);

}  // namespace grt
