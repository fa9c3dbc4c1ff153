#include "grt/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>

#include "grt/errors.hpp"

namespace grt {

namespace {

constexpr std::array<char, 8> kSinoMagic{'G', 'R', 'T', 'S', 'I', 'N', 'O', '1'};
constexpr std::array<char, 8> kImageMagic{'G', 'R', 'T', 'I', 'M', 'A', 'G', '1'};

void put_u64(std::ostream &os, std::uint64_t v) {
  std::array<unsigned char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char *>(b.data()), 8);
}

std::uint64_t get_u64(std::istream &is) {
  std::array<unsigned char, 8> b{};
  is.read(reinterpret_cast<char *>(b.data()), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream &os, double v) { put_u64(os, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream &is) { return std::bit_cast<double>(get_u64(is)); }

void put_values(std::ostream &os, const std::vector<double> &values) {
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char *>(values.data()),
             static_cast<std::streamsize>(values.size() * sizeof(double)));
  } else {
    for (double v : values) put_f64(os, v);
  }
}

void get_values(std::istream &is, std::vector<double> &values) {
  if constexpr (std::endian::native == std::endian::little) {
    is.read(reinterpret_cast<char *>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
  } else {
    for (double &v : values) v = get_f64(is);
  }
}

std::ofstream open_out(const std::filesystem::path &path, bool binary) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "' for reading");
  return is;
}

void expect_magic(std::istream &is, const std::array<char, 8> &magic,
                  const std::filesystem::path &path) {
  std::array<char, 8> got{};
  is.read(got.data(), 8);
  if (!is || got != magic) throw IoError("'" + path.string() + "' has an unexpected header");
}

constexpr std::uint64_t kMaxCount = std::uint64_t{1} << 32;

}  // namespace

void write_sinogram(const std::filesystem::path &path, const Sinogram &sino) {
  auto os = open_out(path, true);
  os.write(kSinoMagic.data(), 8);
  put_u64(os, sino.grid.n_alpha);
  put_u64(os, sino.grid.n_p);
  put_f64(os, sino.grid.alpha0);
  put_f64(os, sino.grid.d_alpha);
  put_f64(os, sino.grid.p0);
  put_f64(os, sino.grid.d_p);
  put_values(os, sino.values);
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

Sinogram read_sinogram(const std::filesystem::path &path) {
  auto is = open_in(path);
  expect_magic(is, kSinoMagic, path);
  SinogramGrid g;
  const std::uint64_t na = get_u64(is), np = get_u64(is);
  if (na == 0 || np == 0 || na > kMaxCount || np > kMaxCount)
    throw IoError("'" + path.string() + "' has an invalid grid size");
  g.n_alpha = na;
  g.n_p = np;
  g.alpha0 = get_f64(is);
  g.d_alpha = get_f64(is);
  g.p0 = get_f64(is);
  g.d_p = get_f64(is);
  Sinogram s(g);
  get_values(is, s.values);
  if (!is) throw IoError("'" + path.string() + "' is truncated");
  return s;
}

void write_sinogram_csv(const std::filesystem::path &path, const Sinogram &sino) {
  auto os = open_out(path, false);
  os << std::setprecision(17) << "alpha,p,value\n";
  for (std::size_t ia = 0; ia < sino.grid.n_alpha; ++ia)
    for (std::size_t ip = 0; ip < sino.grid.n_p; ++ip)
      os << sino.grid.alpha(ia) << ',' << sino.grid.p(ip) << ',' << sino.at(ia, ip) << '\n';
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

void write_image(const std::filesystem::path &path, const Image &img) {
  auto os = open_out(path, true);
  os.write(kImageMagic.data(), 8);
  put_u64(os, img.grid.n_x);
  put_u64(os, img.grid.n_y);
  put_f64(os, img.grid.x_min);
  put_f64(os, img.grid.x_max);
  put_f64(os, img.grid.y_min);
  put_f64(os, img.grid.y_max);
  put_values(os, img.values);
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

Image read_image(const std::filesystem::path &path) {
  auto is = open_in(path);
  expect_magic(is, kImageMagic, path);
  ImageGrid g;
  const std::uint64_t nx = get_u64(is), ny = get_u64(is);
  if (nx < 2 || ny < 2 || nx > kMaxCount || ny > kMaxCount)
    throw IoError("'" + path.string() + "' has an invalid grid size");
  g.n_x = nx;
  g.n_y = ny;
  g.x_min = get_f64(is);
  g.x_max = get_f64(is);
  g.y_min = get_f64(is);
  g.y_max = get_f64(is);
  Image img(g);
  get_values(is, img.values);
  if (!is) throw IoError("'" + path.string() + "' is truncated");
  return img;
}

void write_iteration_log(const std::filesystem::path &path,
                         const std::vector<IterationRecord> &log) {
  auto os = open_out(path, false);
  os << std::setprecision(17) << "iter,cost,update_linf,step\n";
  for (const IterationRecord &r : log)
    os << r.iter << ',' << r.cost << ',' << r.update_linf << ',' << r.step << '\n';
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

void write_dtb_csv(const std::filesystem::path &path, const DtbCurve &curve) {
  auto os = open_out(path, false);
  os << std::setprecision(17) << "r,upsilon";
  for (std::size_t l = 0; l < curve.terms.size(); ++l) os << ",upsilon_" << l + 1;
  os << '\n';
  for (std::size_t k = 0; k < curve.r_values.size(); ++k) {
    os << curve.r_values[k] << ',' << curve.upsilon[k];
    for (const auto &term : curve.terms) os << ',' << term[k];
    os << '\n';
  }
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

void write_tangencies_csv(const std::filesystem::path &path, const std::vector<Tangency> &fan) {
  auto os = open_out(path, false);
  os << std::setprecision(17) << "l,alpha,p,nu,dalpha,delta_phi,grad_norm\n";
  for (std::size_t l = 0; l < fan.size(); ++l) {
    const Tangency &t = fan[l];
    os << l + 1 << ',' << t.alpha_l << ',' << t.p_l << ',' << t.nu_l << ',' << t.dalpha << ','
       << t.delta_phi << ',' << t.grad_norm << '\n';
  }
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace grt
