#include "experiment_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <vector>

#include "grt/errors.hpp"
#include "grt/kernels.hpp"

namespace grt::app {

namespace {

using Setter = std::function<void(ExperimentConfig &, const std::string &, const std::string &)>;
using Getter = std::function<std::string(const ExperimentConfig &)>;

struct Field {
  std::string key;
  Setter set;
  Getter get;
};

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string &key, const std::string &text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v))
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  return v;
}

std::size_t parse_count(const std::string &key, const std::string &text) {
  std::size_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw ConfigError(key + ": expected a nonnegative integer, got '" + text + "'");
  return v;
}

bool parse_bool(const std::string &key, const std::string &text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

template <typename M>
Field real(std::string key, M ExperimentConfig::*m) {
  return {std::move(key),
          [m](ExperimentConfig &c, const std::string &k, const std::string &v) {
            c.*m = parse_double(k, v);
          },
          [m](const ExperimentConfig &c) { return format_double(c.*m); }};
}

template <typename M>
Field count(std::string key, M ExperimentConfig::*m) {
  return {std::move(key),
          [m](ExperimentConfig &c, const std::string &k, const std::string &v) {
            c.*m = parse_count(k, v);
          },
          [m](const ExperimentConfig &c) { return std::to_string(c.*m); }};
}

Field text(std::string key, std::string ExperimentConfig::*m) {
  return {std::move(key),
          [m](ExperimentConfig &c, const std::string &, const std::string &v) { c.*m = v; },
          [m](const ExperimentConfig &c) { return c.*m; }};
}

const std::vector<Field> &fields() {
  static const std::vector<Field> table = {
      text("model.kind", &ExperimentConfig::model_kind),
      real("model.center_radius", &ExperimentConfig::center_radius),
      real("phantom.center_x", &ExperimentConfig::disk_x),
      real("phantom.center_y", &ExperimentConfig::disk_y),
      real("phantom.radius", &ExperimentConfig::disk_radius),
      real("phantom.inside", &ExperimentConfig::inside),
      real("phantom.outside", &ExperimentConfig::outside),
      real("phantom.beta0_pi", &ExperimentConfig::beta0_pi),
      count("image.n", &ExperimentConfig::image_n),
      real("image.half_width", &ExperimentConfig::half_width),
      count("coarse.n_alpha", &ExperimentConfig::coarse_n_alpha),
      count("coarse.n_p", &ExperimentConfig::coarse_n_p),
      count("dense.n_alpha", &ExperimentConfig::dense_n_alpha),
      count("dense.n_p", &ExperimentConfig::dense_n_p),
      text("kernel.alpha", &ExperimentConfig::kernel_alpha),
      text("kernel.p", &ExperimentConfig::kernel_p),
      real("solver.kappa", &ExperimentConfig::kappa),
      {"solver.step_rule",
       [](ExperimentConfig &c, const std::string &k, const std::string &v) {
         if (v == "inverse_lipschitz") c.step_kind = StepKind::inverse_lipschitz;
         else if (v == "fixed") c.step_kind = StepKind::fixed;
         else throw ConfigError(k + ": expected inverse_lipschitz or fixed, got '" + v + "'");
       },
       [](const ExperimentConfig &c) {
         return std::string(c.step_kind == StepKind::fixed ? "fixed" : "inverse_lipschitz");
       }},
      real("solver.step", &ExperimentConfig::fixed_step),
      count("solver.power_iterations", &ExperimentConfig::power_iterations),
      real("solver.stop_tol", &ExperimentConfig::stop_tol),
      count("solver.stop_consecutive", &ExperimentConfig::stop_consecutive),
      count("solver.max_iters", &ExperimentConfig::max_iters),
      {"solver.dirichlet",
       [](ExperimentConfig &c, const std::string &k, const std::string &v) {
         c.dirichlet = parse_bool(k, v);
       },
       [](const ExperimentConfig &c) { return std::string(c.dirichlet ? "true" : "false"); }},
      count("solver.cache_mb", &ExperimentConfig::cache_mb),
      real("dtb.lambda_max", &ExperimentConfig::lambda_max),
      count("dtb.quad_points", &ExperimentConfig::quad_points),
      real("dtb.r_min", &ExperimentConfig::r_min),
      real("dtb.r_max", &ExperimentConfig::r_max),
      real("dtb.r_step", &ExperimentConfig::r_step),
      real("compare.window_lo", &ExperimentConfig::window_lo),
      real("compare.window_hi", &ExperimentConfig::window_hi),
      count("compare.global_samples", &ExperimentConfig::global_samples),
      text("output.dir", &ExperimentConfig::output_dir),
  };
  return table;
}

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double p_half_span(const ExperimentConfig &c) { return c.half_width * std::numbers::sqrt2; }

SinogramGrid scan_grid(const ExperimentConfig &c, std::size_t n_alpha, std::size_t n_p) {
  const double mid = c.model_kind == "circular" ? c.center_radius : 0.0;
  return full_scan_grid(n_alpha, n_p, mid - p_half_span(c), mid + p_half_span(c));
}

}  // namespace

void ExperimentConfig::validate() const {
  if (model_kind != "circular" && model_kind != "classical_radon")
    throw ConfigError("model.kind: expected circular or classical_radon, got '" + model_kind + "'");
  if (!(half_width > 0.0)) throw ConfigError("image.half_width must be positive");
  if (model_kind == "circular" && !(center_radius > p_half_span(*this)))
    throw ConfigError("model.center_radius must exceed the image half-diagonal");
  if (!(disk_radius > 0.0)) throw ConfigError("phantom.radius must be positive");
  if (std::abs(disk_x) + disk_radius >= half_width || std::abs(disk_y) + disk_radius >= half_width)
    throw ConfigError("phantom: the disk must lie inside the image square");
  if (image_n < 3) throw ConfigError("image.n must be at least 3");
  if (coarse_n_alpha < 2 || coarse_n_p < 2) throw ConfigError("coarse grid needs at least 2x2 nodes");
  if (dense_n_alpha < 2 || dense_n_p < 2) throw ConfigError("dense grid needs at least 2x2 nodes");
  kernel_by_name(kernel_alpha);
  kernel_by_name(kernel_p);
  if (step_kind == StepKind::fixed && !(fixed_step > 0.0))
    throw ConfigError("solver.step must be positive");
  if (power_iterations == 0) throw ConfigError("solver.power_iterations must be at least 1");
  if (!(r_step > 0.0) || !(r_max > r_min)) throw ConfigError("dtb: need r_min < r_max and r_step > 0");
  if (!(r_min <= 0.0 && r_max >= 0.0)) throw ConfigError("dtb: the r axis must contain 0");
  if (!(window_lo <= window_hi)) throw ConfigError("compare.window_lo must not exceed window_hi");
  if (window_lo < r_min || window_hi > r_max)
    throw ConfigError("compare window must lie inside [dtb.r_min, dtb.r_max]");
  if (global_samples < 2) throw ConfigError("compare.global_samples must be at least 2");
  if (output_dir.empty()) throw ConfigError("output.dir must not be empty");
  solver_config().validate();
  dtb_config().validate();
}

GrtModel ExperimentConfig::model() const {
  return model_kind == "circular" ? circular_grt(center_radius) : classical_radon();
}

Phantom ExperimentConfig::phantom() const {
  Phantom ph = disk_phantom({disk_x, disk_y}, disk_radius, inside, outside);
  ph.support = Box{-half_width, half_width, -half_width, half_width};
  return ph;
}

Vec2 ExperimentConfig::boundary_point() const {
  return disk_boundary_point(Disk{{disk_x, disk_y}, disk_radius}, beta0_pi * std::numbers::pi);
}

Vec2 ExperimentConfig::profile_direction() const { return phantom().normal(boundary_point()); }

ImageGrid ExperimentConfig::image_grid() const { return square_grid(image_n, half_width); }

SinogramGrid ExperimentConfig::coarse_grid() const {
  return scan_grid(*this, coarse_n_alpha, coarse_n_p);
}

SinogramGrid ExperimentConfig::dense_grid() const {
  return scan_grid(*this, dense_n_alpha, dense_n_p);
}

SolverConfig ExperimentConfig::solver_config() const {
  SolverConfig s;
  s.kappa = kappa;
  s.epsilon = coarse_grid().epsilon();
  if (step_kind == StepKind::fixed) s.step_rule = FixedStep{fixed_step};
  else s.step_rule = InverseLipschitz{power_iterations};
  s.stop_tol = stop_tol;
  s.stop_consecutive = stop_consecutive;
  s.max_iters = max_iters;
  s.dirichlet = dirichlet;
  return s;
}

DtbConfig ExperimentConfig::dtb_config() const {
  DtbConfig d;
  d.kappa = kappa;
  d.mu = coarse_grid().mu();
  d.kernel_alpha = kernel_by_name(kernel_alpha);
  d.kernel_p = kernel_by_name(kernel_p);
  d.lambda_max = lambda_max;
  d.quad_points = quad_points;
  d.r_grid = uniform_axis(r_min, r_max, r_step);
  return d;
}

ExperimentConfig parse_config(const std::string &text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto &table = fields();
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const Field &f) { return f.key == key; });
    if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(key + ": given more than once");
    it->set(cfg, key, value);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const ExperimentConfig &cfg) {
  std::string out;
  std::string section;
  for (const Field &f : fields()) {
    const std::string s = f.key.substr(0, f.key.find('.'));
    if (s != section && !section.empty()) out += '\n';
    section = s;
    out += f.key + " = " + f.get(cfg) + '\n';
  }
  return out;
}

void save_config(const std::filesystem::path &path, const ExperimentConfig &cfg) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os << to_text(cfg);
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace grt::app
