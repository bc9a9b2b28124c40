#pragma once

// Declarative experiments for the crossing-times CLI: INI config parsing,
// method dispatch, sweeps, CSV rows and the JSON run manifest.

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "crossing/crossing.hpp"
#include "json.hpp"

#ifndef CROSSING_VERSION
#define CROSSING_VERSION "unknown"
#endif

namespace crossing::experiment {

namespace pt = boost::property_tree;

inline const std::vector<std::string> kMethods = {"image", "qbm", "detector", "cmeas",
                                                  "timeless"};
inline const std::vector<std::string> kAxes = {"tau", "gamma_d", "a"};

struct StateConfig {
  std::string kind = "gaussian";  // gaussian | odd
  double x0 = 1.0;
  double p0 = -1.0;
  double sigma = 0.5;
};

struct GridConfig {
  double half_width = 20.0;
  std::size_t n = 1024;
};

struct TimelessSection {
  std::string region = "disk";  // disk | rectangle
  double cx = 0.0, cy = 0.0, radius = 1.0;
  double lo_x = -1.0, lo_y = -1.0, hi_x = 1.0, hi_y = 1.0;
  double x_sigma = 1.0, p_sigma = 1.0;
  double x_mean_x = 0.0, x_mean_y = 0.0, p_mean_x = 0.0, p_mean_y = 0.0;
  double eps = 1e-6;
  double t0 = 0.0;
  std::size_t samples = 100000;
};

struct ExperimentConfig {
  std::vector<std::string> methods;
  std::vector<double> taus;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string out_dir = ".";
  StateConfig state;
  GridConfig grid;
  PhysParams phys;
  std::size_t detector_steps = 2000;
  double cmeas_dt = 0.25;
  std::size_t qbm_stride = 1;
  TimelessSection timeless;
  // sweep axes in file order; values in the given order
  std::vector<std::pair<std::string, std::vector<double>>> axes;
  bool has_sweep_section = false;

  bool uses(const std::string& m) const {
    return std::find(methods.begin(), methods.end(), m) != methods.end();
  }
  bool needs_wavefunction() const {
    return uses("image") || uses("qbm") || uses("detector") || uses("cmeas");
  }
};

namespace detail {

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " is not a finite number: '" + v + "'");
  }
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
    const auto u = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return u;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " is not a non-negative integer: '" + v + "'");
  }
}

inline std::vector<double> parse_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split_list(v)) out.push_back(parse_double(key, s));
  return out;
}

/// Reads keys from one section, rejecting keys that are not listed.
class Section {
 public:
  Section(const pt::ptree& root, std::string name, std::set<std::string> allowed)
      : name_(std::move(name)) {
    const auto node = root.get_child_optional(name_);
    if (!node) return;
    present_ = true;
    for (const auto& [k, v] : *node) {
      if (!allowed.count(k)) throw ConfigError("config: unknown key [" + name_ + "] " + k);
      values_[k] = trim(v.data());
    }
  }
  bool present() const { return present_; }
  std::optional<std::string> raw(const std::string& k) const {
    auto it = values_.find(k);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }
  std::string key(const std::string& k) const { return "[" + name_ + "] " + k; }
  void get(const std::string& k, double& out) const {
    if (auto r = raw(k)) out = parse_double(key(k), *r);
  }
  void get(const std::string& k, std::size_t& out) const {
    if (auto r = raw(k)) out = static_cast<std::size_t>(parse_u64(key(k), *r));
  }
  void get(const std::string& k, std::string& out) const {
    if (auto r = raw(k)) out = *r;
  }

 private:
  std::string name_;
  bool present_ = false;
  std::map<std::string, std::string> values_;
};

inline std::vector<double> geometric(double a, double b, std::size_t n) {
  if (!(a > 0.0) || !(b > a) || n < 2) throw ConfigError("config: bad geometric range");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = a * std::pow(b / a, static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return out;
}

}  // namespace detail

inline ExperimentConfig parse_config(const pt::ptree& root) {
  using detail::Section;
  for (const auto& [name, node] : root) {
    static const std::set<std::string> known = {"run",      "state", "grid",  "physics",
                                                "detector", "cmeas", "qbm",   "timeless",
                                                "sweep"};
    if (!known.count(name)) throw ConfigError("config: unknown section [" + name + "]");
    if (node.data().size() && node.empty()) {
      throw ConfigError("config: key '" + name + "' outside any section");
    }
  }

  ExperimentConfig c;
  Section run(root, "run", {"methods", "tau", "seed", "threads", "out"});
  if (!run.present()) throw ConfigError("config: missing [run] section");
  const auto methods = run.raw("methods");
  if (!methods) throw ConfigError("config: [run] methods is required");
  for (const auto& m : detail::split_list(*methods)) {
    if (std::find(kMethods.begin(), kMethods.end(), m) == kMethods.end()) {
      throw ConfigError("config: unknown method '" + m + "'");
    }
    if (!c.uses(m)) c.methods.push_back(m);
  }
  if (c.methods.empty()) throw ConfigError("config: [run] methods is empty");
  if (auto t = run.raw("tau")) c.taus = detail::parse_doubles(run.key("tau"), *t);
  if (auto s = run.raw("seed")) c.seed = detail::parse_u64(run.key("seed"), *s);
  if (auto t = run.raw("threads")) {
    c.threads = static_cast<unsigned>(detail::parse_u64(run.key("threads"), *t));
  }
  run.get("out", c.out_dir);

  Section state(root, "state", {"kind", "x0", "p0", "sigma"});
  state.get("kind", c.state.kind);
  state.get("x0", c.state.x0);
  state.get("p0", c.state.p0);
  state.get("sigma", c.state.sigma);

  Section grid(root, "grid", {"half_width", "n"});
  grid.get("half_width", c.grid.half_width);
  grid.get("n", c.grid.n);

  Section phys(root, "physics", {"m", "hbar", "gamma", "kT", "gamma_d"});
  phys.get("m", c.phys.m);
  phys.get("hbar", c.phys.hbar);
  phys.get("gamma", c.phys.gamma);
  phys.get("kT", c.phys.kT);
  phys.get("gamma_d", c.phys.gamma_d);

  Section det(root, "detector", {"steps"});
  det.get("steps", c.detector_steps);
  Section cm(root, "cmeas", {"dt"});
  cm.get("dt", c.cmeas_dt);
  Section qbm(root, "qbm", {"stride"});
  qbm.get("stride", c.qbm_stride);

  Section tl(root, "timeless",
             {"region", "cx", "cy", "radius", "lo_x", "lo_y", "hi_x", "hi_y", "x_sigma",
              "p_sigma", "x_mean_x", "x_mean_y", "p_mean_x", "p_mean_y", "eps", "t0",
              "samples"});
  auto& T = c.timeless;
  tl.get("region", T.region);
  for (auto [k, p] : std::vector<std::pair<const char*, double*>>{
           {"cx", &T.cx},         {"cy", &T.cy},           {"radius", &T.radius},
           {"lo_x", &T.lo_x},     {"lo_y", &T.lo_y},       {"hi_x", &T.hi_x},
           {"hi_y", &T.hi_y},     {"x_sigma", &T.x_sigma}, {"p_sigma", &T.p_sigma},
           {"x_mean_x", &T.x_mean_x}, {"x_mean_y", &T.x_mean_y},
           {"p_mean_x", &T.p_mean_x}, {"p_mean_y", &T.p_mean_y},
           {"eps", &T.eps},       {"t0", &T.t0}}) {
    tl.get(k, *p);
  }
  tl.get("samples", T.samples);

  Section sw(root, "sweep", {"tau", "tau_geom", "gamma_d", "a"});
  c.has_sweep_section = sw.present();
  if (sw.present()) {
    for (const auto& [k, v] : root.get_child("sweep")) {
      (void)v;
      std::vector<double> vals;
      if (k == "tau_geom") {
        const auto g = detail::parse_doubles(sw.key(k), *sw.raw(k));
        if (g.size() != 3 || g[2] < 2 || g[2] != std::floor(g[2])) {
          throw ConfigError("config: [sweep] tau_geom needs 'start, stop, count'");
        }
        vals = detail::geometric(g[0], g[1], static_cast<std::size_t>(g[2]));
      } else {
        vals = detail::parse_doubles(sw.key(k), *sw.raw(k));
      }
      const std::string axis = (k == "tau_geom") ? "tau" : k;
      for (const auto& a : c.axes) {
        if (a.first == axis) throw ConfigError("config: sweep axis '" + axis + "' given twice");
      }
      if (vals.empty()) throw ConfigError("config: sweep axis '" + axis + "' has no values");
      c.axes.emplace_back(axis, std::move(vals));
    }
  }
  return c;
}

/// Checks that every selected method has what it needs.
inline void validate(const ExperimentConfig& c, bool sweep) {
  if (sweep) {
    if (c.axes.empty()) throw ConfigError("sweep: no sweep axes given");
    if (c.axes.size() > 2) throw ConfigError("sweep: at most two sweep axes");
  }
  bool tau_axis = false;
  for (const auto& [name, vals] : c.axes) {
    if (name == "tau") tau_axis = true;
    for (double v : vals) {
      if (!(v > 0.0) && !(name == "gamma_d" && v == 0.0)) {
        throw ConfigError("sweep: axis '" + name + "' values must be positive");
      }
    }
  }
  const bool needs_tau = c.needs_wavefunction();
  if (needs_tau && c.taus.empty() && !(sweep && tau_axis)) {
    throw ConfigError("config: [run] tau is required for the selected methods");
  }
  for (double t : c.taus) {
    if (!(t > 0.0)) throw ConfigError("config: tau values must be > 0");
  }
  if (c.uses("timeless") && !c.seed) {
    throw ConfigError("config: [run] seed is required for Monte Carlo methods");
  }
  if (c.threads == 0) throw ConfigError("config: threads must be >= 1");
  c.phys.validate();
  if (c.needs_wavefunction()) {
    if (c.state.kind != "gaussian" && c.state.kind != "odd") {
      throw ConfigError("config: [state] kind must be gaussian or odd");
    }
    if (!(c.state.sigma > 0.0)) throw ConfigError("config: [state] sigma must be > 0");
    if (!(c.grid.half_width > 0.0)) throw ConfigError("config: [grid] half_width must be > 0");
    if (!is_power_of_two(c.grid.n)) throw ConfigError("config: [grid] n must be a power of two");
  }
  if (c.uses("detector") && c.detector_steps == 0) {
    throw ConfigError("config: [detector] steps must be > 0");
  }
  if (c.uses("cmeas") && !(c.cmeas_dt > 0.0)) throw ConfigError("config: [cmeas] dt must be > 0");
  if (c.uses("qbm") && c.qbm_stride != 1 && !is_power_of_two(c.qbm_stride)) {
    throw ConfigError("config: [qbm] stride must be a power of two");
  }
  if (c.uses("timeless")) {
    const auto& T = c.timeless;
    if (T.region != "disk" && T.region != "rectangle") {
      throw ConfigError("config: [timeless] region must be disk or rectangle");
    }
    if (T.samples < 10000) throw ConfigError("config: [timeless] samples must be >= 10000");
    if (!(T.eps > 0.0)) throw ConfigError("config: [timeless] eps must be > 0");
  }
}

// Command-line values that replace config entries before validation.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> out_dir;
};

inline ExperimentConfig load_config(const std::string& path, bool sweep,
                                    const Overrides& ov = {}) {
  if (!std::filesystem::is_regular_file(path)) {
    throw ConfigError("config: cannot read '" + path + "'");
  }
  pt::ptree root;
  try {
    pt::read_ini(path, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  auto c = parse_config(root);
  if (ov.seed) c.seed = *ov.seed;
  if (ov.threads) {
    if (*ov.threads == 0) throw ConfigError("--threads must be >= 1");
    c.threads = *ov.threads;
  }
  if (ov.out_dir) c.out_dir = *ov.out_dir;
  validate(c, sweep);
  return c;
}

// ---------------------------------------------------------------- results

struct Row {
  std::string method;
  std::optional<double> tau, p_nocross, p_cross, re_D, abs_D, gamma_d, a, mc_stderr;
  std::optional<double> wallclock;
};

inline const char* kCsvHeader =
    "method,tau,p_nocross,p_cross,re_D,abs_D,gamma_d,a,mc_stderr,wallclock";

inline std::string format_number(const std::optional<double>& v) {
  if (!v) return {};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

inline std::string csv_line(const Row& r) {
  std::string s = r.method;
  for (const auto& v :
       {r.tau, r.p_nocross, r.p_cross, r.re_D, r.abs_D, r.gamma_d, r.a, r.mc_stderr,
        r.wallclock}) {
    s += ',';
    s += format_number(v);
  }
  return s;
}

/// One parameter point: the run-level values with sweep overrides applied.
struct Point {
  std::optional<double> tau;
  std::optional<double> gamma_d;
  std::optional<double> a;
};

inline void require_finite(const Row& r) {
  for (const auto& v : {r.tau, r.p_nocross, r.p_cross, r.re_D, r.abs_D, r.mc_stderr}) {
    if (v && !std::isfinite(*v)) {
      throw NumericalError("invariant 'finite output' failed for method " + r.method);
    }
  }
}

inline WaveFunction build_state(const ExperimentConfig& c) {
  const Grid1D g = Grid1D::symmetric(c.grid.half_width, c.grid.n);
  const GaussianPacketSpec spec{c.state.x0, c.state.p0, c.state.sigma};
  return c.state.kind == "odd" ? make_odd_pair(spec, g, c.phys) : make_gaussian(spec, g, c.phys);
}

inline TimelessConfig build_timeless(const ExperimentConfig& c) {
  const auto& T = c.timeless;
  TimelessConfig tc;
  tc.sampler = gaussian_phase_sampler({T.x_mean_x, T.x_mean_y}, T.x_sigma,
                                      {T.p_mean_x, T.p_mean_y}, T.p_sigma);
  tc.eps = T.eps;
  tc.t0 = T.t0;
  tc.n_samples = T.samples;
  tc.seed = c.seed.value_or(0);
  tc.threads = c.threads;
  return tc;
}

inline RegionSpec build_region(const TimelessSection& T) {
  if (T.region == "disk") return Disk{{T.cx, T.cy}, T.radius};
  return Rectangle{{T.lo_x, T.lo_y}, {T.hi_x, T.hi_y}};
}

/// Evaluates one method at one point.
inline Row evaluate(const ExperimentConfig& c, const std::string& method, const Point& pt,
                    const WaveFunction* psi, bool timing) {
  const auto start = std::chrono::steady_clock::now();
  Row r;
  r.method = method;
  if (method == "image") {
    const auto res = crossing_decoherence(*psi, *pt.tau);
    if (std::abs(res.sum_rule_residual()) > 1e-8) {
      throw NumericalError("invariant 'sum rule p + p_bar + 2 Re D = 1' failed at tau = " +
                           format_number(pt.tau));
    }
    r.tau = pt.tau;
    r.p_nocross = res.p_nocross;
    r.p_cross = res.p_cross;
    r.re_D = res.re_D;
    r.abs_D = res.abs_D;
  } else if (method == "qbm") {
    QbmOptions o;
    o.stride_p = o.stride_x = c.qbm_stride;
    const auto q = qbm_no_cross_probability(
        *psi, FPKernelParams{c.phys.m, c.phys.D(), *pt.tau}, o);
    r.tau = pt.tau;
    r.p_nocross = q.p_nocross;
    r.p_cross = q.p_cross();
  } else if (method == "detector") {
    const double gd = pt.gamma_d.value_or(c.phys.gamma_d);
    const auto d = detection_probabilities(
        *psi, DetectorParams::for_interval(gd, *pt.tau, c.detector_steps), *pt.tau);
    r.tau = pt.tau;
    r.p_nocross = d.p_nd;
    r.p_cross = d.p_d;
    r.gamma_d = gd;
  } else if (method == "cmeas") {
    const double a = pt.a.value_or(c.phys.a());
    const auto slices = static_cast<std::size_t>(
        std::max<long long>(1, std::llround(*pt.tau / c.cmeas_dt)));
    r.tau = pt.tau;
    r.p_nocross = continuous_measurement_probability(
        *psi, MeasurementParams::for_interval(a, *pt.tau, slices), *pt.tau);
    r.a = a;
  } else if (method == "timeless") {
    const auto e = timeless_region_probability(build_timeless(c), build_region(c.timeless),
                                               c.phys.m);
    r.p_nocross = 1.0 - e.probability;
    r.p_cross = e.probability;
    r.mc_stderr = e.std_error;
  }
  require_finite(r);
  if (timing) {
    r.wallclock = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return r;
}

/// Which points each method is evaluated at. Methods ignore axes they do
/// not depend on, so each distinct point appears once per method.
inline std::vector<Point> points_for(const ExperimentConfig& c, const std::string& method,
                                     bool sweep) {
  if (method == "timeless") return {Point{}};
  std::vector<std::pair<std::string, std::vector<double>>> axes;
  if (sweep) axes = c.axes;
  bool tau_axis = false;
  for (const auto& a : axes) tau_axis = tau_axis || a.first == "tau";
  if (!tau_axis) axes.insert(axes.begin(), {"tau", c.taus});

  auto relevant = [&](const std::string& axis) {
    if (axis == "tau") return true;
    if (axis == "gamma_d") return method == "detector";
    if (axis == "a") return method == "cmeas";
    return false;
  };
  std::vector<Point> pts{Point{}};
  for (const auto& [axis, vals] : axes) {
    if (!relevant(axis)) continue;
    std::vector<Point> next;
    for (const auto& p : pts) {
      for (double v : vals) {
        Point q = p;
        if (axis == "tau") q.tau = v;
        if (axis == "gamma_d") q.gamma_d = v;
        if (axis == "a") q.a = v;
        next.push_back(q);
      }
    }
    pts = std::move(next);
  }
  return pts;
}

struct RunResult {
  std::vector<Row> rows;
};

/// Executes every (method, point) pair. Points are spread over
/// `c.threads` workers; rows come back in configuration order.
inline RunResult execute(const ExperimentConfig& c, bool sweep, bool timing) {
  std::optional<WaveFunction> psi;
  if (c.needs_wavefunction()) psi = build_state(c);

  struct Job {
    std::string method;
    Point pt;
  };
  std::vector<Job> jobs;
  for (const auto& m : c.methods) {
    for (const auto& p : points_for(c, m, sweep)) jobs.push_back({m, p});
  }

  std::vector<Row> rows(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  // timeless parallelizes internally; keep sweep workers for the rest
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        rows[i] = evaluate(c, jobs[i].method, jobs[i].pt, psi ? &*psi : nullptr, timing);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(c.threads, jobs.size()));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  RunResult res{std::move(rows)};

  // small-time scaling summary for an image-method tau sweep
  bool tau_axis = false;
  for (const auto& a : c.axes) tau_axis = tau_axis || a.first == "tau";
  if (sweep && tau_axis && c.uses("image")) {
    std::vector<double> taus;
    for (const auto& a : c.axes) {
      if (a.first == "tau") taus = a.second;
    }
    const auto fit = small_time_scaling(*psi, taus);
    Row s;
    s.method = "image_scaling_exponent";
    s.p_cross = fit.exponent_p_cross;
    s.re_D = fit.exponent_re_D;
    s.p_nocross = fit.p_nocross_at_min_tau;
    require_finite(s);
    res.rows.push_back(s);
  }
  return res;
}

inline void write_csv(const std::filesystem::path& file, const std::vector<Row>& rows) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << kCsvHeader << "\n";
  for (const auto& r : rows) out << csv_line(r) << "\n";
  if (!out) throw std::runtime_error("write failed for " + file.string());
}

/// Resolved configuration, including defaults, in a stable key order.
inline nlohmann::ordered_json config_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["methods"] = c.methods;
  j["tau"] = c.taus;
  j["seed"] = c.seed ? nlohmann::ordered_json(*c.seed) : nlohmann::ordered_json(nullptr);
  j["threads"] = c.threads;
  j["state"] = {{"kind", c.state.kind},
                {"x0", c.state.x0},
                {"p0", c.state.p0},
                {"sigma", c.state.sigma}};
  j["grid"] = {{"half_width", c.grid.half_width}, {"n", c.grid.n}};
  j["physics"] = {{"m", c.phys.m},         {"hbar", c.phys.hbar}, {"gamma", c.phys.gamma},
                  {"kT", c.phys.kT},       {"gamma_d", c.phys.gamma_d},
                  {"D", c.phys.D()},       {"a", c.phys.a()}};
  j["detector"] = {{"steps", c.detector_steps}};
  j["cmeas"] = {{"dt", c.cmeas_dt}};
  j["qbm"] = {{"stride", c.qbm_stride}};
  const auto& T = c.timeless;
  j["timeless"] = {{"region", T.region}, {"cx", T.cx},           {"cy", T.cy},
                   {"radius", T.radius}, {"lo_x", T.lo_x},       {"lo_y", T.lo_y},
                   {"hi_x", T.hi_x},     {"hi_y", T.hi_y},       {"x_sigma", T.x_sigma},
                   {"p_sigma", T.p_sigma}, {"x_mean_x", T.x_mean_x},
                   {"x_mean_y", T.x_mean_y}, {"p_mean_x", T.p_mean_x},
                   {"p_mean_y", T.p_mean_y}, {"eps", T.eps}, {"t0", T.t0},
                   {"samples", T.samples}};
  nlohmann::ordered_json axes = nlohmann::ordered_json::array();
  for (const auto& [name, vals] : c.axes) axes.push_back({{"axis", name}, {"values", vals}});
  j["sweep"] = axes;
  return j;
}

inline void write_manifest(const std::filesystem::path& file, const ExperimentConfig& c,
                           const std::string& command, const std::string& config_path,
                           std::size_t n_rows) {
  nlohmann::ordered_json j;
  j["tool"] = "crossing-times";
  j["version"] = CROSSING_VERSION;
  j["command"] = command;
  j["config_path"] = config_path;
  j["seed"] = c.seed ? nlohmann::ordered_json(*c.seed) : nlohmann::ordered_json(nullptr);
  j["csv"] = "results.csv";
  j["csv_header"] = kCsvHeader;
  j["rows"] = n_rows;
  j["config"] = config_json(c);
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << j.dump(2) << "\n";
}

}  // namespace crossing::experiment
