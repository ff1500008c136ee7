#include "hypext/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

namespace hypext {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr double kHalfPi = std::numbers::pi / 2;

void check(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw ConfigError(path, message);
}

template <typename T>
T field_or(const json& j, const std::string& key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

const std::set<std::string> kCommands = {"verify-identities", "cut", "extend-cut",
                                         "converge", "cauchy", "beta1", "boundary"};
const std::set<std::string> kFamilies = {"hyperbolic", "euclidean", "bump", "oscillating"};

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> RangeSpec::values() const {
  std::vector<double> out;
  for (double v = min; v <= max + step * 0.5; v += step) out.push_back(v);
  return out;
}

ordered_json config_to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["command"] = c.command;
  j["family"] = {{"name", c.family.name},
                 {"B", c.family.bump.B},
                 {"amp", c.family.bump.amp},
                 {"L", c.family.bump.L}};
  j["dims"] = {{"n", c.n}, {"k", c.k}};
  j["theta"] = c.theta;
  j["grids"] = {
      {"b", {{"min", c.b_grid.min}, {"max", c.b_grid.max}, {"step", c.b_grid.step}}},
      {"lambda_prime",
       {{"min", c.lambda_grid.min}, {"max", c.lambda_grid.max}, {"step", c.lambda_grid.step}}},
      {"sphere",
       {{"per_axis", c.sphere_grid.per_axis},
        {"cap_per_chart", c.sphere_grid.cap_per_chart},
        {"fd_step", c.sphere_grid.fd_step},
        {"radius", c.sphere_grid.radius}}},
      {"mask_delta", c.mask_delta}};
  j["thresholds"] = {{"eps_c2", c.eps_c2},
                     {"eps_c0", c.eps_c0},
                     {"saturation_floor", c.saturation_floor}};
  j["cut"] = {{"lambda", c.cut_lambda}, {"radius", c.cut_radius}, {"normalized", c.cut_normalized}};
  j["extend"] = {{"s", c.extend_s}};
  j["beta1"] = {{"B", c.beta1_B}, {"c", c.beta1_c}, {"c_prime", c.beta1_c_prime}};
  j["boundary"] = {{"b", c.boundary_b},
                   {"lambda_prime", c.boundary_lambda_prime},
                   {"margin", c.boundary_margin},
                   {"deltas", c.boundary_deltas}};
  j["output"] = {{"dir", c.out_dir}};
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  try {
    c.command = field_or<std::string>(j, "command", c.command);
    if (j.contains("family")) {
      const json& f = j.at("family");
      c.family.name = field_or<std::string>(f, "name", c.family.name);
      c.family.bump.B = field_or<double>(f, "B", c.family.bump.B);
      c.family.bump.amp = field_or<double>(f, "amp", c.family.bump.amp);
      c.family.bump.L = field_or<double>(f, "L", c.family.bump.L);
    }
    if (j.contains("dims")) {
      c.n = field_or<int>(j.at("dims"), "n", c.n);
      c.k = field_or<int>(j.at("dims"), "k", c.k);
    }
    c.theta = field_or<double>(j, "theta", c.theta);
    if (j.contains("grids")) {
      const json& g = j.at("grids");
      auto range = [](const json& r, RangeSpec base) {
        base.min = field_or<double>(r, "min", base.min);
        base.max = field_or<double>(r, "max", base.max);
        base.step = field_or<double>(r, "step", base.step);
        return base;
      };
      if (g.contains("b")) c.b_grid = range(g.at("b"), c.b_grid);
      if (g.contains("lambda_prime")) c.lambda_grid = range(g.at("lambda_prime"), c.lambda_grid);
      if (g.contains("sphere")) {
        const json& s = g.at("sphere");
        c.sphere_grid.per_axis = field_or<int>(s, "per_axis", c.sphere_grid.per_axis);
        c.sphere_grid.cap_per_chart =
            field_or<int>(s, "cap_per_chart", c.sphere_grid.cap_per_chart);
        c.sphere_grid.fd_step = field_or<double>(s, "fd_step", c.sphere_grid.fd_step);
        c.sphere_grid.radius = field_or<double>(s, "radius", c.sphere_grid.radius);
      }
      c.mask_delta = field_or<double>(g, "mask_delta", c.mask_delta);
    }
    if (j.contains("thresholds")) {
      const json& t = j.at("thresholds");
      c.eps_c2 = field_or<double>(t, "eps_c2", c.eps_c2);
      c.eps_c0 = field_or<double>(t, "eps_c0", c.eps_c0);
      c.saturation_floor = field_or<double>(t, "saturation_floor", c.saturation_floor);
    }
    if (j.contains("cut")) {
      const json& t = j.at("cut");
      c.cut_lambda = field_or<double>(t, "lambda", c.cut_lambda);
      c.cut_radius = field_or<double>(t, "radius", c.cut_radius);
      c.cut_normalized = field_or<bool>(t, "normalized", c.cut_normalized);
    }
    if (j.contains("extend")) c.extend_s = field_or<double>(j.at("extend"), "s", c.extend_s);
    if (j.contains("beta1")) {
      const json& t = j.at("beta1");
      c.beta1_B = field_or<double>(t, "B", c.beta1_B);
      c.beta1_c = field_or<double>(t, "c", c.beta1_c);
      c.beta1_c_prime = field_or<double>(t, "c_prime", c.beta1_c_prime);
    }
    if (j.contains("boundary")) {
      const json& t = j.at("boundary");
      c.boundary_b = field_or<double>(t, "b", c.boundary_b);
      c.boundary_lambda_prime = field_or<double>(t, "lambda_prime", c.boundary_lambda_prime);
      c.boundary_margin = field_or<double>(t, "margin", c.boundary_margin);
      c.boundary_deltas =
          field_or<std::vector<double>>(t, "deltas", c.boundary_deltas);
    }
    if (j.contains("output"))
      c.out_dir = field_or<std::string>(j.at("output"), "dir", c.out_dir);
  } catch (const json::exception& e) {
    throw ConfigError("<json>", e.what());
  }

  check(kCommands.count(c.command) > 0, "command", "unknown command '" + c.command + "'");
  check(kFamilies.count(c.family.name) > 0, "family.name",
        "unknown family '" + c.family.name + "'");
  check(c.family.bump.amp > 0, "family.amp", "must be positive");
  check(c.family.bump.L > 0, "family.L", "must be positive");
  check(c.n >= 2, "dims.n", "must be >= 2");
  check(c.k >= 1, "dims.k", "must be >= 1");
  check(c.n + c.k <= 6, "dims", "desk cap n + k <= 6 exceeded");
  check(c.theta > 0 && c.theta <= kHalfPi, "theta", "must lie in (0, pi/2]");
  check(c.b_grid.step > 0, "grids.b.step", "must be positive");
  check(c.b_grid.min <= c.b_grid.max, "grids.b", "min exceeds max");
  check(c.lambda_grid.step > 0, "grids.lambda_prime.step", "must be positive");
  check(c.lambda_grid.min <= c.lambda_grid.max, "grids.lambda_prime", "min exceeds max");
  check(c.lambda_grid.min > 0, "grids.lambda_prime.min", "must be positive");
  check(c.sphere_grid.per_axis >= 2, "grids.sphere.per_axis", "must be >= 2");
  check(c.sphere_grid.cap_per_chart >= 4, "grids.sphere.cap_per_chart", "must be >= 4");
  check(c.sphere_grid.fd_step > 0, "grids.sphere.fd_step", "must be positive");
  check(c.sphere_grid.radius > 0 && c.sphere_grid.radius <= kChartRadius,
        "grids.sphere.radius", "must lie in (0, chart radius]");
  check(c.mask_delta > 0 && c.mask_delta < 0.7, "grids.mask_delta",
        "must lie in (0, 0.7)");
  check(c.eps_c2 > 0, "thresholds.eps_c2", "must be positive");
  check(c.eps_c0 > 0, "thresholds.eps_c0", "must be positive");
  check(c.saturation_floor >= 0, "thresholds.saturation_floor", "must be >= 0");
  check(c.cut_radius > 0, "cut.radius", "must be positive");
  check(c.extend_s > 0, "extend.s", "must be positive");
  check(c.boundary_margin > 0, "boundary.margin", "must be positive");
  for (double d : c.boundary_deltas)
    check(d > 0 && d < kHalfPi, "boundary.deltas", "entries must lie in (0, pi/2)");
  check(!c.out_dir.empty(), "output.dir", "must not be empty");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("<file>", e.what());
  }
  return config_from_json(j);
}

namespace {

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
      : out_(path) {
    if (!out_) throw ConfigError("output.dir", "cannot write " + path.string());
    for (std::size_t i = 0; i < columns.size(); ++i)
      out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

std::string fd(double v) { return format_double(v); }

void write_summary(const ExperimentConfig& cfg, ordered_json metrics, bool ok,
                   int exit_code) {
  ordered_json j;
  j["command"] = cfg.command;
  j["verdict_ok"] = ok;
  j["exit_code"] = exit_code;
  j["metrics"] = std::move(metrics);
  j["config"] = config_to_json(cfg);
  std::ofstream out(std::filesystem::path(cfg.out_dir) / (cfg.command + "_summary.json"));
  out << j.dump(2) << "\n";
}

MetricFamily make_family(const ExperimentConfig& cfg) {
  return family_by_name(cfg.family.name, cfg.n, cfg.family.bump);
}

ScanOptions scan_options(const ExperimentConfig& cfg) {
  ScanOptions opt;
  opt.eps_c2 = cfg.eps_c2;
  opt.eps_c0 = cfg.eps_c0;
  opt.saturation_floor = cfg.saturation_floor;
  opt.mask_delta = cfg.mask_delta;
  return opt;
}

std::vector<std::string> form_columns(int d) {
  std::vector<std::string> cols{"chart"};
  for (int i = 0; i < d; ++i) cols.push_back("x" + std::to_string(i));
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
      cols.push_back("g" + std::to_string(i) + std::to_string(j));
  return cols;
}

void write_form_csv(const SphereForm& form, const GridSpec& grid, const PointMask& mask,
                    const std::filesystem::path& path) {
  const Atlas& atlas = form.atlas();
  const int d = atlas.dim();
  CsvWriter csv(path, form_columns(d));
  for (const Chart& c : atlas.charts())
    for (const Vec& x : chart_lattice(atlas, c, grid)) {
      if (mask && !mask(atlas.embed(c, x))) continue;
      const Mat M = form.eval(c, x);
      std::vector<std::string> cells{std::to_string(c.id)};
      for (int i = 0; i < d; ++i) cells.push_back(fd(x[i]));
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) cells.push_back(fd(M(i, j)));
      csv.row(cells);
    }
}

int run_cut(const ExperimentConfig& cfg) {
  const MetricFamily fam = make_family(cfg);
  const RadialMetric member = fam.at(cfg.cut_lambda);
  const SphereForm form = cfg.cut_normalized ? member.normalized_cut(cfg.cut_radius)
                                             : member.cut(cfg.cut_radius);
  write_form_csv(form, cfg.sphere_grid, {}, std::filesystem::path(cfg.out_dir) / "cut.csv");
  ordered_json metrics;
  metrics["lambda"] = cfg.cut_lambda;
  metrics["radius"] = cfg.cut_radius;
  metrics["normalized"] = cfg.cut_normalized;
  write_summary(cfg, std::move(metrics), true, 0);
  return 0;
}

int run_extend_cut(const ExperimentConfig& cfg) {
  const MetricFamily fam = make_family(cfg);
  const RadialMetric member = fam.at(cfg.cut_lambda);
  const SphereForm form =
      cfg.cut_normalized
          ? join_to_sphereform(extension_normalized_cut(member, cfg.k, cfg.extend_s))
          : join_to_sphereform(extension_cut(member, cfg.k, cfg.extend_s));
  write_form_csv(form, cfg.sphere_grid, beta_mask(cfg.k, cfg.mask_delta),
                 std::filesystem::path(cfg.out_dir) / "extend-cut.csv");
  ordered_json metrics;
  metrics["lambda"] = cfg.cut_lambda;
  metrics["s"] = cfg.extend_s;
  metrics["normalized"] = cfg.cut_normalized;
  write_summary(cfg, std::move(metrics), true, 0);
  return 0;
}

void write_scan_csv(const ConvergenceReport& report, const std::filesystem::path& path) {
  const bool cauchy = !report.rows.empty() && report.rows.front().lambda_prime_2.has_value();
  std::vector<std::string> cols =
      cauchy ? std::vector<std::string>{"lambda_prime_1", "lambda_prime_2", "b", "d0", "d1", "d2"}
             : std::vector<std::string>{"lambda_prime", "b", "d0", "d1", "d2"};
  CsvWriter csv(path, cols);
  for (const ScanRow& r : report.rows) {
    std::vector<std::string> cells{fd(r.lambda_prime)};
    if (cauchy) cells.push_back(fd(*r.lambda_prime_2));
    cells.push_back(fd(r.b));
    cells.push_back(fd(r.d0));
    cells.push_back(fd(r.d1));
    cells.push_back(fd(r.d2));
    csv.row(cells);
  }
}

ordered_json scan_metrics(const ConvergenceReport& report) {
  ordered_json m;
  m["verdict"] = verdict_name(report.verdict);
  m["limit_provenance"] = report.limit_provenance;
  m["rows"] = report.rows.size();
  double final_max = 0;
  for (const ScanRow& r : report.rows)
    if (r.lambda_prime == report.rows.back().lambda_prime)
      final_max = std::max(final_max, r.total());
  m["final_distance_max"] = final_max;
  return m;
}

int run_converge(const ExperimentConfig& cfg) {
  const MetricFamily fam = make_family(cfg);
  const ConvergenceReport report =
      convergence_scan(fam, cfg.theta, cfg.k, cfg.b_grid.values(), cfg.lambda_grid.values(),
                       cfg.sphere_grid, scan_options(cfg));
  write_scan_csv(report, std::filesystem::path(cfg.out_dir) / "converge.csv");
  const bool ok = report.verdict == Verdict::converged;
  write_summary(cfg, scan_metrics(report), ok, ok ? 0 : 2);
  return ok ? 0 : 2;
}

int run_cauchy(const ExperimentConfig& cfg) {
  const MetricFamily fam = make_family(cfg);
  const std::vector<double> lps = cfg.lambda_grid.values();
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i + 1 < lps.size(); ++i) pairs.emplace_back(lps[i], lps[i + 1]);
  ScanOptions opt = scan_options(cfg);
  opt.allow_non_hyperbolic = true;  // negative controls run through here
  const ConvergenceReport report =
      cauchy_scan(fam, cfg.theta, cfg.k, cfg.b_grid.values(), pairs, cfg.sphere_grid, opt);
  write_scan_csv(report, std::filesystem::path(cfg.out_dir) / "cauchy.csv");
  const bool ok = report.verdict == Verdict::cauchy_only;
  write_summary(cfg, scan_metrics(report), ok, ok ? 0 : 2);
  return ok ? 0 : 2;
}

int run_beta1(const ExperimentConfig& cfg) {
  ordered_json metrics;
  try {
    const Beta1Result res =
        beta1_threshold(cfg.beta1_B, cfg.beta1_c, cfg.beta1_c_prime, cfg.theta);
    metrics["beta1"] = res.beta1;
    metrics["onset"] = res.onset;
    write_summary(cfg, std::move(metrics), true, 0);
    return 0;
  } catch (const std::runtime_error& e) {
    metrics["error"] = e.what();
    write_summary(cfg, std::move(metrics), false, 2);
    return 2;
  }
}

int run_boundary(const ExperimentConfig& cfg) {
  const MetricFamily fam = make_family(cfg);
  const BoundaryReport report =
      boundary_checks(fam, cfg.theta, cfg.k, cfg.boundary_b, cfg.boundary_lambda_prime,
                      cfg.boundary_margin, cfg.boundary_deltas, cfg.sphere_grid);
  CsvWriter csv(std::filesystem::path(cfg.out_dir) / "boundary.csv",
                {"check", "param", "value"});
  csv.row({"coefficient", fd(cfg.boundary_lambda_prime), fd(report.coefficient)});
  csv.row({"coefficient_error", fd(cfg.boundary_lambda_prime), fd(report.coefficient_error)});
  csv.row({"coefficient_gap", fd(cfg.boundary_lambda_prime), fd(report.coefficient_gap)});
  csv.row({"min_eig_fiber", fd(cfg.boundary_b), fd(report.min_eig_fiber)});
  for (const auto& [delta, eig] : report.axis_eigs)
    csv.row({"min_eig_axis", fd(delta), fd(eig)});
  ordered_json metrics;
  metrics["coefficient"] = report.coefficient;
  metrics["coefficient_error"] = report.coefficient_error;
  metrics["min_eig_fiber"] = report.min_eig_fiber;
  write_summary(cfg, std::move(metrics), report.ok, report.ok ? 0 : 2);
  return report.ok ? 0 : 2;
}

struct Suite {
  std::string name;
  std::string what;
  double value;
  double bound;
  bool above = false;  // pass when value > bound instead of value < bound
  bool pass() const { return above ? value > bound : value < bound; }
};

int run_verify_identities(const ExperimentConfig& cfg) {
  std::vector<Suite> suites;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> leg(1e-3, 5.0);

  double tri1 = 0, tri2 = 0, tri3 = 0;
  for (int i = 0; i < 10000; ++i) {
    const RightTriangle tr = build_right_triangle(leg(rng), leg(rng));
    tri1 = std::max(tri1, std::abs(std::sinh(tr.r) - std::sin(tr.beta) * std::sinh(tr.s)));
    tri2 = std::max(tri2, std::abs(std::cosh(tr.r) * std::sinh(tr.t) -
                                   std::cos(tr.beta) * std::sinh(tr.s)));
    tri3 = std::max(tri3, std::abs(std::cosh(tr.s) - std::cosh(tr.r) * std::cosh(tr.t)));
  }
  suites.push_back({"triangle-closure", "law-of-sines", tri1, 1e-9});
  suites.push_back({"triangle-closure", "adjacent-leg", tri2, 1e-9});
  suites.push_back({"triangle-closure", "pythagoras", tri3, 1e-9});

  std::uniform_real_distribution<double> fermi_leg(1e-2, 2.5);
  double fermi = 0;
  for (int i = 0; i < 1000; ++i)
    fermi = std::max(fermi, fermi_polar_residual(fermi_leg(rng), fermi_leg(rng), 1e-4));
  suites.push_back({"fermi-polar", "residual", fermi, 1e-6});

  std::vector<std::pair<double, double>> join_samples;
  for (double s : {0.8, 1.6, 2.4, 3.0})
    for (double beta : {0.15, 0.5, 0.9, 1.3})
      join_samples.emplace_back(s, beta);
  suites.push_back(
      {"fermi-polar-join", "residual", fermi_polar_residual_join(join_samples, 1e-4), 1e-6});

  double rt_beta = 0, rt_lambda = 0;
  for (int i = 0; i <= 40; ++i) {
    const double s = 0.1 + (40.0 - 0.1) * i / 40.0;
    for (int j = 0; j <= 200; ++j) {
      const double beta = kHalfPi * j / 200.0;
      rt_beta = std::max(rt_beta, std::abs(angle_opposite(leg_opposite(s, beta), s) - beta));
    }
    for (int j = 1; j <= 40; ++j) {
      const double theta = 0.1 + (kHalfPi - 0.1) * j / 40.0;
      rt_lambda = std::max(
          rt_lambda, std::abs(theta_reparam_inv(theta_reparam(s, theta), theta) - s));
    }
  }
  suites.push_back({"round-trips", "angle", rt_beta, 1e-10});
  suites.push_back({"round-trips", "reparam", rt_lambda, 1e-10});

  double offset_dev = 0;
  for (double lambda : {30.0, 40.0, 60.0})
    for (double theta : {std::numbers::pi / 6, std::numbers::pi / 4, kHalfPi})
      for (double beta : {0.2, 0.7, 1.2, kHalfPi})
        for (double b : {-5.0, -2.0, 0.0, 3.0, 5.0}) {
          ReparamParams p;
          p.theta = theta;
          p.b = b;
          const double predicted = b + std::log(std::sin(beta) / std::sin(theta));
          offset_dev = std::max(
              offset_dev, std::abs(reparam_cut_radius(lambda, beta, p) - lambda - predicted));
        }
  suites.push_back({"asymptotic-offset", "deviation", offset_dev, 1e-6});

  double overflow_dev = 0;
  for (double a : {100.0, 400.0, 700.0}) {
    overflow_dev = std::max(overflow_dev,
                            std::abs(leg_opposite(a, 0.3) - (a + std::log(std::sin(0.3)))));
    overflow_dev = std::max(
        overflow_dev, std::abs(theta_reparam_inv(theta_reparam(a, 0.5), 0.5) - a) / a);
  }
  suites.push_back({"overflow-safety", "log-form", overflow_dev, 1e-9});

  double mono_margin = std::numeric_limits<double>::infinity();
  for (double s = 0.2; s <= 39.0; s += 1.3)
    for (double beta = 0.1; beta < kHalfPi - 0.11; beta += 0.15) {
      mono_margin = std::min(mono_margin, leg_opposite(s + 0.1, beta) - leg_opposite(s, beta));
      mono_margin = std::min(mono_margin, leg_opposite(s, beta + 0.1) - leg_opposite(s, beta));
    }
  suites.push_back({"monotonicity", "strict-margin", mono_margin, 0.0, true});

  CsvWriter csv(std::filesystem::path(cfg.out_dir) / "verify-identities.csv",
                {"suite", "case", "value", "bound", "pass"});
  bool all = true;
  ordered_json metrics;
  for (const Suite& s : suites) {
    csv.row({s.name, s.what, fd(s.value), fd(s.bound), s.pass() ? "1" : "0"});
    metrics[s.name + "/" + s.what] = s.value;
    all = all && s.pass();
  }
  write_summary(cfg, std::move(metrics), all, all ? 0 : 2);
  return all ? 0 : 2;
}

}  // namespace

int run(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  if (cfg.command == "verify-identities") return run_verify_identities(cfg);
  if (cfg.command == "cut") return run_cut(cfg);
  if (cfg.command == "extend-cut") return run_extend_cut(cfg);
  if (cfg.command == "converge") return run_converge(cfg);
  if (cfg.command == "cauchy") return run_cauchy(cfg);
  if (cfg.command == "beta1") return run_beta1(cfg);
  if (cfg.command == "boundary") return run_boundary(cfg);
  throw ConfigError("command", "unknown command '" + cfg.command + "'");
}

}  // namespace hypext
