#include "hypext/limits.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "hypext/parallel.hpp"

namespace hypext {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("limits: ") + what);
}

SphereForm embedded_cut(const MetricFamily& fam, double theta, int k,
                        double lambda_prime, double b) {
  const double lambda = theta_reparam(lambda_prime, theta);
  const double s = lambda_prime + b;
  require(s > 0, "cut radius lambda' + b must be positive");
  require(lambda > fam.lambda0, "family parameter below lambda0");
  const RadialMetric member = fam.at(lambda);
  return join_to_sphereform(extension_normalized_cut(member, k, s));
}

// Per-offset verdict: settled below the thresholds, with the tail either
// strictly decreasing or resting at the saturation floor.
bool offset_converged(const std::vector<ScanRow>& rows, const ScanOptions& opt) {
  if (rows.empty()) return false;
  const ScanRow& last = rows.back();
  if (!(last.total() < opt.eps_c2) || !(last.d0 < opt.eps_c0)) return false;
  const int tail = std::min<int>(opt.tail, static_cast<int>(rows.size()));
  if (tail < 2) return true;
  bool decreasing = true;
  double tail_max = 0;
  for (int i = static_cast<int>(rows.size()) - tail; i + 1 < static_cast<int>(rows.size()); ++i) {
    if (!(rows[i + 1].total() < rows[i].total())) decreasing = false;
  }
  for (int i = static_cast<int>(rows.size()) - tail; i < static_cast<int>(rows.size()); ++i)
    tail_max = std::max(tail_max, rows[i].total());
  return decreasing || tail_max <= opt.saturation_floor;
}

}  // namespace

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::converged: return "converged";
    case Verdict::cauchy_only: return "cauchy-only";
    case Verdict::diverged: return "diverged";
  }
  return "unknown";
}

SphereForm predicted_limit_cut(const std::function<SphereForm(double)>& hhat_inf,
                               double theta, int k, int n, double b) {
  require(static_cast<bool>(hhat_inf), "predicted limit needs a cut-limit field");
  const double log_sin_theta = std::log(std::sin(theta));
  JoinForm jf;
  jf.k = k;
  jf.n = n;
  jf.a = [](double beta) {
    const double cb = std::cos(beta);
    return cb * cb;
  };
  jf.b_field = [hhat_inf, b, log_sin_theta](double beta) {
    const double sb = std::sin(beta);
    return scale_form(sb * sb, hhat_inf(b + std::log(sb) - log_sin_theta));
  };
  jf.c = [](double) { return 1.0; };
  return join_to_sphereform(jf);
}

ConvergenceReport convergence_scan(const MetricFamily& fam, double theta, int k,
                                   const std::vector<double>& b_grid,
                                   const std::vector<double>& lambda_prime_grid,
                                   const GridSpec& grid, const ScanOptions& options) {
  require(!b_grid.empty() && !lambda_prime_grid.empty(), "empty scan grid");
  require(fam.hyperbolic_origin_B.has_value() || options.allow_non_hyperbolic,
          "family is not hyperbolic around the origin");

  std::vector<double> bs = b_grid, lps = lambda_prime_grid;
  std::sort(bs.begin(), bs.end());
  std::sort(lps.begin(), lps.end());

  ConvergenceReport report;
  report.family = fam.name;
  report.theta = theta;
  report.k = k;
  report.n = fam.at(theta_reparam(lps.front(), theta)).n;
  report.grid = grid;
  report.options = options;

  const PointMask mask = beta_mask(k, options.mask_delta);

  std::function<SphereForm(double)> limit_of_b;
  if (fam.cut_limit) {
    report.limit_provenance = "analytic";
    limit_of_b = [&](double b) {
      return predicted_limit_cut(fam.cut_limit, theta, k, report.n, b);
    };
  } else {
    report.limit_provenance = "extrapolated";
    const double lp1 = lps[lps.size() - 1];
    const double lp2 = lps.size() > 1 ? lps[lps.size() - 2] : lps.back();
    limit_of_b = [&fam, theta, k, lp1, lp2](double b) {
      return scale_form(0.5, add_forms(embedded_cut(fam, theta, k, lp1, b),
                                       embedded_cut(fam, theta, k, lp2, b)));
    };
  }

  report.rows.resize(bs.size() * lps.size());
  parallel_for(report.rows.size(), [&](std::size_t cell) {
    const std::size_t bi = cell / lps.size();
    const std::size_t li = cell % lps.size();
    const SphereForm actual = embedded_cut(fam, theta, k, lps[li], bs[bi]);
    const SphereForm predicted = limit_of_b(bs[bi]);
    const C2Distance d = c2_distance(actual, predicted, grid, mask);
    report.rows[cell] = ScanRow{lps[li], std::nullopt, bs[bi], d.d0, d.d1, d.d2};
  });

  bool all_ok = true;
  for (std::size_t bi = 0; bi < bs.size(); ++bi) {
    std::vector<ScanRow> per_b(report.rows.begin() + bi * lps.size(),
                               report.rows.begin() + (bi + 1) * lps.size());
    all_ok = all_ok && offset_converged(per_b, options);
  }
  report.verdict = all_ok ? Verdict::converged : Verdict::diverged;
  return report;
}

ConvergenceReport cauchy_scan(const MetricFamily& fam, double theta, int k,
                              const std::vector<double>& b_grid,
                              const std::vector<std::pair<double, double>>& lambda_pairs,
                              const GridSpec& grid, const ScanOptions& options) {
  require(!b_grid.empty() && !lambda_pairs.empty(), "empty scan grid");
  require(fam.hyperbolic_origin_B.has_value() || options.allow_non_hyperbolic,
          "family is not hyperbolic around the origin");

  std::vector<double> bs = b_grid;
  std::sort(bs.begin(), bs.end());

  ConvergenceReport report;
  report.family = fam.name;
  report.theta = theta;
  report.k = k;
  report.n = fam.at(theta_reparam(lambda_pairs.front().first, theta)).n;
  report.grid = grid;
  report.options = options;

  const PointMask mask = beta_mask(k, options.mask_delta);

  report.rows.resize(bs.size() * lambda_pairs.size());
  parallel_for(report.rows.size(), [&](std::size_t cell) {
    const std::size_t bi = cell / lambda_pairs.size();
    const std::size_t pi = cell % lambda_pairs.size();
    const auto [lp1, lp2] = lambda_pairs[pi];
    const SphereForm f1 = embedded_cut(fam, theta, k, lp1, bs[bi]);
    const SphereForm f2 = embedded_cut(fam, theta, k, lp2, bs[bi]);
    const C2Distance d = c2_distance(f1, f2, grid, mask);
    report.rows[cell] = ScanRow{lp1, lp2, bs[bi], d.d0, d.d1, d.d2};
  });

  bool all_ok = true;
  for (std::size_t bi = 0; bi < bs.size(); ++bi) {
    std::vector<ScanRow> per_b(report.rows.begin() + bi * lambda_pairs.size(),
                               report.rows.begin() + (bi + 1) * lambda_pairs.size());
    all_ok = all_ok && offset_converged(per_b, options);
  }
  report.verdict = all_ok ? Verdict::cauchy_only : Verdict::diverged;
  return report;
}

Beta1Result beta1_threshold(double B, double c, double c_prime, double theta) {
  require(theta > 0 && theta <= kHalfPi, "theta must lie in (0, pi/2]");
  const double log_sin_theta = std::log(std::sin(theta));
  require(c_prime < c + log_sin_theta, "requires c' < c + log(sin(theta))");

  std::vector<double> sweep;
  for (double lp = 2.0; lp <= 60.0 + 1e-9; lp += 0.25) sweep.push_back(lp);

  // Smallest sweep value from which the bound holds through the end, or
  // nothing. The asymptotic bound c' + log(sin(beta)/sin(theta)) <= B must
  // hold as well, otherwise any finite onset is spurious.
  auto onset_for = [&](double beta) -> std::optional<double> {
    if (beta > 0 && c_prime + std::log(std::sin(beta)) - log_sin_theta > B - 1e-9)
      return std::nullopt;
    std::optional<double> onset;
    for (auto it = sweep.rbegin(); it != sweep.rend(); ++it) {
      const double lp = *it;
      const double hyp = lp + c_prime;
      const bool ok = hyp > 0 &&
                      leg_opposite(hyp, beta) <= theta_reparam(lp, theta) + B;
      if (!ok) break;
      onset = lp;
    }
    return onset;
  };

  double lo = 0.0, hi = kHalfPi;
  if (auto top = onset_for(hi)) return Beta1Result{hi, *top};
  require(onset_for(lo).has_value(), "bound fails even at beta = 0");
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (onset_for(mid))
      lo = mid;
    else
      hi = mid;
  }
  if (lo < 1e-6)
    throw std::runtime_error("limits: no positive beta1 found at resolution 1e-6");
  return Beta1Result{lo, *onset_for(lo)};
}

BoundaryReport boundary_checks(const MetricFamily& fam, double theta, int k, double b,
                               double lambda_prime, double margin,
                               const std::vector<double>& deltas, const GridSpec& grid) {
  const double lambda = theta_reparam(lambda_prime, theta);
  const double s = lambda_prime + b;
  require(s > 0, "boundary radius lambda' + b must be positive");
  require(lambda > fam.lambda0, "family parameter below lambda0");

  BoundaryReport report;

  // Fiber-sphere side. The k-block coefficient comes out of the triangle
  // machinery at angle pi/2, where the fiber leg equals the radius.
  const double r_boundary = leg_opposite(s, kHalfPi);
  const double ch = std::cosh(r_boundary), sh = std::sinh(s);
  report.coefficient = (ch / sh) * (ch / sh);
  const double ct = 1.0 / std::tanh(s);
  report.coefficient_error = std::abs(report.coefficient - ct * ct);
  report.coefficient_gap = std::abs(ct * ct - 1.0);

  const RadialMetric member = fam.at(lambda);
  const SphereForm fiber = member.normalized_cut(s);
  const Atlas& atlas_n = fiber.atlas();
  const int n = atlas_n.ambient_dim();
  double min_eig = std::numeric_limits<double>::infinity();
  for (const Chart& c : atlas_n.charts())
    for (const Vec& y : chart_lattice(atlas_n, c, grid)) {
      const Mat F = fiber.eval(c, y);
      Mat block = Mat::Zero(k + n - 1, k + n - 1);
      block.topLeftCorner(k, k) = report.coefficient * Mat::Identity(k, k);
      block.bottomRightCorner(n - 1, n - 1) = F;
      Eigen::SelfAdjointEigenSolver<Mat> es(block);
      min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    }
  report.min_eig_fiber = min_eig;

  // Axis side: the embedded limit on shrinking rings around the k-sphere.
  require(static_cast<bool>(fam.cut_limit), "axis boundary check needs an analytic cut limit");
  const SphereForm limit = predicted_limit_cut(fam.cut_limit, theta, k, n, b);
  const Atlas& atlas_m = limit.atlas();
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> normal;
  for (double delta : deltas) {
    double ring_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 64; ++i) {
      Vec w(k), u(n);
      do
        for (int j = 0; j < k; ++j) w[j] = normal(rng);
      while (w.norm() < 1e-6);
      do
        for (int j = 0; j < n; ++j) u[j] = normal(rng);
      while (u.norm() < 1e-6);
      Vec X(k + n);
      X.head(k) = std::cos(delta) * w / w.norm();
      X.tail(n) = std::sin(delta) * u / u.norm();
      const Chart& c = atlas_m.best_chart(X);
      Eigen::SelfAdjointEigenSolver<Mat> es(limit.eval(c, atlas_m.project(c, X)));
      ring_min = std::min(ring_min, es.eigenvalues().minCoeff());
    }
    report.axis_eigs.emplace_back(delta, ring_min);
  }

  bool axis_ok = true;
  for (const auto& [delta, eig] : report.axis_eigs) axis_ok = axis_ok && eig >= margin;
  report.ok = report.min_eig_fiber >= margin && axis_ok && report.coefficient_error <= 1e-6;
  return report;
}

double measure_transition_offset(const MetricFamily& fam, double theta, int k,
                                 double lambda_prime, double beta, double amp,
                                 double b_lo, double b_hi) {
  const double lambda = theta_reparam(lambda_prime, theta);
  const RadialMetric member = fam.at(lambda);
  const Atlas& atlas_n = *shared_atlas(member.n);
  const Vec origin = Vec::Zero(member.n - 1);
  const double sb2 = std::sin(beta) * std::sin(beta);

  // Mean diagonal deviation from the round block at the chart center, in
  // units of amp: recovers the profile value chi.
  auto chi_at = [&](double b) {
    const double s = lambda_prime + b;
    const JoinForm jf = extension_normalized_cut(member, k, s);
    const Mat M = jf.b_field(beta).eval(atlas_n.chart(0), origin);
    return (M.trace() / (member.n - 1) / sb2 - 1.0) / amp;
  };

  double lo = b_lo, hi = b_hi;
  const double f_lo = chi_at(lo) - 0.5, f_hi = chi_at(hi) - 0.5;
  require(f_lo < 0 && f_hi > 0, "transition bracket does not straddle the midpoint");
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    ((chi_at(mid) - 0.5 < 0) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace hypext
