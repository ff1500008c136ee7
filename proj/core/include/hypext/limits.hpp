#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hypext/extension.hpp"
#include "hypext/hyptrig.hpp"
#include "hypext/radial.hpp"

// Cut-limit diagnostics for reparametrized extension families: convergence
// scans against a predicted limit, Cauchy scans, the small-angle uniformity
// threshold, and positive-definiteness checks at the singular boundary.

namespace hypext {

enum class Verdict { converged, cauchy_only, diverged };

std::string verdict_name(Verdict v);

// Thresholds of the scan verdicts. A parameter offset b passes when its
// final distance is below eps_c2 (total) and eps_c0 (components) and the
// last `tail` distances either decrease strictly or sit at the saturation
// floor, which absorbs rounding noise once a family has converged to the
// grid's precision.
struct ScanOptions {
  double eps_c2 = 1e-3;
  double eps_c0 = 1e-5;
  double saturation_floor = 1e-5;
  int tail = 3;
  double mask_delta = 0.05;
  bool allow_non_hyperbolic = false;
};

struct ScanRow {
  double lambda_prime = 0;                 // scan parameter (first of a pair)
  std::optional<double> lambda_prime_2;    // second parameter of a Cauchy pair
  double b = 0;
  double d0 = 0, d1 = 0, d2 = 0;
  double total() const { return d0 + d1 + d2; }
};

struct ConvergenceReport {
  std::string family;
  double theta = 0;
  int k = 0, n = 0;
  GridSpec grid;
  ScanOptions options;
  Verdict verdict = Verdict::diverged;
  std::string limit_provenance;  // "analytic", "extrapolated" or ""
  std::vector<ScanRow> rows;     // sorted by (b, lambda_prime)
};

// Embedded predicted limit at offset b: the join form with round k-block,
// fiber block sin^2(beta) * hhat_inf(b + log(sin(beta)/sin(theta))), and
// unit dbeta^2 coefficient.
SphereForm predicted_limit_cut(const std::function<SphereForm(double)>& hhat_inf,
                               double theta, int k, int n, double b);

// Distances between the normalized cuts of the reparametrized extension
// family at radius lambda' + b and the predicted limit, over the (b,
// lambda') grid. The family must be hyperbolic around the origin (or the
// override set) and provide an analytic cut limit; without one the limit
// candidate is extrapolated as the mean of the cuts at the two largest
// lambda' values.
ConvergenceReport convergence_scan(const MetricFamily& fam, double theta, int k,
                                   const std::vector<double>& b_grid,
                                   const std::vector<double>& lambda_prime_grid,
                                   const GridSpec& grid, const ScanOptions& options = {});

// Pairwise distances between normalized cuts of the same family at two
// lambda' values and equal offset. Verdict cauchy_only when the pair
// distances settle below the thresholds for every b, diverged otherwise.
ConvergenceReport cauchy_scan(const MetricFamily& fam, double theta, int k,
                              const std::vector<double>& b_grid,
                              const std::vector<std::pair<double, double>>& lambda_pairs,
                              const GridSpec& grid, const ScanOptions& options = {});

struct Beta1Result {
  double beta1 = 0;   // largest angle passing the sweep, bisection step 1e-6
  double onset = 0;   // smallest sweep lambda' from which the bound holds
};

// Largest angle beta1 such that leg_opposite(lambda' + c', beta1) stays
// below theta_reparam(lambda') + B for every lambda' from a detected onset
// through 60, verified also in the lambda' -> inf limit. Requires
// c' < c + log(sin(theta)); throws std::runtime_error when no positive
// angle passes at the bisection resolution.
Beta1Result beta1_threshold(double B, double c, double c_prime, double theta);

struct BoundaryReport {
  double coefficient = 0;        // assembled coth^2 factor of the k-block
  double coefficient_error = 0;  // disagreement with the closed form
  double coefficient_gap = 0;    // distance of the coefficient from 1
  double min_eig_fiber = 0;      // assembled block over the fiber sphere
  std::vector<std::pair<double, double>> axis_eigs;  // (delta, min eigenvalue)
  bool ok = false;
};

// Positive-definiteness checks at the two boundary spheres. Fiber side:
// the block coth^2(lambda' + b) I_k (+) normalized cut of the member at
// lambda' + b must have min eigenvalue >= margin and coefficient near 1.
// Axis side: the embedded limit evaluated on rings beta = delta for the
// given deltas must stay uniformly positive definite.
BoundaryReport boundary_checks(const MetricFamily& fam, double theta, int k, double b,
                               double lambda_prime, double margin = 0.5,
                               const std::vector<double>& deltas = {0.2, 0.1, 0.05, 0.025},
                               const GridSpec& grid = {});

// Offset at which the fiber block of the assembled normalized cut crosses
// the midpoint of its transition profile, located by bisection in b at fixed
// beta. For a family with profile plateau at B + L/2 the measured value
// satisfies b* + log(sin(beta)/sin(theta)) = B + L/2 up to the finite-
// lambda' reparametrization error.
double measure_transition_offset(const MetricFamily& fam, double theta, int k,
                                 double lambda_prime, double beta, double amp,
                                 double b_lo, double b_hi);

}  // namespace hypext
