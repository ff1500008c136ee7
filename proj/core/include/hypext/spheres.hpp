#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

// Fixed chart atlases on spheres, fields of symmetric bilinear forms stored
// per chart, and the grid sup-norm used as the C^0/C^1/C^2 distance between
// two such fields.

namespace hypext {

// Ambient dimensions stay at desk scale, so vectors and component matrices
// are dynamic-size but stack-allocated up to 8.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;

// One orthographic hemispherical chart of S^{m-1}: the open ball of radius
// `radius` in R^{m-1}, mapped to the sphere by filling ambient slot `axis`
// with sign * sqrt(1 - |x|^2) and the remaining slots with x in order.
struct Chart {
  int id = 0;
  int axis = 0;
  double sign = 1.0;
  double radius = 0.0;
};

// Chart domain radius. Covering S^{m-1} with the 2m hemispherical charts
// needs radius > sqrt(1 - 1/m), which is 0.913 at m = 6; 0.93 keeps the
// charts extendable (closure inside the open hemisphere) with a margin.
inline constexpr double kChartRadius = 0.93;

// Fixed atlas of the 2m orthographic charts on S^{m-1}. Deterministic:
// chart 2a has axis a with sign +1, chart 2a+1 has sign -1.
class Atlas {
 public:
  explicit Atlas(int ambient_dim);

  int ambient_dim() const { return m_; }
  int dim() const { return m_ - 1; }  // chart coordinate dimension
  const std::vector<Chart>& charts() const { return charts_; }
  const Chart& chart(int id) const { return charts_.at(id); }

  Vec embed(const Chart& c, const Vec& x) const;           // R^{m-1} -> S^{m-1}
  Mat embed_jacobian(const Chart& c, const Vec& x) const;  // m x (m-1)
  Vec project(const Chart& c, const Vec& X) const;         // chart coords of X
  bool contains(const Chart& c, const Vec& X) const;       // open-domain test
  const Chart& best_chart(const Vec& X) const;  // largest |X[axis]|, matching sign

  // Chart components of an ambient tangent vector at a point of chart c.
  // The chart coordinates are ambient coordinates, so this drops slot `axis`.
  Vec tangent_coords(const Chart& c, const Vec& V) const;

 private:
  int m_;
  std::vector<Chart> charts_;
};

Atlas make_atlas(int ambient_dim);
std::shared_ptr<const Atlas> shared_atlas(int ambient_dim);

// Chart-to-chart transition y = coords_b(embed_a(x)). Throws
// std::domain_error if the image lies outside chart b's domain.
Vec transition(const Atlas& atlas, int a, int b, const Vec& x);
Mat transition_jacobian(const Atlas& atlas, int a, int b, const Vec& x);

// A field of symmetric bilinear forms on S^{m-1}: one (m-1)x(m-1) component
// matrix per chart point. On overlaps the components must be related by the
// Jacobian congruence of the transition map.
class SphereForm {
 public:
  using Eval = std::function<Mat(const Chart&, const Vec&)>;

  SphereForm() = default;
  SphereForm(std::shared_ptr<const Atlas> atlas, Eval eval);

  const Atlas& atlas() const { return *atlas_; }
  const std::shared_ptr<const Atlas>& atlas_ptr() const { return atlas_; }

  Mat eval(const Chart& c, const Vec& x) const { return eval_(c, x); }
  Mat eval(int chart_id, const Vec& x) const;

  // Form value on ambient tangent vectors at a sphere point (best chart).
  double eval_tangents(const Vec& X, const Vec& V, const Vec& W) const;

  explicit operator bool() const { return static_cast<bool>(eval_); }

 private:
  std::shared_ptr<const Atlas> atlas_;
  Eval eval_;
};

SphereForm scale_form(double c, const SphereForm& f);
SphereForm add_forms(const SphereForm& a, const SphereForm& b);

// Round metric of S^{m-1}: delta_ij + x_i x_j / (1 - |x|^2) in chart
// coordinates (the orthographic pullback of the Euclidean metric).
SphereForm round_metric(int ambient_dim);

// Fixed smooth non-round symmetric field: restriction to the sphere of the
// ambient tensor X0 <V, W> + (X1 / 2)(V0 W1 + V1 W0). Its pointwise norm
// against the round metric stays below 1.2, so round + 0.1 * this is
// positive definite with a wide margin.
SphereForm perturbation_field(int ambient_dim);

// Sampling spec for chart-grid sup norms: a per-axis lattice restricted to
// the ball of the given radius, and the step of the chart-coordinate central
// differences.
struct GridSpec {
  int per_axis = 17;
  int cap_per_chart = 2500;  // lattice size cap; shrinks per_axis in high dim
  double fd_step = 1e-3;
  double radius = 0.92;

  int effective_per_axis(int dim) const;
  bool operator==(const GridSpec&) const = default;
};

struct C2Distance {
  double d0 = 0, d1 = 0, d2 = 0;
  double total() const { return d0 + d1 + d2; }
};

// Optional grid filter; receives the ambient sphere point of a lattice node.
using PointMask = std::function<bool(const Vec& X)>;

// Sup over charts and lattice points of the component differences of a - b
// (d0) and of their first/second central chart-coordinate differences
// (d1, d2). `orders` limits the computation: 0 gives d0 only, 1 adds d1.
// Throws std::invalid_argument on mismatched atlases.
C2Distance c2_distance(const SphereForm& a, const SphereForm& b,
                       const GridSpec& grid, const PointMask& mask = {},
                       int orders = 2);

// Lattice of a single chart (deterministic order).
std::vector<Vec> chart_lattice(const Atlas& atlas, const Chart& c, const GridSpec& grid);

// Max congruence residual |F_a(x) - J^T F_b(y) J| of a form between two
// charts, over `samples` seeded random points of the overlap.
double overlap_residual(const SphereForm& f, int a, int b, int samples, unsigned seed);

}  // namespace hypext
