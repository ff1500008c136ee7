#include "hypext/spheres.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>

#include "hypext/parallel.hpp"

namespace hypext {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(std::string("spheres: ") + what);
}

}  // namespace

Atlas::Atlas(int ambient_dim) : m_(ambient_dim) {
  require(ambient_dim >= 2, "atlas requires ambient dimension >= 2");
  require(ambient_dim <= 8, "atlas capped at ambient dimension 8");
  charts_.reserve(2 * m_);
  for (int a = 0; a < m_; ++a)
    for (double sign : {1.0, -1.0})
      charts_.push_back(Chart{static_cast<int>(charts_.size()), a, sign, kChartRadius});
}

Vec Atlas::embed(const Chart& c, const Vec& x) const {
  require(x.size() == dim(), "chart point has wrong dimension");
  const double n2 = x.squaredNorm();
  require(n2 < 1.0, "chart point outside the unit ball");
  Vec X(m_);
  for (int i = 0, j = 0; i < m_; ++i)
    X[i] = (i == c.axis) ? c.sign * std::sqrt(1.0 - n2) : x[j++];
  return X;
}

Mat Atlas::embed_jacobian(const Chart& c, const Vec& x) const {
  const double n2 = x.squaredNorm();
  require(n2 < 1.0, "chart point outside the unit ball");
  const double q = std::sqrt(1.0 - n2);
  Mat J = Mat::Zero(m_, dim());
  for (int i = 0, j = 0; i < m_; ++i) {
    if (i == c.axis) {
      for (int l = 0; l < dim(); ++l) J(i, l) = -c.sign * x[l] / q;
    } else {
      J(i, j++) = 1.0;
    }
  }
  return J;
}

Vec Atlas::project(const Chart& c, const Vec& X) const {
  require(X.size() == m_, "ambient point has wrong dimension");
  Vec x(dim());
  for (int i = 0, j = 0; i < m_; ++i)
    if (i != c.axis) x[j++] = X[i];
  return x;
}

bool Atlas::contains(const Chart& c, const Vec& X) const {
  if (c.sign * X[c.axis] <= 0.0) return false;
  return project(c, X).norm() < c.radius;
}

const Chart& Atlas::best_chart(const Vec& X) const {
  int axis = 0;
  for (int i = 1; i < m_; ++i)
    if (std::abs(X[i]) > std::abs(X[axis])) axis = i;
  return charts_[2 * axis + (X[axis] >= 0 ? 0 : 1)];
}

Vec Atlas::tangent_coords(const Chart& c, const Vec& V) const { return project(c, V); }

Atlas make_atlas(int ambient_dim) { return Atlas(ambient_dim); }

std::shared_ptr<const Atlas> shared_atlas(int ambient_dim) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const Atlas>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[ambient_dim];
  if (!slot) slot = std::make_shared<Atlas>(ambient_dim);
  return slot;
}

Vec transition(const Atlas& atlas, int a, int b, const Vec& x) {
  const Vec X = atlas.embed(atlas.chart(a), x);
  const Chart& cb = atlas.chart(b);
  require(cb.sign * X[cb.axis] > 0.0, "transition image outside the target hemisphere");
  Vec y = atlas.project(cb, X);
  require(y.norm() < cb.radius, "transition image outside the target chart");
  return y;
}

Mat Atlas_transition_jacobian(const Atlas& atlas, int a, int b, const Vec& x) {
  const Mat J = atlas.embed_jacobian(atlas.chart(a), x);
  const Chart& cb = atlas.chart(b);
  Mat T(atlas.dim(), atlas.dim());
  for (int i = 0, j = 0; i < atlas.ambient_dim(); ++i)
    if (i != cb.axis) T.row(j++) = J.row(i);
  return T;
}

Mat transition_jacobian(const Atlas& atlas, int a, int b, const Vec& x) {
  return Atlas_transition_jacobian(atlas, a, b, x);
}

SphereForm::SphereForm(std::shared_ptr<const Atlas> atlas, Eval eval)
    : atlas_(std::move(atlas)), eval_(std::move(eval)) {}

Mat SphereForm::eval(int chart_id, const Vec& x) const {
  return eval_(atlas_->chart(chart_id), x);
}

double SphereForm::eval_tangents(const Vec& X, const Vec& V, const Vec& W) const {
  const Chart& c = atlas_->best_chart(X);
  const Mat M = eval_(c, atlas_->project(c, X));
  const Vec v = atlas_->tangent_coords(c, V);
  const Vec w = atlas_->tangent_coords(c, W);
  return v.dot(M * w);
}

SphereForm scale_form(double c, const SphereForm& f) {
  return SphereForm(f.atlas_ptr(), [c, f](const Chart& ch, const Vec& x) -> Mat {
    return c * f.eval(ch, x);
  });
}

SphereForm add_forms(const SphereForm& a, const SphereForm& b) {
  if (a.atlas().ambient_dim() != b.atlas().ambient_dim())
    throw std::invalid_argument("spheres: add_forms on mismatched atlases");
  return SphereForm(a.atlas_ptr(), [a, b](const Chart& ch, const Vec& x) -> Mat {
    return a.eval(ch, x) + b.eval(ch, x);
  });
}

SphereForm round_metric(int ambient_dim) {
  auto atlas = shared_atlas(ambient_dim);
  const int d = ambient_dim - 1;
  return SphereForm(atlas, [d](const Chart&, const Vec& x) -> Mat {
    Mat M = Mat::Identity(d, d);
    M += x * x.transpose() / (1.0 - x.squaredNorm());
    return M;
  });
}

SphereForm perturbation_field(int ambient_dim) {
  auto atlas = shared_atlas(ambient_dim);
  const int m = ambient_dim;
  return SphereForm(atlas, [atlas, m](const Chart& c, const Vec& x) -> Mat {
    const Vec X = atlas->embed(c, x);
    Mat amb = X[0] * Mat::Identity(m, m);
    amb(0, 1) += 0.5 * X[1];
    amb(1, 0) += 0.5 * X[1];
    const Mat J = atlas->embed_jacobian(c, x);
    return J.transpose() * amb * J;
  });
}

int GridSpec::effective_per_axis(int dim) const {
  int p = std::max(2, per_axis);
  auto count = [dim](int q) {
    double total = 1;
    for (int i = 0; i < dim; ++i) total *= q;
    return total;
  };
  while (p > 2 && count(p) > static_cast<double>(cap_per_chart)) --p;
  return p;
}

std::vector<Vec> chart_lattice(const Atlas& atlas, const Chart&, const GridSpec& grid) {
  const int d = atlas.dim();
  const int p = grid.effective_per_axis(d);
  std::vector<double> axis(p);
  for (int i = 0; i < p; ++i)
    axis[i] = -grid.radius + 2.0 * grid.radius * i / (p - 1);

  std::vector<Vec> points;
  std::vector<int> idx(d, 0);
  Vec x(d);
  while (true) {
    for (int j = 0; j < d; ++j) x[j] = axis[idx[j]];
    if (x.norm() <= grid.radius + 1e-12) points.push_back(x);
    int j = 0;
    while (j < d && ++idx[j] == p) idx[j++] = 0;
    if (j == d) break;
  }
  return points;
}

C2Distance c2_distance(const SphereForm& a, const SphereForm& b,
                       const GridSpec& grid, const PointMask& mask, int orders) {
  if (a.atlas().ambient_dim() != b.atlas().ambient_dim())
    throw std::invalid_argument("spheres: c2_distance on mismatched atlases");
  const Atlas& atlas = a.atlas();
  const int d = atlas.dim();
  const double h = grid.fd_step;

  struct Task {
    const Chart* chart;
    Vec x;
  };
  std::vector<Task> tasks;
  for (const Chart& c : atlas.charts())
    for (const Vec& x : chart_lattice(atlas, c, grid)) {
      if (mask && !mask(atlas.embed(c, x))) continue;
      tasks.push_back(Task{&c, x});
    }

  std::vector<C2Distance> local(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t ti) {
    const Chart& c = *tasks[ti].chart;
    const Vec& x = tasks[ti].x;
    auto diff = [&](const Vec& y) -> Mat { return a.eval(c, y) - b.eval(c, y); };

    C2Distance out;
    const Mat D0 = diff(x);
    out.d0 = D0.cwiseAbs().maxCoeff();
    if (orders >= 1) {
      std::vector<Mat> Dp(d), Dm(d);
      Vec y = x;
      for (int i = 0; i < d; ++i) {
        y[i] = x[i] + h;
        Dp[i] = diff(y);
        y[i] = x[i] - h;
        Dm[i] = diff(y);
        y[i] = x[i];
        out.d1 = std::max(out.d1, ((Dp[i] - Dm[i]) / (2 * h)).cwiseAbs().maxCoeff());
      }
      if (orders >= 2) {
        for (int i = 0; i < d; ++i)
          out.d2 = std::max(out.d2,
                            ((Dp[i] - 2 * D0 + Dm[i]) / (h * h)).cwiseAbs().maxCoeff());
        for (int i = 0; i < d; ++i)
          for (int j = i + 1; j < d; ++j) {
            Vec z = x;
            z[i] = x[i] + h; z[j] = x[j] + h; const Mat App = diff(z);
            z[j] = x[j] - h; const Mat Apm = diff(z);
            z[i] = x[i] - h; const Mat Amm = diff(z);
            z[j] = x[j] + h; const Mat Amp = diff(z);
            out.d2 = std::max(out.d2,
                              ((App - Apm - Amp + Amm) / (4 * h * h)).cwiseAbs().maxCoeff());
          }
      }
    }
    local[ti] = out;
  });

  C2Distance total;
  for (const C2Distance& v : local) {
    total.d0 = std::max(total.d0, v.d0);
    total.d1 = std::max(total.d1, v.d1);
    total.d2 = std::max(total.d2, v.d2);
  }
  return total;
}

double overlap_residual(const SphereForm& f, int a, int b, int samples, unsigned seed) {
  const Atlas& atlas = f.atlas();
  const Chart& ca = atlas.chart(a);
  const Chart& cb = atlas.chart(b);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-ca.radius, ca.radius);

  double worst = 0.0;
  int found = 0, attempts = 0;
  while (found < samples && attempts < 200 * samples) {
    ++attempts;
    Vec x(atlas.dim());
    for (int i = 0; i < x.size(); ++i) x[i] = unif(rng);
    if (x.norm() >= ca.radius) continue;
    const Vec X = atlas.embed(ca, x);
    if (!atlas.contains(cb, X)) continue;
    ++found;
    const Vec y = atlas.project(cb, X);
    const Mat T = transition_jacobian(atlas, a, b, x);
    const Mat lhs = f.eval(ca, x);
    const Mat rhs = T.transpose() * f.eval(cb, y) * T;
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace hypext
