#include "ginavg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace ginavg::quadrature {

namespace {

constexpr int kPanelPoints = 16;

double checked(double v) {
  if (!std::isfinite(v))
    throw numerical_error("quadrature: non-finite integrand sample");
  return v;
}

}  // namespace

void QuadratureConfig::validate() const {
  if (real_cutoff < 8.0)
    throw std::invalid_argument("quadrature: real_cutoff must be >= 8");
  if (halfplane_cutoff_x <= 0.0 || halfplane_cutoff_y <= 0.0)
    throw std::invalid_argument("quadrature: halfplane cutoffs must be positive");
  if (nodes_1d < 64 || nodes_2d_x < 64 || nodes_2d_y < 64)
    throw std::invalid_argument("quadrature: node counts must be >= 64");
  if (!(target_rel_tol > 0.0) || target_rel_tol > 1e-3)
    throw std::invalid_argument("quadrature: target_rel_tol must be in (0, 1e-3]");
}

QuadratureConfig QuadratureConfig::halved() const {
  QuadratureConfig c = *this;
  c.nodes_1d = std::max(64, nodes_1d / 2);
  c.nodes_2d_x = std::max(64, nodes_2d_x / 2);
  c.nodes_2d_y = std::max(64, nodes_2d_y / 2);
  return c;
}

QuadratureConfig QuadratureConfig::doubled() const {
  QuadratureConfig c = *this;
  c.nodes_1d *= 2;
  c.nodes_2d_x *= 2;
  c.nodes_2d_y *= 2;
  return c;
}

GaussLegendre::GaussLegendre(int k) : nodes_(k), weights_(k) {
  // Roots of the Legendre polynomial P_k, Newton iteration from the
  // Chebyshev angle guess; symmetric pairs share a weight.
  for (int i = 0; i < (k + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int ell = 2; ell <= k; ++ell) {
        const double p2 = ((2 * ell - 1) * x * p1 - (ell - 1) * p0) / ell;
        p0 = p1;
        p1 = p2;
      }
      dp = k * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    // one final evaluation of P'_k at the converged root
    {
      double p0 = 1.0, p1 = x;
      for (int ell = 2; ell <= k; ++ell) {
        const double p2 = ((2 * ell - 1) * x * p1 - (ell - 1) * p0) / ell;
        p0 = p1;
        p1 = p2;
      }
      dp = k * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes_[i] = -x;  // ascending order: leftmost root first
    nodes_[k - 1 - i] = x;
    weights_[i] = w;
    weights_[k - 1 - i] = w;
  }
  if (k % 2 == 1) {
    // the middle node of an odd rule sits at 0; recompute its weight
    double p0 = 1.0, p1 = 0.0;
    double x = 0.0;
    for (int ell = 2; ell <= k; ++ell) {
      const double p2 = ((2 * ell - 1) * x * p1 - (ell - 1) * p0) / ell;
      p0 = p1;
      p1 = p2;
    }
    const double dp = k * (x * p1 - p0) / (x * x - 1.0);
    nodes_[k / 2] = 0.0;
    weights_[k / 2] = 2.0 / (dp * dp);
  }
}

const GaussLegendre& GaussLegendre::order(int k) {
  if (k < 1) throw std::invalid_argument("GaussLegendre: order must be >= 1");
  static std::map<int, GaussLegendre> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, GaussLegendre(k)).first;
  return it->second;
}

PanelGrid PanelGrid::build(double a, double b, int min_nodes) {
  if (!(b > a)) throw std::invalid_argument("PanelGrid: need b > a");
  if (min_nodes < 1) throw std::invalid_argument("PanelGrid: need nodes >= 1");
  const int panels = (min_nodes + kPanelPoints - 1) / kPanelPoints;
  const GaussLegendre& rule = GaussLegendre::order(kPanelPoints);
  PanelGrid g;
  g.boundaries.resize(panels + 1);
  g.x.reserve(size_t(panels) * kPanelPoints);
  g.w.reserve(size_t(panels) * kPanelPoints);
  const double h = (b - a) / panels;
  for (int p = 0; p <= panels; ++p) g.boundaries[p] = a + p * h;
  g.boundaries[panels] = b;
  for (int p = 0; p < panels; ++p) {
    const double lo = g.boundaries[p], hi = g.boundaries[p + 1];
    const double mid = (lo + hi) / 2.0, half = (hi - lo) / 2.0;
    for (int i = 0; i < kPanelPoints; ++i) {
      g.x.push_back(mid + half * rule.nodes()[i]);
      g.w.push_back(half * rule.weights()[i]);
    }
  }
  return g;
}

double integrate_line(const std::function<double(double)>& f,
                      const QuadratureConfig& cfg) {
  cfg.validate();
  return CumulativeIntegral(f, cfg).total();
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f,
                                       const QuadratureConfig& cfg)
    : f_(std::move(f)) {
  cfg.validate();
  grid_ = PanelGrid::build(-cfg.real_cutoff, cfg.real_cutoff, cfg.nodes_1d);
  const int panels = static_cast<int>(grid_.boundaries.size()) - 1;
  prefix_.assign(panels + 1, 0.0);
  size_t idx = 0;
  for (int p = 0; p < panels; ++p) {
    double sum = 0.0;
    for (int i = 0; i < kPanelPoints; ++i, ++idx)
      sum += grid_.w[idx] * checked(f_(grid_.x[idx]));
    prefix_[p + 1] = prefix_[p] + sum;
  }
}

double CumulativeIntegral::operator()(double x) const {
  if (x <= grid_.boundaries.front()) return 0.0;
  if (x >= grid_.boundaries.back()) return total();
  const auto it = std::upper_bound(grid_.boundaries.begin(),
                                   grid_.boundaries.end(), x);
  const int p = static_cast<int>(it - grid_.boundaries.begin()) - 1;
  const double lo = grid_.boundaries[p];
  // partial panel [lo, x] with a fresh 16-point rule
  const GaussLegendre& rule = GaussLegendre::order(kPanelPoints);
  const double mid = (lo + x) / 2.0, half = (x - lo) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < kPanelPoints; ++i)
    sum += half * rule.weights()[i] * checked(f_(mid + half * rule.nodes()[i]));
  return prefix_[p] + sum;
}

double integrate_box(const std::function<double(double, double)>& g, double x0,
                     double x1, double y0, double y1, int min_nodes_x,
                     int min_nodes_y) {
  const PanelGrid gx = PanelGrid::build(x0, x1, min_nodes_x);
  const PanelGrid gy = PanelGrid::build(y0, y1, min_nodes_y);
  // fixed traversal order: y-major, per-row partial sums
  double total = 0.0;
  for (size_t j = 0; j < gy.x.size(); ++j) {
    double row = 0.0;
    for (size_t i = 0; i < gx.x.size(); ++i)
      row += gx.w[i] * checked(g(gx.x[i], gy.x[j]));
    total += gy.w[j] * row;
  }
  return total;
}

double integrate_halfplane(const std::function<double(double, double)>& g,
                           const QuadratureConfig& cfg) {
  cfg.validate();
  return integrate_box(g, -cfg.halfplane_cutoff_x, cfg.halfplane_cutoff_x, 0.0,
                       cfg.halfplane_cutoff_y, cfg.nodes_2d_x, cfg.nodes_2d_y);
}

}  // namespace ginavg::quadrature
