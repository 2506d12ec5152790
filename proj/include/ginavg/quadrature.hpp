#pragma once

#include <functional>
#include <vector>

#include "ginavg/errors.hpp"

namespace ginavg::quadrature {

struct QuadratureConfig {
  double real_cutoff = 12.0;        // truncate |alpha| <= real_cutoff
  int nodes_1d = 512;               // 32 panels x 16-point rules
  double halfplane_cutoff_x = 12.0;
  double halfplane_cutoff_y = 8.0;
  int nodes_2d_x = 256;
  int nodes_2d_y = 192;
  double target_rel_tol = 1e-8;

  void validate() const;
  QuadratureConfig halved() const;   // for a-posteriori error estimates
  QuadratureConfig doubled() const;  // for self-convergence checks

  bool operator==(const QuadratureConfig&) const = default;
};

// Gauss-Legendre rule on [-1, 1]; nodes by Newton iteration on the
// Legendre recurrence, cached per order.
class GaussLegendre {
 public:
  static const GaussLegendre& order(int k);
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  explicit GaussLegendre(int k);
  std::vector<double> nodes_, weights_;
};

// 16-point panels tiling [a, b]; node counts round up to whole panels.
struct PanelGrid {
  std::vector<double> x, w;          // flattened nodes and weights, in order
  std::vector<double> boundaries;    // panel edges, size panels + 1
  static PanelGrid build(double a, double b, int min_nodes);
};

double integrate_line(const std::function<double(double)>& f,
                      const QuadratureConfig& cfg);

// F(x) = integral of f from the left cutoff to x; F(cutoff) reproduces
// integrate_line bit for bit (same panel sums, same order).
class CumulativeIntegral {
 public:
  CumulativeIntegral(std::function<double(double)> f, const QuadratureConfig& cfg);
  double operator()(double x) const;
  double total() const { return prefix_.back(); }

 private:
  std::function<double(double)> f_;
  PanelGrid grid_;
  std::vector<double> prefix_;  // prefix_[p] = sum of panels 0..p-1
};

inline CumulativeIntegral cumulative_line(std::function<double(double)> f,
                                          const QuadratureConfig& cfg) {
  return CumulativeIntegral(std::move(f), cfg);
}

// Integral of g over [-X, X] x (0, Y] (nodes are panel-interior, so y > 0
// strictly); serves the upper-half-plane integrals after truncation.
double integrate_halfplane(const std::function<double(double, double)>& g,
                           const QuadratureConfig& cfg);

// General tensor-product box rule used by the inner-product and sampler
// modules (independent node counts allow offset grids across axes).
double integrate_box(const std::function<double(double, double)>& g, double x0,
                     double x1, double y0, double y1, int min_nodes_x,
                     int min_nodes_y);

}  // namespace ginavg::quadrature
