#include "ginavg/inner.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "ginavg/errors.hpp"

namespace ginavg::inner {

using weights::cd;
using weights::WeightPhi;
using quadrature::CumulativeIntegral;
using quadrature::PanelGrid;
using quadrature::integrate_box;
using quadrature::integrate_halfplane;
using quadrature::integrate_line;

namespace {

void require_polynomial_psi(const PsiSpec& psi, const char* who) {
  if (!psi.polynomial_type()) {
    throw std::invalid_argument(std::string(who) +
                                ": weight kind 'modsq' has no single-point "
                                "evaluation; it is accepted by the GinUE "
                                "inner product only");
  }
}

void require_real_coeffs(const MonicPolynomial& p, const char* who) {
  if (!p.is_conjugate_symmetric()) {
    throw std::invalid_argument(
        std::string(who) + ": polynomial coefficients must be real");
  }
}

std::vector<double> real_coeffs(const MonicPolynomial& p) {
  std::vector<double> c(static_cast<size_t>(p.degree()) + 1);
  for (int k = 0; k <= p.degree(); ++k) c[static_cast<size_t>(k)] = p.coeff(k).real();
  return c;
}

// Im(conj(a) * b) without the intermediate complex product, so that b == a
// cancels exactly (re*im - im*re is a bitwise zero without fp contraction).
double im_conj_prod(cd a, cd b) {
  return a.real() * b.imag() - a.imag() * b.real();
}

double skew_real_once(const MonicPolynomial& p, const MonicPolynomial& q,
                      const WeightPhi& phi, const QuadratureConfig& cfg) {
  auto fp = [&](double x) { return phi.real_line(x) * p.eval_real(x); };
  auto fq = [&](double x) { return phi.real_line(x) * q.eval_real(x); };
  CumulativeIntegral cum_p(fp, cfg);
  CumulativeIntegral cum_q(fq, cfg);
  const double tot_p = cum_p.total();
  const double tot_q = cum_q.total();
  // i1 = <P,Q>, i2 = <Q,P>; averaging the two makes the swap identity and
  // the zero diagonal exact, since i1 and i2 run identical arithmetic.
  const double i1 = integrate_line(
      [&](double x) { return fq(x) * (2.0 * cum_p(x) - tot_p); }, cfg);
  const double i2 = integrate_line(
      [&](double x) { return fp(x) * (2.0 * cum_q(x) - tot_q); }, cfg);
  return 0.5 * (i1 - i2);
}

double skew_complex_once(const MonicPolynomial& p, const MonicPolynomial& q,
                         const WeightPhi& phi, const QuadratureConfig& cfg) {
  auto g = [&](double x, double y) {
    const cd beta(x, y);
    return im_conj_prod(std::conj(p.eval(std::conj(beta))), q.eval(beta)) *
           phi.pair_product(beta);
  };
  return 4.0 * integrate_halfplane(g, cfg);
}

int scaled_nodes(int base, double ratio) {
  const int scaled = static_cast<int>(std::ceil(base * ratio));
  return std::max(base, scaled);
}

double sum_grid(const PanelGrid& grid, const std::function<double(double)>& f) {
  double acc = 0.0;
  for (size_t i = 0; i < grid.x.size(); ++i) acc += grid.w[i] * f(grid.x[i]);
  return acc;
}

}  // namespace

InnerProductValue skew_real(const MonicPolynomial& p, const MonicPolynomial& q,
                            const PsiSpec& psi, const QuadratureConfig& cfg) {
  cfg.validate();
  require_polynomial_psi(psi, "skew_real");
  require_real_coeffs(p, "skew_real");
  require_real_coeffs(q, "skew_real");
  const WeightPhi phi(psi);
  const double fine = skew_real_once(p, q, phi, cfg);
  const double coarse = skew_real_once(p, q, phi, cfg.halved());
  return {fine, std::abs(fine - coarse)};
}

InnerProductValue skew_complex(const MonicPolynomial& p,
                               const MonicPolynomial& q, const PsiSpec& psi,
                               const QuadratureConfig& cfg) {
  cfg.validate();
  require_polynomial_psi(psi, "skew_complex");
  require_real_coeffs(p, "skew_complex");
  require_real_coeffs(q, "skew_complex");
  const WeightPhi phi(psi);
  const double fine = skew_complex_once(p, q, phi, cfg);
  const double coarse = skew_complex_once(p, q, phi, cfg.halved());
  return {fine, std::abs(fine - coarse)};
}

InnerProductValue skew_sum(const MonicPolynomial& p, const MonicPolynomial& q,
                           const PsiSpec& psi, const QuadratureConfig& cfg) {
  const InnerProductValue r = skew_real(p, q, psi, cfg);
  const InnerProductValue c = skew_complex(p, q, psi, cfg);
  return {r.value + c.value, r.est_error + c.est_error};
}

double one_sided_moment(const MonicPolynomial& p, const PsiSpec& psi,
                        const QuadratureConfig& cfg) {
  cfg.validate();
  require_polynomial_psi(psi, "one_sided_moment");
  require_real_coeffs(p, "one_sided_moment");
  const WeightPhi phi(psi);
  return integrate_line(
      [&](double x) { return phi.real_line(x) * p.eval_real(x); }, cfg);
}

double ginue_inner(const MonicPolynomial& p, const MonicPolynomial& q,
                   const PsiSpec& psi, const QuadratureConfig& cfg) {
  cfg.validate();
  require_real_coeffs(p, "ginue_inner");
  require_real_coeffs(q, "ginue_inner");
  const double r = cfg.real_cutoff;
  const int nx = scaled_nodes(cfg.nodes_2d_x, r / cfg.halfplane_cutoff_x);
  const int ny = scaled_nodes(cfg.nodes_2d_y, r / cfg.halfplane_cutoff_y);
  // Integrand values at (x, -y) are conjugate to those at (x, y), so twice
  // the real part over the upper half recovers the plane integral.
  auto f = [&](double x, double y) {
    const cd gamma(x, y);
    const cd val = std::exp(-0.5 * (x * x + y * y)) * psi.eval(gamma) *
                   std::conj(p.eval(gamma)) * q.eval(gamma);
    return val.real();
  };
  return 2.0 * integrate_box(f, -r, r, 0.0, r, nx, ny);
}

double skew_real_reference(const MonicPolynomial& p, const MonicPolynomial& q,
                           const PsiSpec& psi, const QuadratureConfig& cfg) {
  cfg.validate();
  require_polynomial_psi(psi, "skew_real_reference");
  require_real_coeffs(p, "skew_real_reference");
  require_real_coeffs(q, "skew_real_reference");
  const WeightPhi phi(psi);
  const double r = cfg.real_cutoff;
  auto fp = [&](double x) { return phi.real_line(x) * p.eval_real(x); };
  auto fq = [&](double x) { return phi.real_line(x) * q.eval_real(x); };
  // Iterated form of the double integral against sgn(a2 - a1): the inner
  // integral is split at a2, where the kernel changes sign, so every panel
  // sees a smooth integrand.
  const PanelGrid outer = PanelGrid::build(-r, r, cfg.nodes_1d);
  double acc = 0.0;
  for (size_t i = 0; i < outer.x.size(); ++i) {
    const double a2 = outer.x[i];
    const double frac = (a2 + r) / (2.0 * r);
    const int n_left =
        std::max(64, static_cast<int>(std::ceil(cfg.nodes_1d * frac)));
    const int n_right =
        std::max(64, static_cast<int>(std::ceil(cfg.nodes_1d * (1.0 - frac))));
    const double below = sum_grid(PanelGrid::build(-r, a2, n_left), fp);
    const double above = sum_grid(PanelGrid::build(a2, r, n_right), fp);
    acc += outer.w[i] * fq(a2) * (below - above);
  }
  if (!std::isfinite(acc)) {
    throw numerical_error("skew_real_reference: non-finite accumulation");
  }
  return acc;
}

double skew_complex_reference(const MonicPolynomial& p,
                              const MonicPolynomial& q, const PsiSpec& psi,
                              const QuadratureConfig& cfg) {
  cfg.validate();
  require_polynomial_psi(psi, "skew_complex_reference");
  require_real_coeffs(p, "skew_complex_reference");
  require_real_coeffs(q, "skew_complex_reference");
  const WeightPhi phi(psi);
  // Full-plane definition with two independent phi evaluations; their
  // opposite phase factors must cancel for the value to come out real.
  auto term = [&](cd beta, double sign_im) {
    return sign_im * phi.eval(beta) * phi.eval(std::conj(beta)) *
           p.eval(std::conj(beta)) * q.eval(beta);
  };
  const PanelGrid gx =
      PanelGrid::build(-cfg.halfplane_cutoff_x, cfg.halfplane_cutoff_x,
                       cfg.nodes_2d_x);
  const PanelGrid upper =
      PanelGrid::build(0.0, cfg.halfplane_cutoff_y, cfg.nodes_2d_y);
  const PanelGrid lower =
      PanelGrid::build(-cfg.halfplane_cutoff_y, 0.0, cfg.nodes_2d_y);
  cd acc = 0.0;
  for (size_t iy = 0; iy < upper.x.size(); ++iy) {
    cd row = 0.0;
    for (size_t ix = 0; ix < gx.x.size(); ++ix) {
      row += gx.w[ix] * term(cd(gx.x[ix], upper.x[iy]), 1.0);
    }
    acc += upper.w[iy] * row;
  }
  for (size_t iy = 0; iy < lower.x.size(); ++iy) {
    cd row = 0.0;
    for (size_t ix = 0; ix < gx.x.size(); ++ix) {
      row += gx.w[ix] * term(cd(gx.x[ix], lower.x[iy]), -1.0);
    }
    acc += lower.w[iy] * row;
  }
  const cd value = cd(0.0, -2.0) * acc;
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw numerical_error("skew_complex_reference: non-finite accumulation");
  }
  if (std::abs(value.imag()) > 1e-8 * std::max(1.0, std::abs(value.real()))) {
    throw numerical_error(
        "skew_complex_reference: value failed to come out real");
  }
  return value.real();
}

size_t GinoeMomentTable::idx(int a, int b) const {
  if (a < 0 || b < 0 || a >= n_ || b >= n_) {
    throw std::invalid_argument("GinoeMomentTable: power out of range");
  }
  return static_cast<size_t>(a) * static_cast<size_t>(n_) +
         static_cast<size_t>(b);
}

GinoeMomentTable GinoeMomentTable::build(int n, const PsiSpec& psi,
                                         const QuadratureConfig& cfg) {
  cfg.validate();
  require_polynomial_psi(psi, "GinoeMomentTable");
  if (n < 1) throw std::invalid_argument("GinoeMomentTable: n must be >= 1");
  const WeightPhi phi(psi);
  GinoeMomentTable table(n);
  table.m_.resize(static_cast<size_t>(n));
  table.r_.assign(static_cast<size_t>(n) * static_cast<size_t>(n), 0.0);
  table.c_.assign(static_cast<size_t>(n) * static_cast<size_t>(n), 0.0);

  for (int a = 0; a < n; ++a) {
    table.m_[static_cast<size_t>(a)] = integrate_line(
        [&](double x) { return phi.real_line(x) * std::pow(x, a); }, cfg);
  }

  // One cumulative per power; G[a][b] = int fq_b (2 F_a - T_a) reuses the
  // prefix sums across all b instead of integrating n^2 pairs from scratch.
  const double r = cfg.real_cutoff;
  const PanelGrid grid = PanelGrid::build(-r, r, cfg.nodes_1d);
  const size_t m = grid.x.size();
  std::vector<double> fv(m);
  std::vector<std::vector<double>> pw(m, std::vector<double>(static_cast<size_t>(n)));
  for (size_t i = 0; i < m; ++i) {
    fv[i] = phi.real_line(grid.x[i]);
    double px = 1.0;
    for (int a = 0; a < n; ++a) {
      pw[i][static_cast<size_t>(a)] = px;
      px *= grid.x[i];
    }
  }
  std::vector<std::vector<double>> big_g(
      static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n)));
  for (int a = 0; a < n; ++a) {
    CumulativeIntegral cum(
        [&, a](double x) { return phi.real_line(x) * std::pow(x, a); }, cfg);
    const double tot = cum.total();
    std::vector<double> centered(m);
    for (size_t i = 0; i < m; ++i) centered[i] = 2.0 * cum(grid.x[i]) - tot;
    for (int b = 0; b < n; ++b) {
      double acc = 0.0;
      for (size_t i = 0; i < m; ++i) {
        acc += grid.w[i] * fv[i] * pw[i][static_cast<size_t>(b)] * centered[i];
      }
      big_g[static_cast<size_t>(a)][static_cast<size_t>(b)] = acc;
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double v = 0.5 * (big_g[static_cast<size_t>(a)][static_cast<size_t>(b)] -
                              big_g[static_cast<size_t>(b)][static_cast<size_t>(a)]);
      table.r_[table.idx(a, b)] = v;
      table.r_[table.idx(b, a)] = -v;
    }
  }

  // Upper-half-plane pass shared by every power pair.
  const PanelGrid gx = PanelGrid::build(-cfg.halfplane_cutoff_x,
                                        cfg.halfplane_cutoff_x, cfg.nodes_2d_x);
  const PanelGrid gy =
      PanelGrid::build(0.0, cfg.halfplane_cutoff_y, cfg.nodes_2d_y);
  std::vector<cd> zpow(static_cast<size_t>(n));
  for (size_t iy = 0; iy < gy.x.size(); ++iy) {
    for (size_t ix = 0; ix < gx.x.size(); ++ix) {
      const cd beta(gx.x[ix], gy.x[iy]);
      const double wq = gx.w[ix] * gy.w[iy] * phi.pair_product(beta);
      cd zp = 1.0;
      for (int a = 0; a < n; ++a) {
        zpow[static_cast<size_t>(a)] = zp;
        zp *= beta;
      }
      for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
          table.c_[table.idx(a, b)] +=
              wq * im_conj_prod(zpow[static_cast<size_t>(a)],
                                zpow[static_cast<size_t>(b)]);
        }
      }
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double v = 4.0 * table.c_[table.idx(a, b)];
      table.c_[table.idx(a, b)] = v;
      table.c_[table.idx(b, a)] = -v;
    }
  }

  for (double v : table.m_) {
    if (!std::isfinite(v)) throw numerical_error("GinoeMomentTable: non-finite moment");
  }
  for (double v : table.r_) {
    if (!std::isfinite(v)) throw numerical_error("GinoeMomentTable: non-finite entry");
  }
  for (double v : table.c_) {
    if (!std::isfinite(v)) throw numerical_error("GinoeMomentTable: non-finite entry");
  }
  return table;
}

double GinoeMomentTable::form(const MonicPolynomial& p,
                              const MonicPolynomial& q) const {
  require_real_coeffs(p, "GinoeMomentTable::form");
  require_real_coeffs(q, "GinoeMomentTable::form");
  if (p.degree() >= n_ || q.degree() >= n_) {
    throw std::invalid_argument("GinoeMomentTable::form: degree exceeds table");
  }
  const std::vector<double> pc = real_coeffs(p);
  const std::vector<double> qc = real_coeffs(q);
  const int top = std::max(p.degree(), q.degree());
  auto at = [](const std::vector<double>& c, int k) {
    return k < static_cast<int>(c.size()) ? c[static_cast<size_t>(k)] : 0.0;
  };
  // Strict-upper pairing keeps form(p, p) == 0 and the argument swap an
  // exact negation: each term is x*y - y*x of identical products.
  double acc = 0.0;
  for (int a = 0; a <= top; ++a) {
    for (int b = a + 1; b <= top; ++b) {
      const double coeff = at(pc, a) * at(qc, b) - at(pc, b) * at(qc, a);
      acc += coeff * skew(a, b);
    }
  }
  return acc;
}

double GinoeMomentTable::moment_of(const MonicPolynomial& p) const {
  require_real_coeffs(p, "GinoeMomentTable::moment_of");
  if (p.degree() >= n_) {
    throw std::invalid_argument(
        "GinoeMomentTable::moment_of: degree exceeds table");
  }
  const std::vector<double> pc = real_coeffs(p);
  double acc = 0.0;
  for (int a = 0; a <= p.degree(); ++a) {
    acc += pc[static_cast<size_t>(a)] * m_[static_cast<size_t>(a)];
  }
  return acc;
}

double GinueMomentTable::gram(int a, int b) const {
  if (a < 0 || b < 0 || a >= n_ || b >= n_) {
    throw std::invalid_argument("GinueMomentTable: power out of range");
  }
  return g_[static_cast<size_t>(a) * static_cast<size_t>(n_) +
            static_cast<size_t>(b)];
}

GinueMomentTable GinueMomentTable::build(int n, const PsiSpec& psi,
                                         const QuadratureConfig& cfg) {
  cfg.validate();
  if (n < 1) throw std::invalid_argument("GinueMomentTable: n must be >= 1");
  GinueMomentTable table(n);
  table.g_.assign(static_cast<size_t>(n) * static_cast<size_t>(n), 0.0);
  const double r = cfg.real_cutoff;
  const int nx = scaled_nodes(cfg.nodes_2d_x, r / cfg.halfplane_cutoff_x);
  const int ny = scaled_nodes(cfg.nodes_2d_y, r / cfg.halfplane_cutoff_y);
  const PanelGrid gx = PanelGrid::build(-r, r, nx);
  const PanelGrid gy = PanelGrid::build(0.0, r, ny);
  std::vector<cd> zpow(static_cast<size_t>(n));
  for (size_t iy = 0; iy < gy.x.size(); ++iy) {
    for (size_t ix = 0; ix < gx.x.size(); ++ix) {
      const cd gamma(gx.x[ix], gy.x[iy]);
      const cd base = gx.w[ix] * gy.w[iy] *
                      std::exp(-0.5 * std::norm(gamma)) * psi.eval(gamma);
      cd zp = 1.0;
      for (int a = 0; a < n; ++a) {
        zpow[static_cast<size_t>(a)] = zp;
        zp *= gamma;
      }
      for (int a = 0; a < n; ++a) {
        const cd left = base * std::conj(zpow[static_cast<size_t>(a)]);
        for (int b = 0; b < n; ++b) {
          table.g_[static_cast<size_t>(a) * static_cast<size_t>(n) +
                   static_cast<size_t>(b)] +=
              (left * zpow[static_cast<size_t>(b)]).real();
        }
      }
    }
  }
  for (double& v : table.g_) {
    if (!std::isfinite(v)) throw numerical_error("GinueMomentTable: non-finite entry");
    v *= 2.0;
  }
  return table;
}

double GinueMomentTable::form(const MonicPolynomial& p,
                              const MonicPolynomial& q) const {
  require_real_coeffs(p, "GinueMomentTable::form");
  require_real_coeffs(q, "GinueMomentTable::form");
  if (p.degree() >= n_ || q.degree() >= n_) {
    throw std::invalid_argument("GinueMomentTable::form: degree exceeds table");
  }
  const std::vector<double> pc = real_coeffs(p);
  const std::vector<double> qc = real_coeffs(q);
  double acc = 0.0;
  for (int a = 0; a <= p.degree(); ++a) {
    for (int b = 0; b <= q.degree(); ++b) {
      acc += pc[static_cast<size_t>(a)] * qc[static_cast<size_t>(b)] * gram(a, b);
    }
  }
  return acc;
}

}  // namespace ginavg::inner
