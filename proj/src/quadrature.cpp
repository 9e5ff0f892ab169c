#include "kgwell/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kgwell/errors.hpp"

namespace kgwell {

QuadratureRule parse_rule(std::string_view name) {
  if (name == "gauss-legendre") return QuadratureRule::GaussLegendre;
  if (name == "trapezoid") return QuadratureRule::Trapezoid;
  throw InvalidConfig("unknown quadrature rule '" + std::string(name) + "'");
}

std::string_view to_string(QuadratureRule rule) {
  return rule == QuadratureRule::GaussLegendre ? "gauss-legendre" : "trapezoid";
}

void QuadraturePlan::validate() const {
  if (!(p_min > 0.0)) throw InvalidConfig("quadrature p_min must be > 0");
  if (!(p_max > p_min)) throw InvalidConfig("quadrature p_max must exceed p_min");
  if (n_nodes < 2) throw InvalidConfig("quadrature needs at least 2 nodes");
}

QuadraturePlan QuadraturePlan::around(double p0, double sigma_p, double half_width, int n_nodes,
                                      QuadratureRule rule) {
  QuadraturePlan plan;
  // Keep the window off p = 0; the underflow check reports what is lost.
  plan.p_min = std::max(p0 - half_width * sigma_p, 1e-6 * p0);
  plan.p_max = p0 + half_width * sigma_p;
  plan.n_nodes = n_nodes;
  plan.rule = rule;
  return plan;
}

QuadratureNodes gauss_legendre(int n, double a, double b) {
  if (n < 1) throw InvalidConfig("gauss_legendre: n must be >= 1");
  QuadratureNodes q;
  q.x.resize(static_cast<std::size_t>(n));
  q.w.resize(static_cast<std::size_t>(n));
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    q.x[lo] = mid - half * z;
    q.x[hi] = mid + half * z;
    q.w[lo] = 2.0 * half / ((1.0 - z * z) * dp * dp);
    q.w[hi] = q.w[lo];
  }
  return q;
}

QuadratureNodes trapezoid(int n, double a, double b) {
  if (n < 2) throw InvalidConfig("trapezoid: n must be >= 2");
  QuadratureNodes q;
  const double h = (b - a) / (n - 1);
  for (int i = 0; i < n; ++i) {
    q.x.push_back(a + i * h);
    q.w.push_back((i == 0 || i == n - 1) ? 0.5 * h : h);
  }
  return q;
}

QuadratureNodes make_nodes(const QuadraturePlan& plan) {
  plan.validate();
  return plan.rule == QuadratureRule::GaussLegendre ? gauss_legendre(plan.n_nodes, plan.p_min, plan.p_max)
                                                    : trapezoid(plan.n_nodes, plan.p_min, plan.p_max);
}

}  // namespace kgwell
