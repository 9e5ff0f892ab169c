#pragma once

#include <string_view>
#include <vector>

namespace kgwell {

enum class QuadratureRule { GaussLegendre, Trapezoid };

QuadratureRule parse_rule(std::string_view name);
std::string_view to_string(QuadratureRule rule);

/// Momentum integration window and rule for wavepacket superpositions.
struct QuadraturePlan {
  double p_min = 0.0;
  double p_max = 0.0;
  int n_nodes = 2048;
  QuadratureRule rule = QuadratureRule::GaussLegendre;

  void validate() const;

  /// Window of +-half_width sigmas around p0, clipped to p > 0.
  static QuadraturePlan around(double p0, double sigma_p, double half_width = 8.0, int n_nodes = 2048,
                               QuadratureRule rule = QuadratureRule::GaussLegendre);
};

struct QuadratureNodes {
  std::vector<double> x;
  std::vector<double> w;
};

/// Gauss-Legendre nodes and weights mapped to [a, b]; Newton iteration on P_n.
QuadratureNodes gauss_legendre(int n, double a, double b);

/// Composite trapezoid rule with n equispaced points on [a, b].
QuadratureNodes trapezoid(int n, double a, double b);

QuadratureNodes make_nodes(const QuadraturePlan& plan);

}  // namespace kgwell
