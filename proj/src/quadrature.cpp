#include <cmath>

#include "covmeas/spin_rep.hpp"

namespace covmeas {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      // p1 = P_n(x), p0 = P_{n-1}(x)
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    if (n == 1) {
      x = 0.0;
      dp = 1.0;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

SphereQuadrature sphere_quadrature(int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1) throw DomainError("sphere_quadrature: sizes must be >= 1");
  std::vector<double> x, w;
  gauss_legendre(n_theta, x, w);
  SphereQuadrature q;
  q.n_theta = n_theta;
  q.n_phi = n_phi;
  const std::size_t total = static_cast<std::size_t>(n_theta) * n_phi;
  q.nodes.reserve(total);
  q.points.reserve(total);
  q.weights.reserve(total);
  const double dphi = kTwoPi / n_phi;
  for (int i = 0; i < n_theta; ++i) {
    const double theta = std::acos(x[i]);
    for (int k = 0; k < n_phi; ++k) {
      const Direction d{theta, (k + 0.5) * dphi};
      q.nodes.push_back(d);
      q.points.push_back(d.unit());
      q.weights.push_back(w[i] * dphi);
    }
  }
  return q;
}

}  // namespace covmeas
