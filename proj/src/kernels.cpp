#include "plasmoheat/kernels.hpp"

#include <cmath>

namespace ph {

Real heat_kernel(const Point3& x, Real t, const Point3& y, Real tau, Real kappa_m) {
  const Real dt = t - tau;
  if (dt <= 0.0) return 0.0;
  const Real r2 = (x - y).squaredNorm();
  const Real pref = std::pow(kappa_m / (4.0 * pi * dt), 1.5);
  return pref * std::exp(-kappa_m * r2 / (4.0 * dt));
}

Real heat_kernel_dt(const Point3& x, Real t, const Point3& y, Real tau, Real kappa_m) {
  const Real dt = t - tau;
  const Real r2 = (x - y).squaredNorm();
  if (dt <= 0.0) {
    if (r2 == 0.0)
      throw std::domain_error("heat_kernel_dt: undefined on the space-time diagonal");
    return 0.0;  // essential zero of exp(-kappa r^2 / 4 dt) as dt -> 0+
  }
  const Real phi = heat_kernel(x, t, y, tau, kappa_m);
  return phi * (-1.5 / dt + kappa_m * r2 / (4.0 * dt * dt));
}

Complex helmholtz_green(Real k, const Point3& x, const Point3& y) {
  const Real r = (x - y).norm();
  if (r == 0.0) throw std::domain_error("helmholtz_green: coincident points");
  return std::exp(Complex(0.0, k * r)) / (4.0 * pi * r);
}

ComplexMat3 dyadic_green(Real k, const Point3& x, const Point3& y) {
  const Point3 diff = x - y;
  const Real r = diff.norm();
  if (r == 0.0) throw std::domain_error("dyadic_green: coincident points");
  const Point3 rhat = diff / r;

  const Complex g = std::exp(Complex(0.0, k * r)) / (4.0 * pi * r);
  const Complex ikm = Complex(0.0, k) - Complex(1.0 / r, 0.0);  // ik - 1/r
  const Complex g1 = g * ikm;                                   // dG/dr
  const Complex g2 = g * (ikm * ikm + 1.0 / (r * r));           // d2G/dr2

  // Hess = (g'' - g'/r) rhat rhat^T + (g'/r) I
  ComplexMat3 out = (g2 - g1 / r) * (rhat * rhat.transpose()).cast<Complex>();
  const Complex diag = g1 / r + k * k * g;
  out(0, 0) += diag;
  out(1, 1) += diag;
  out(2, 2) += diag;
  return out;
}

}  // namespace ph
