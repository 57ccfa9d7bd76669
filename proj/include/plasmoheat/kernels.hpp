#pragma once

#include "plasmoheat/types.hpp"

namespace ph {

// Free-space fundamental solution of the background heat operator.
// Vanishes identically for t <= tau (causal kernel).
Real heat_kernel(const Point3& x, Real t, const Point3& y, Real tau, Real kappa_m);

// Analytic time derivative of heat_kernel. Only defined off the space-time
// diagonal: throws std::domain_error for t <= tau with x == y.
Real heat_kernel_dt(const Point3& x, Real t, const Point3& y, Real tau, Real kappa_m);

// e^{ik|x-y|} / (4 pi |x-y|); throws std::domain_error on x == y.
Complex helmholtz_green(Real k, const Point3& x, const Point3& y);

// Hess_x G^(k)(x,y) + k^2 G^(k)(x,y) I, closed form. Complex-symmetric.
ComplexMat3 dyadic_green(Real k, const Point3& x, const Point3& y);

}  // namespace ph
