#pragma once

#include "plasmoheat/types.hpp"

#include <functional>

namespace ph {

// 16-point Gauss-Legendre rule on [a, b].
Real gauss16(const std::function<Real(Real)>& f, Real a, Real b);

// Composite rule for kernels with one interior peak near s_peak: panels are
// refined geometrically around the peak, Gauss-Legendre on each.
Real gauss16_peaked(const std::function<Real(Real)>& f, Real a, Real b, Real s_peak);

// Adaptive Simpson to an absolute tolerance; used by oracles and cross-checks.
Real adaptive_simpson(const std::function<Real(Real)>& f, Real a, Real b,
                      Real tol = 1e-12, int max_depth = 40);

}  // namespace ph
