#include "plasmoheat/quadrature.hpp"

#include <array>
#include <cmath>

namespace ph {

namespace {
// 16-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<Real, 8> kNodes = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr std::array<Real, 8> kWeights = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};
}  // namespace

Real gauss16(const std::function<Real(Real)>& f, Real a, Real b) {
  const Real mid = 0.5 * (a + b);
  const Real hw = 0.5 * (b - a);
  Real sum = 0.0;
  for (int i = 0; i < 8; ++i)
    sum += kWeights[i] * (f(mid - hw * kNodes[i]) + f(mid + hw * kNodes[i]));
  return hw * sum;
}

Real gauss16_peaked(const std::function<Real(Real)>& f, Real a, Real b, Real s_peak) {
  if (!(b > a)) return 0.0;
  if (!(s_peak > a && s_peak < b) || (b - a) < 4.0 * s_peak) return gauss16(f, a, b);
  // refine around the peak: [a, p/4, p/2, p, 2p, 4p, ..., b]
  Real sum = 0.0;
  Real lo = a;
  for (Real cut : {0.25 * s_peak, 0.5 * s_peak, s_peak}) {
    if (cut > lo && cut < b) {
      sum += gauss16(f, lo, cut);
      lo = cut;
    }
  }
  Real cut = 2.0 * s_peak;
  while (cut < b) {
    sum += gauss16(f, lo, cut);
    lo = cut;
    cut *= 2.0;
  }
  sum += gauss16(f, lo, b);
  return sum;
}

namespace {
Real simpson(const std::function<Real(Real)>& f, Real a, Real fa, Real b, Real fb,
             Real m, Real fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

Real adapt(const std::function<Real(Real)>& f, Real a, Real fa, Real b, Real fb,
           Real m, Real fm, Real whole, Real tol, int depth) {
  const Real lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const Real flm = f(lm), frm = f(rm);
  const Real left = simpson(f, a, fa, m, fm, lm, flm);
  const Real right = simpson(f, m, fm, b, fb, rm, frm);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}
}  // namespace

Real adaptive_simpson(const std::function<Real(Real)>& f, Real a, Real b, Real tol,
                      int max_depth) {
  if (!(b > a)) return 0.0;
  const Real m = 0.5 * (a + b);
  const Real fa = f(a), fb = f(b), fm = f(m);
  return adapt(f, a, fa, b, fb, m, fm, simpson(f, a, fa, b, fb, m, fm), tol, max_depth);
}

}  // namespace ph
