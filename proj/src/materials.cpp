#include "plasmoheat/materials.hpp"

#include <cmath>
#include <sstream>

namespace ph {

Complex drude_permittivity(Real k, const MaterialParams& p) {
  const Complex denom(k * k, p.zeta * k);
  return p.eps_inf * (Complex(p.eps0_drude, 0.0) - p.k_p * p.k_p / denom);
}

ResonantFrequency resonant_frequency(Real lambda_n0, const MaterialParams& p) {
  const Complex denom = Complex(1.0, 0.0) -
      lambda_n0 * (p.eps_m - Complex(p.eps_inf * p.eps0_drude, 0.0));
  if (std::abs(denom) == 0.0)
    throw std::domain_error("resonant_frequency: degenerate denominator");
  const Real denom_re = 1.0 - lambda_n0 * (p.eps_m.real() - p.eps_inf * p.eps0_drude);
  const Real radicand =
      p.k_p * p.k_p * p.eps_inf * lambda_n0 * denom_re / std::norm(denom);
  if (radicand <= 0.0)
    throw std::domain_error("resonant_frequency: no real resonance for these parameters");
  const Real k_n0 = std::sqrt(radicand);
  const Real zeta_n0 = p.eps_m.imag() * lambda_n0 / denom_re * k_n0;
  return {k_n0, zeta_n0};
}

Real resonance_gap(Real k, Real zeta, Real lambda_n, const MaterialParams& p) {
  MaterialParams q = p;
  q.zeta = zeta;
  const Complex eta = drude_permittivity(k, q) - p.eps_m;
  return std::abs(Complex(1.0, 0.0) + eta * lambda_n);
}

namespace {
// C^inf step from 1 at s=0 to 0 at s=1, flat at both ends.
Real smooth_step_down(Real s) {
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  const Real a = std::exp(-1.0 / (1.0 - s));
  const Real b = std::exp(-1.0 / s);
  return a / (a + b);
}
}  // namespace

Real modulation_f(Real t, const Modulation& m) {
  if (t <= 0.0 || t >= m.ell) return 0.0;
  const Real tr = std::pow(t, static_cast<Real>(m.r));
  if (t <= 0.5 * m.ell) return tr;
  return tr * smooth_step_down((t - 0.5 * m.ell) / (0.5 * m.ell));
}

DerivedContrasts derive_contrasts(Real k, const MaterialParams& p, Real vol_B) {
  DerivedContrasts c;
  c.eta = drude_permittivity(k, p) - p.eps_m;
  c.alpha = p.gamma_p - p.gamma_m;
  const Real db = std::pow(p.delta, p.beta);
  c.alpha_bar = c.alpha * db;
  c.gamma_p_bar = p.gamma_p * db;
  c.eps_p_bar = drude_permittivity(k, p).imag() * std::pow(p.delta, -p.h);
  c.a_bar = (p.gamma_m / c.gamma_p_bar) * k * c.eps_p_bar / (2.0 * pi * p.kappa_m());
  c.b_bar = (c.alpha_bar / p.kappa_m()) * vol_B;
  c.b_i = c.b_bar * std::pow(p.delta, 3.0 - p.beta);
  return c;
}

namespace {
std::string fmt(Real v) {
  std::ostringstream os;
  os << v;
  return os.str();
}
}  // namespace

RegimeReport validate_regime(const MaterialParams& p, const ClusterSummary& s) {
  RegimeReport rep;

  const bool h_ok = p.h > 9.0 / 5.0 && p.h < 2.0;
  rep.checks.push_back({"h in (9/5, 2)", h_ok,
                        h_ok ? "h = " + fmt(p.h)
                             : "warn: h outside (9/5,2), h = " + fmt(p.h)});

  const Real gpb = p.gamma_p * std::pow(p.delta, p.beta);
  const bool gp_ok = gpb >= 0.1 && gpb <= 10.0;
  rep.checks.push_back({"gamma_p * delta^beta order 1", gp_ok,
                        "gamma_p*delta^beta = " + fmt(gpb)});
  const bool cp_ok = p.c_p >= 0.1 && p.c_p <= 10.0;
  rep.checks.push_back({"c_p order 1", cp_ok, "c_p = " + fmt(p.c_p)});

  if (s.effective_mode && s.d_center > 0.0 && p.delta > 0.0 && p.delta != 1.0) {
    const Real lam_eff = std::log(s.d_center) / std::log(p.delta);
    const Real target = 1.0 - p.beta / 3.0;
    const bool lam_ok = std::abs(lam_eff - target) <= 0.15;
    rep.checks.push_back({"lambda_eff = log d / log delta vs 1 - beta/3", lam_ok,
                          "lambda_eff = " + fmt(lam_eff) + ", target = " + fmt(target)});
  }

  if (s.M > 1 && s.d_center > 0.0) {
    const Real md3 = s.M * std::pow(s.d_center, 3.0) / s.omega_volume;
    const bool md_ok = md3 >= 0.2 && md3 <= 5.0;
    rep.checks.push_back({"M d^3 / vol(Omega) in [0.2, 5]", md_ok,
                          "M d^3 / vol = " + fmt(md3)});
  } else {
    rep.checks.push_back({"M d^3 / vol(Omega) in [0.2, 5]", false,
                          "warn: single particle, M d^3 convention exempt"});
  }
  return rep;
}

}  // namespace ph
