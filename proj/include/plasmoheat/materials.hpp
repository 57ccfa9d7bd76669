#pragma once

#include "plasmoheat/types.hpp"

namespace ph {

// Electromagnetic and thermal constants of the particle/background pair,
// together with the scaling exponents (h, beta) and the particle radius
// scale delta. Dimensionless simulation units throughout.
struct MaterialParams {
  Real eps_inf = 1.0;     // eps_infinity in the Drude model
  Real eps0_drude = 9.84; // bound-electron contribution eps_0
  Real k_p = 9.096;       // plasma frequency
  Real zeta = 0.072;      // damping
  Complex eps_m = Complex(1.0, 0.0);  // background permittivity, Im >= 0
  Real gamma_m = 1.0;     // background heat conductivity
  Real gamma_p = 10.0;    // particle heat conductivity
  Real c_m = 1.0;         // background volumetric heat capacity
  Real c_p = 1.0;         // particle volumetric heat capacity
  Real h = 1.9;           // damping exponent, zeta ~ delta^h
  Real beta = 1.9;        // conductivity exponent, gamma_p ~ delta^-beta
  Real delta = 0.05;      // particle radius scale

  Real kappa_m() const { return c_m / gamma_m; }
};

// Contrasts and scaled constants derived from MaterialParams at a given
// incidence frequency k. eta is recomputed whenever k changes.
struct DerivedContrasts {
  Complex eta;       // eps_p(k, zeta) - eps_m
  Real alpha;        // gamma_p - gamma_m
  Real alpha_bar;    // alpha * delta^beta
  Real eps_p_bar;    // delta^-h * Im eps_p(k, zeta)
  Real gamma_p_bar;  // gamma_p * delta^beta
  Real a_bar;        // (gamma_m/gamma_p_bar) * k * eps_p_bar / (2 pi kappa_m)
  Real b_bar;        // (alpha_bar/kappa_m) * vol(B)
  Real b_i;          // b_bar * delta^(3-beta)
};

// Laser time modulation f(t) = t^r phi(t), phi = 1 on [0, ell/2],
// supported in [0, ell].
struct Modulation {
  int r = 2;
  Real ell = 0.5;
  Real T = 1.0;
};

Complex drude_permittivity(Real k, const MaterialParams& params);

// Closed forms for the resonant incidence frequency and damping selected by
// the eigenvalue lambda_n0. Throws std::domain_error when the radicand is
// not positive ("no real resonance for these parameters").
struct ResonantFrequency {
  Real k_n0;
  Real zeta_n0;
};
ResonantFrequency resonant_frequency(Real lambda_n0, const MaterialParams& params);

// |1 + eta(k, zeta) lambda_n|
Real resonance_gap(Real k, Real zeta, Real lambda_n, const MaterialParams& params);

Real modulation_f(Real t, const Modulation& m);

DerivedContrasts derive_contrasts(Real k, const MaterialParams& params, Real vol_B);

// Diagnostics of the asymptotic regime; never throws, hard failures live in
// the solver invertibility checks.
struct RegimeCheck {
  std::string name;
  bool pass;
  std::string detail;
};
struct RegimeReport {
  std::vector<RegimeCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};
struct ClusterSummary {
  int M = 1;
  Real d_center = 0.0;  // minimal center spacing
  Real omega_volume = 1.0;
  bool effective_mode = false;
};
RegimeReport validate_regime(const MaterialParams& params, const ClusterSummary& summary);

}  // namespace ph
