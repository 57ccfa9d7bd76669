#pragma once

#include "plasmoheat/config.hpp"
#include "plasmoheat/effective.hpp"

namespace ph {

// Discrete pipeline state shared by the comparison harness and run().
struct DiscreteRun {
  ParticleCluster cluster;
  DipoleSet dipoles;
  SigmaTrajectories traj;
  InvertibilityCheck foldy_gate;
  InvertibilityCheck heat_gate;
  Real k = 0.0;
  RealMat3 P_B;
  Real C_B = 0.0;
};

struct EffectiveRun {
  EffectiveGrid grid;
  EffectiveEMField emf;
  EffectiveHeatField heat;
  RealMat3 A_B;
  Real b_bar = 0.0;
};

// Runs Foldy-Lax + Volterra on the configured cluster at particle scale
// delta (material rescaled per the asymptotic regime when delta differs
// from the configured one).
DiscreteRun run_discrete(const SimulationConfig& config, Real delta, bool with_heat);
EffectiveRun run_effective(const SimulationConfig& config, Real delta, bool with_heat);

// Material parameters rescaled to particle scale delta: zeta ~ delta^h and
// gamma_p - gamma_m ~ delta^-beta with the configured values as anchors.
MaterialParams rescale_material(const MaterialParams& base, Real delta);

struct ComparisonEntry {
  Real delta;
  int M;
  Real em_error;    // normalized per-particle RMS of ||E_hat|^2 - |Q|^2|
  Real heat_error;  // sup |u_sc - W_sc| / sup |W_sc| over probes x times
};

struct ComparisonReport {
  std::vector<ComparisonEntry> entries;
  Real em_rate;    // fitted log-log slope vs delta
  Real heat_rate;
  bool em_decreasing;
  bool heat_decreasing;
};

Real compare_em_entry(const SimulationConfig& config, Real delta, int* M_out = nullptr);
Real compare_heat_entry(const SimulationConfig& config, Real delta, int* M_out = nullptr);
ComparisonReport run_comparison(const SimulationConfig& config);

// Least squares log(err) vs log(delta), the two smallest deltas weighted
// double.
Real fit_loglog_rate(const std::vector<Real>& deltas, const std::vector<Real>& errors);

// ------------------------------------------------------------------
// Oracle suite: every derived cross-check in one table.

struct OracleHooks {
  // relative perturbation applied to the heat kernel inside the
  // Gaussian-mass oracle; test hook for the sensitivity check
  Real kernel_bias = 0.0;
};

struct OracleResult {
  std::string name;
  Real measured;
  Real tolerance;
  bool pass;
  std::string detail;
};

struct OracleReport {
  std::vector<OracleResult> results;
  bool all_pass() const {
    for (const auto& r : results)
      if (!r.pass) return false;
    return true;
  }
};

OracleReport run_oracles(const OracleHooks& hooks = {});

// Crank-Nicolson finite-difference solve of the parabolic model
//   kappa_m (1 + b_bar chi_Omega) dW/dt - Lap W = -kappa_m b_bar chi_Omega F
// on an embedding box with homogeneous Dirichlet walls, sampled at the cell
// centers of `grid`. F is cell-piecewise-constant in space.
Eigen::MatrixXd crank_nicolson_parabolic(const EffectiveGrid& grid, Real b_bar,
                                         const Eigen::MatrixXd& F_cells,
                                         const MaterialParams& params,
                                         const TimeGrid& tgrid, Real box_half_width,
                                         int intervals_per_side);

}  // namespace ph
