#pragma once

#include "plasmoheat/cluster.hpp"
#include "plasmoheat/materials.hpp"
#include "plasmoheat/maxwell.hpp"
#include "plasmoheat/polarization.hpp"

namespace ph {

struct TimeGrid {
  Real T = 1.0;
  int N_t = 100;

  Real dt() const { return T / N_t; }
  Real t(int n) const { return n * T / N_t; }
  int nodes() const { return N_t + 1; }
};

// sigma^(i)(t_n) and the source amplitudes F_i(t_n); rows are particles,
// columns time nodes. sigma(:, 0) = 0 always.
struct SigmaTrajectories {
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd F;
};

// Which form of the history integral is discretized: the d/dtau sigma form
// of the Volterra system (default) or the integrated-by-parts dPhi/dt form.
enum class VolterraForm { SigmaDerivative, KernelDerivative };

// Per-particle heat coupling b_i = (alpha_i / kappa_m) Vol(D_i).
Real heat_coupling_b(const MaterialParams& params, const ParticleCluster& cluster);

// F_i(t_n) = a_bar delta^(beta-h) f(t_n) Re(conj(Q_i)^T P_B Q_i).
Eigen::MatrixXd heat_source_amplitudes(const DipoleSet& dipoles, const RealMat3& P_B,
                                       const MaterialParams& params,
                                       const DerivedContrasts& contrasts,
                                       const Modulation& modulation,
                                       const TimeGrid& tgrid);

// 1 - b max_i sum_{j != i} d_ij^-2, b = max_j b_j.
InvertibilityCheck check_heat_invertibility(const ParticleCluster& cluster,
                                            const MaterialParams& params);

// Product-quadrature time marching of the M-dimensional Volterra system with
// piecewise-linear sigma and per-subinterval Gauss-Legendre weights. Enforces
// check_heat_invertibility unless force is set.
SigmaTrajectories march_volterra(const ParticleCluster& cluster,
                                 const MaterialParams& params,
                                 const Eigen::MatrixXd& F, const TimeGrid& tgrid,
                                 VolterraForm form = VolterraForm::SigmaDerivative,
                                 bool force = false);

struct H1BoundReport {
  Real lhs;     // (sum_i ||sigma_i||_H1^2)^(1/2)
  Real rhs;     // margin^-1 (sum_i ||F_i||_H1^2)^(1/2)
  Real margin;  // 1 - b max_i sum d_ij^-2
  bool pass;
};

H1BoundReport sigma_h1_bound_check(const SigmaTrajectories& traj, const TimeGrid& tgrid,
                                   Real margin);

void save_sigma_csv(const SigmaTrajectories& traj, const TimeGrid& tgrid,
                    const std::string& path);

// Discrete H1(0,T) norm: trapezoid in L2, forward differences for the
// derivative part.
Real discrete_h1_norm(const Eigen::VectorXd& values, Real dt);

}  // namespace ph
