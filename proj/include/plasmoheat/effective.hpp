#pragma once

#include "plasmoheat/cluster.hpp"
#include "plasmoheat/materials.hpp"
#include "plasmoheat/maxwell.hpp"
#include "plasmoheat/polarization.hpp"
#include "plasmoheat/volterra.hpp"

namespace ph {

// Cubic-cell partition of Omega; identical construction (and ordering) to
// cluster::lattice_cluster for the same inputs.
struct EffectiveGrid {
  DomainOmega omega;
  Real cell_size = 0.0;
  std::vector<Point3> cell_centers;

  int cells() const { return static_cast<int>(cell_centers.size()); }
  Real cell_volume() const { return cell_size * cell_size * cell_size; }
};

EffectiveGrid build_grid(const DomainOmega& omega, Real d);

// Self-cell Hessian average of the Newtonian potential for cubic cells;
// -(1/3) I by the same symmetry as the ball.
RealMat3 cell_hessian_avg();

// Cell-collocation solution of the effective Maxwell Lippmann-Schwinger
// equation. E_hat solves the hatted system
//   E_hat_i - sum_{j != i} Upsilon(z_i, z_j) P_cell E_hat_j = E_in(z_i)
// with P_cell = d^3 (I + A_B H_cell)^-1 A_B, and the unhatted field is
// recovered as E_f = (I - H_cell P_core) E_hat.
struct EffectiveEMField {
  std::vector<Complex3> E_hat;
  std::vector<Complex3> E_f;
  RealMat3 P_core;  // (I + A_B H_cell)^-1 A_B
};

EffectiveEMField solve_effective_maxwell(const EffectiveGrid& grid, const RealMat3& A_B,
                                         const IncidentWave& wave, Complex eps_m);

// eps_m I + A_B inside the closed Omega, eps_m I outside.
ComplexMat3 effective_permittivity(const RealMat3& A_B, const DomainOmega& omega,
                                   Complex eps_m, const Point3& x);

// F(z_i, t_n) = a_bar f(t_n) Re(conj(Ehat_F)^T P_B Ehat_F) per cell, with
// Ehat_F = P_B^-1 A_B E_f.
Eigen::MatrixXd effective_heat_source(const EffectiveEMField& emf, const RealMat3& A_B,
                                      const RealMat3& P_B,
                                      const DerivedContrasts& contrasts,
                                      const Modulation& modulation,
                                      const TimeGrid& tgrid);

// Effective heat marching. Y solves the volume Lippmann-Schwinger equation
// with cell-midpoint space quadrature (exact erf-product kernel on the self
// cell) and the same time product quadrature as march_volterra. W is the
// potential -b_bar V[Y] at the cell centers.
struct EffectiveHeatField {
  Eigen::MatrixXd Y;           // cells x time nodes
  Eigen::MatrixXd W_interior;  // cells x time nodes
  Eigen::MatrixXd F;           // the source it was marched with
};

EffectiveHeatField march_effective_heat(const EffectiveGrid& grid, Real b_bar,
                                        const Eigen::MatrixXd& F_eff,
                                        const MaterialParams& params,
                                        const TimeGrid& tgrid);

// Integral over one cubic cell of the heat kernel centered on the cell,
// closed erf-product form; s = t - tau > 0.
Real self_cell_kernel(Real cell_size, Real s, Real kappa);

// Integral of the heat kernel over a cubic cell at the given center offset
// (erf product; reduces to self_cell_kernel at zero offset).
Real cell_kernel(const Point3& offset, Real cell_size, Real s, Real kappa);

// Finite-difference residual of the parabolic model on the cell lattice:
//   kappa_m (1 + b_bar chi) dW/dt - Lap W = -kappa_m b_bar chi F
// (the potential-theoretic sign of the source; see README). Reports
// max |residual| / max |kappa_m b_bar F| and passes below 0.1.
struct ParabolicResidualReport {
  Real max_residual;
  Real normalizer;
  Real ratio;
  bool pass;
  int stencil_points;
};

ParabolicResidualReport parabolic_residual_check(const EffectiveHeatField& field,
                                                 const EffectiveGrid& grid,
                                                 Real b_bar,
                                                 const MaterialParams& params,
                                                 const TimeGrid& tgrid);

void save_effective_field_csv(const Eigen::MatrixXd& values, const EffectiveGrid& grid,
                              const TimeGrid& tgrid, const std::string& path);
void save_em_field_csv(const EffectiveEMField& emf, const EffectiveGrid& grid,
                       const std::string& path);

}  // namespace ph
