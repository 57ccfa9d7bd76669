#pragma once

#include "plasmoheat/cluster.hpp"
#include "plasmoheat/materials.hpp"
#include "plasmoheat/polarization.hpp"

namespace ph {

// Incident plane wave E0 exp(i k sqrt(Re eps_m) theta . x) with transverse
// unit polarization.
struct IncidentWave {
  Real k = 1.0;
  Point3 theta = Point3::UnitZ();
  Point3 E0 = Point3::UnitX();

  void validate() const;
};

Complex3 incident_field(const IncidentWave& wave, Complex eps_m, const Point3& x);

// Assembled Foldy-Lax system: identity diagonal blocks, off-diagonal blocks
// -eta Upsilon(z_i, z_j) P_{D_j}, right-hand side stacking E_in(z_i).
struct FoldySystem {
  Eigen::MatrixXcd A;   // 3M x 3M
  Eigen::VectorXcd rhs; // 3M
  int M = 0;
};

struct DipoleSet {
  std::vector<Complex3> Q;
};

FoldySystem assemble_foldy(const ParticleCluster& cluster,
                           const std::vector<ComplexMat3>& P_Di, Complex eta,
                           const IncidentWave& wave, Complex eps_m);

struct InvertibilityCheck {
  bool pass;
  Real margin;
  Real quantity;  // the contraction quantity the margin is 1 minus
};

// 1 - |eta| max_i ||P_{D_i}||_2 d^-3 with d the minimal center spacing.
InvertibilityCheck check_foldy_invertibility(const ParticleCluster& cluster,
                                             const std::vector<ComplexMat3>& P_Di,
                                             Complex eta);

// Dense LU for 3M <= 3000, BiCGSTAB beyond. Throws SolverError if the
// relative residual exceeds 1e-10.
DipoleSet solve_foldy(const FoldySystem& system);

void save_dipoles_csv(const DipoleSet& dipoles, const std::string& path);

}  // namespace ph
