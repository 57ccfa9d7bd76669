#pragma once

#include "plasmoheat/materials.hpp"
#include "plasmoheat/types.hpp"

namespace ph {

// Resonant spectral data of the reference shape B: eigenvalue lambda_n0 of
// the magnetization operator on the gradient-of-harmonics subspace, moments
// of the unit-L2-norm resonant modes, and the averaged Hessian of the
// Newtonian potential of B at its center.
struct ShapeSpectralData {
  Real lambda_n0 = 1.0 / 3.0;
  std::vector<Point3> mode_moments;  // int_B e^(3)_{m,n0}
  Real vol_B = 4.0 * pi / 3.0;
  RealMat3 newtonian_hessian_avg = -RealMat3::Identity() / 3.0;

  RealMat3 moment_outer_sum() const {
    RealMat3 s = RealMat3::Zero();
    for (const auto& v : mode_moments) s += v * v.transpose();
    return s;
  }
};

ShapeSpectralData ball_spectral_data();

// Sidecar CSV with rows: lambda,<v>; vol,<v>; moment,x,y,z (one per mode);
// hess,a,b,c (three rows). Produced by an external eigensolver for general
// shapes; this tool only ships the ball.
ShapeSpectralData load_spectral_csv(const std::string& path);
void save_spectral_csv(const ShapeSpectralData& spec, const std::string& path);

// Resonant-term polarization matrix delta^3/(1 + eta lambda_n0) sum v (x) v.
// Throws on exact resonance |1 + eta lambda_n0| < 1e-14.
ComplexMat3 polarization_P_Di(const ShapeSpectralData& spec, Complex eta, Real delta);

struct ScaledPolarization {
  RealMat3 P_B;
  Real C_B;
};

// Real scaled polarization P_B = C_B sum (v/sqrt(vol_B)) (x) (v/sqrt(vol_B))
// with C_B = (k^4 + (zeta_n0 k)^2) / (lambda_n0 k_p^2 k sqrt 5).
ScaledPolarization polarization_P_B(const ShapeSpectralData& spec,
                                    const MaterialParams& params, Real k_n0,
                                    Real zeta_n0);

// Effective polarization A_B = (I - H P_B)^-1 P_B with H the Newtonian
// Hessian average. Throws SolverError with a condition-number report when
// I - H P_B is numerically singular.
RealMat3 effective_polarization_A_B(const RealMat3& P_B, const ShapeSpectralData& spec);

// Exact inverse of the A_B map: (I + A_B H)^-1 A_B.
RealMat3 polarization_from_effective(const RealMat3& A_B, const RealMat3& H);

}  // namespace ph
