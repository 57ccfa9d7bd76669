#pragma once

#include "plasmoheat/cluster.hpp"
#include "plasmoheat/volterra.hpp"

namespace ph {

// Exterior heat-field samples: values(p, n) at points[p], times[n].
struct FieldSamples {
  std::vector<Point3> points;
  std::vector<int> time_nodes;  // indices into the TimeGrid
  Eigen::MatrixXd values;
};

// u_sc(x, t) = -sum_i b_i int_0^t Phi(x, t; z_i, tau) sigma_i(tau) dtau,
// with piecewise-linear sigma and Gauss-Legendre per subinterval. Points
// must keep a clearance rho_min from every center; offending points are
// listed in the thrown error.
FieldSamples reconstruct_usc(const SigmaTrajectories& traj,
                             const ParticleCluster& cluster,
                             const MaterialParams& params,
                             const std::vector<Point3>& points,
                             const TimeGrid& tgrid, Real rho_min);

// W_sc(x, t) = -b_bar int_0^t int_Omega Phi(x, t; y, tau) Y(y, tau) dy dtau,
// midpoint rule over the cell grid in space. Points must lie outside Omega.
struct EffectiveGrid;  // effective.hpp
FieldSamples reconstruct_wsc(const Eigen::MatrixXd& Y, const EffectiveGrid& grid,
                             Real b_bar, const MaterialParams& params,
                             const std::vector<Point3>& points, const TimeGrid& tgrid);

void save_field_csv(const FieldSamples& samples, const TimeGrid& tgrid,
                    const std::string& path);

}  // namespace ph
