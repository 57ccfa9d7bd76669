#include "plasmoheat/heat_field.hpp"

#include "plasmoheat/csv.hpp"
#include "plasmoheat/effective.hpp"
#include "plasmoheat/parallel.hpp"
#include "plasmoheat/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace ph {

namespace {

Real phi_r2(Real r2, Real s, Real kappa) {
  if (s <= 0.0) return 0.0;
  return std::pow(kappa / (4.0 * pi * s), 1.5) * std::exp(-kappa * r2 / (4.0 * s));
}

// int_0^{t_n} Phi(x, t_n; z, tau) g(tau) dtau with piecewise-linear g given
// at the grid nodes; Gauss-Legendre per subinterval in s = t_n - tau.
Real kernel_time_integral(Real r2, Real kappa, const Eigen::VectorXd& g, int n,
                          const TimeGrid& tg) {
  const Real dt = tg.dt();
  const Real peak = kappa * r2 / 6.0;
  Real sum = 0.0;
  for (int m = 0; m < n; ++m) {
    // tau in (t_m, t_m+1) -> s in ((n-m-1) dt, (n-m) dt)
    const Real a = (n - m - 1) * dt, b = (n - m) * dt;
    const Real gm = g(m), gm1 = g(m + 1);
    sum += gauss16_peaked(
        [&](Real s) {
          const Real tau = tg.t(n) - s;
          const Real w = (tau - tg.t(m)) / dt;
          return phi_r2(r2, s, kappa) * ((1.0 - w) * gm + w * gm1);
        },
        a, b, peak);
  }
  return sum;
}

std::vector<int> all_nodes(const TimeGrid& tg) {
  std::vector<int> nodes(tg.nodes());
  for (int n = 0; n < tg.nodes(); ++n) nodes[n] = n;
  return nodes;
}

}  // namespace

FieldSamples reconstruct_usc(const SigmaTrajectories& traj,
                             const ParticleCluster& cluster,
                             const MaterialParams& params,
                             const std::vector<Point3>& points,
                             const TimeGrid& tgrid, Real rho_min) {
  std::ostringstream offenders;
  bool bad = false;
  for (size_t p = 0; p < points.size(); ++p)
    for (int i = 0; i < cluster.M(); ++i)
      if ((points[p] - cluster.centers[i]).norm() < rho_min) {
        offenders << " point[" << p << "] near particle " << i;
        bad = true;
      }
  if (bad)
    throw std::invalid_argument("reconstruct_usc: points inside clearance rho_min=" +
                                std::to_string(rho_min) + ":" + offenders.str());

  const Real b = heat_coupling_b(params, cluster);
  const Real kappa = params.kappa_m();

  FieldSamples out;
  out.points = points;
  out.time_nodes = all_nodes(tgrid);
  out.values = Eigen::MatrixXd::Zero(points.size(), tgrid.nodes());

  parallel_for(static_cast<int>(points.size()), [&](int lo, int hi) {
    for (int p = lo; p < hi; ++p) {
      for (int n = 1; n < tgrid.nodes(); ++n) {
        Real acc = 0.0;
        for (int i = 0; i < cluster.M(); ++i) {
          const Real r2 = (points[p] - cluster.centers[i]).squaredNorm();
          acc += kernel_time_integral(r2, kappa, traj.sigma.row(i).transpose(), n, tgrid);
        }
        out.values(p, n) = -b * acc;
      }
    }
  });
  return out;
}

FieldSamples reconstruct_wsc(const Eigen::MatrixXd& Y, const EffectiveGrid& grid,
                             Real b_bar, const MaterialParams& params,
                             const std::vector<Point3>& points, const TimeGrid& tgrid) {
  for (size_t p = 0; p < points.size(); ++p)
    if (grid.omega.contains(points[p]))
      throw std::invalid_argument("reconstruct_wsc: point " + std::to_string(p) +
                                  " lies inside Omega");
  if (Y.rows() != grid.cells() || Y.cols() != tgrid.nodes())
    throw std::invalid_argument("reconstruct_wsc: Y must be cells x (N_t + 1)");

  const Real kappa = params.kappa_m();
  const Real cell_vol = grid.cell_volume();

  FieldSamples out;
  out.points = points;
  out.time_nodes = all_nodes(tgrid);
  out.values = Eigen::MatrixXd::Zero(points.size(), tgrid.nodes());

  parallel_for(static_cast<int>(points.size()), [&](int lo, int hi) {
    for (int p = lo; p < hi; ++p) {
      for (int n = 1; n < tgrid.nodes(); ++n) {
        Real acc = 0.0;
        for (int c = 0; c < grid.cells(); ++c) {
          const Real r2 = (points[p] - grid.cell_centers[c]).squaredNorm();
          acc += kernel_time_integral(r2, kappa, Y.row(c).transpose(), n, tgrid);
        }
        out.values(p, n) = -b_bar * cell_vol * acc;
      }
    }
  });
  return out;
}

void save_field_csv(const FieldSamples& samples, const TimeGrid& tgrid,
                    const std::string& path) {
  CsvWriter w(path, {"x", "y", "z", "t", "value"});
  for (size_t p = 0; p < samples.points.size(); ++p)
    for (size_t k = 0; k < samples.time_nodes.size(); ++k) {
      const Point3& x = samples.points[p];
      w.row({x.x(), x.y(), x.z(), tgrid.t(samples.time_nodes[k]),
             samples.values(p, k)});
    }
  w.commit();
}

}  // namespace ph
