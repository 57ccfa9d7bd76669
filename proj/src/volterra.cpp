#include "plasmoheat/volterra.hpp"

#include "plasmoheat/csv.hpp"
#include "plasmoheat/kernels.hpp"
#include "plasmoheat/quadrature.hpp"

#include <cmath>
#include <map>

namespace ph {

Real heat_coupling_b(const MaterialParams& params, const ParticleCluster& cluster) {
  return (params.gamma_p - params.gamma_m) / params.kappa_m() * cluster.vol_particle();
}

Eigen::MatrixXd heat_source_amplitudes(const DipoleSet& dipoles, const RealMat3& P_B,
                                       const MaterialParams& params,
                                       const DerivedContrasts& contrasts,
                                       const Modulation& modulation,
                                       const TimeGrid& tgrid) {
  const RealMat3 sym = 0.5 * (P_B + P_B.transpose());
  Eigen::SelfAdjointEigenSolver<RealMat3> es(sym);
  if ((P_B - P_B.transpose()).norm() > 1e-12 * std::max(1.0, P_B.norm()) ||
      es.eigenvalues()(0) < -1e-12 * std::max(1.0, P_B.norm()))
    throw std::invalid_argument(
        "heat_source_amplitudes: P_B must be symmetric positive semidefinite");

  const int M = static_cast<int>(dipoles.Q.size());
  const Real scale =
      contrasts.a_bar * std::pow(params.delta, params.beta - params.h);
  Eigen::MatrixXd F(M, tgrid.nodes());
  for (int i = 0; i < M; ++i) {
    const Complex3& q = dipoles.Q[i];
    const Real quad = (q.adjoint() * P_B.cast<Complex>() * q)(0, 0).real();
    for (int n = 0; n < tgrid.nodes(); ++n)
      F(i, n) = scale * modulation_f(tgrid.t(n), modulation) * quad;
  }
  return F;
}

InvertibilityCheck check_heat_invertibility(const ParticleCluster& cluster,
                                            const MaterialParams& params) {
  const Real b = heat_coupling_b(params, cluster);
  const Real quantity = b * pairwise_kernel_sums(cluster, 2.0);
  return {quantity < 1.0, 1.0 - quantity, quantity};
}

namespace {

// Weights of the product quadrature, stationary in the step offset q = n - m:
// per squared pair distance r2 we keep, for q = 1..N_t,
//   phi[q-1]  = int over s in ((q-1)dt, q dt) of Phi_r(s) ds
// and for the dPhi/dt form the two hat-function moments of dPhi/dt.
struct PairWeights {
  std::vector<Real> phi;
  std::vector<Real> dphi_left;   // multiplies sigma^m   (hat (s-(q-1)dt)/dt)
  std::vector<Real> dphi_right;  // multiplies sigma^m+1 (hat (q dt - s)/dt)
};

Real phi_r(Real r2, Real s, Real kappa) {
  if (s <= 0.0) return 0.0;
  return std::pow(kappa / (4.0 * pi * s), 1.5) * std::exp(-kappa * r2 / (4.0 * s));
}

Real dphi_dt_r(Real r2, Real s, Real kappa) {
  if (s <= 0.0) return 0.0;
  return phi_r(r2, s, kappa) * (-1.5 / s + kappa * r2 / (4.0 * s * s));
}

PairWeights make_pair_weights(Real r2, Real kappa, const TimeGrid& tg, bool deriv_form) {
  PairWeights w;
  const Real dt = tg.dt();
  const Real peak = kappa * r2 / 6.0;  // maximum of Phi_r(s)
  w.phi.resize(tg.N_t);
  if (deriv_form) {
    w.dphi_left.resize(tg.N_t);
    w.dphi_right.resize(tg.N_t);
  }
  for (int q = 1; q <= tg.N_t; ++q) {
    const Real a = (q - 1) * dt, b = q * dt;
    w.phi[q - 1] = gauss16_peaked([&](Real s) { return phi_r(r2, s, kappa); }, a, b, peak);
    if (deriv_form) {
      // dPhi/dt changes sign at s = kappa r^2 / 6; refine around both scales
      w.dphi_left[q - 1] = gauss16_peaked(
          [&](Real s) { return dphi_dt_r(r2, s, kappa) * (s - a) / dt; }, a, b, peak);
      w.dphi_right[q - 1] = gauss16_peaked(
          [&](Real s) { return dphi_dt_r(r2, s, kappa) * (b - s) / dt; }, a, b, peak);
    }
  }
  return w;
}

}  // namespace

SigmaTrajectories march_volterra(const ParticleCluster& cluster,
                                 const MaterialParams& params,
                                 const Eigen::MatrixXd& F, const TimeGrid& tgrid,
                                 VolterraForm form, bool force) {
  const int M = cluster.M();
  if (F.rows() != M || F.cols() != tgrid.nodes())
    throw std::invalid_argument("march_volterra: F must be M x (N_t + 1)");
  const auto gate = check_heat_invertibility(cluster, params);
  if (!gate.pass && !force)
    throw GateError("march_volterra: heat invertibility condition violated", gate.margin);

  const Real b = heat_coupling_b(params, cluster);
  const Real kappa = params.kappa_m();
  const Real dt = tgrid.dt();
  const bool deriv_form = form == VolterraForm::KernelDerivative;

  // weights shared between pairs at identical distance (exact r^2 match)
  std::map<Real, PairWeights> cache;
  std::vector<const PairWeights*> wptr(static_cast<size_t>(M) * M, nullptr);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) {
      if (i == j) continue;
      const Real r2 = (cluster.centers[i] - cluster.centers[j]).squaredNorm();
      auto it = cache.find(r2);
      if (it == cache.end())
        it = cache.emplace(r2, make_pair_weights(r2, kappa, tgrid, deriv_form)).first;
      wptr[i * M + j] = &it->second;
    }

  // step matrix is the same at every step
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(M, M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) {
      if (i == j) continue;
      const PairWeights& w = *wptr[i * M + j];
      A(i, j) = deriv_form ? b * w.dphi_right[0] : b * w.phi[0] / dt;
    }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  if (!(lu.rcond() > 1e-14))
    throw SolverError("march_volterra: singular step matrix");

  SigmaTrajectories traj;
  traj.F = F;
  traj.sigma = Eigen::MatrixXd::Zero(M, tgrid.nodes());

  Eigen::VectorXd rhs(M);
  for (int n = 1; n <= tgrid.N_t; ++n) {
    for (int i = 0; i < M; ++i) {
      Real hist = 0.0;
      for (int j = 0; j < M; ++j) {
        if (j == i) continue;
        const PairWeights& w = *wptr[i * M + j];
        if (deriv_form) {
          Real s = 0.0;
          for (int m = 0; m < n; ++m) {
            const int q = n - m;
            s += traj.sigma(j, m) * w.dphi_left[q - 1];
            if (m + 1 < n) s += traj.sigma(j, m + 1) * w.dphi_right[q - 1];
          }
          hist += b * s;
        } else {
          Real s = 0.0;
          for (int m = 0; m + 1 < n; ++m)
            s += (traj.sigma(j, m + 1) - traj.sigma(j, m)) * w.phi[n - m - 1];
          s -= traj.sigma(j, n - 1) * w.phi[0];  // known half of the last increment
          hist += b * s / dt;
        }
      }
      rhs(i) = F(i, n) - hist;
    }
    traj.sigma.col(n) = lu.solve(rhs);
  }
  return traj;
}

Real discrete_h1_norm(const Eigen::VectorXd& v, Real dt) {
  const int n = static_cast<int>(v.size());
  Real l2 = 0.0;
  for (int i = 0; i + 1 < n; ++i)
    l2 += 0.5 * dt * (v(i) * v(i) + v(i + 1) * v(i + 1));
  Real h1 = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    const Real g = (v(i + 1) - v(i)) / dt;
    h1 += dt * g * g;
  }
  return std::sqrt(l2 + h1);
}

H1BoundReport sigma_h1_bound_check(const SigmaTrajectories& traj, const TimeGrid& tgrid,
                                   Real margin) {
  Real lhs2 = 0.0, Fh2 = 0.0;
  for (int i = 0; i < traj.sigma.rows(); ++i) {
    const Real ns = discrete_h1_norm(traj.sigma.row(i).transpose(), tgrid.dt());
    const Real nf = discrete_h1_norm(traj.F.row(i).transpose(), tgrid.dt());
    lhs2 += ns * ns;
    Fh2 += nf * nf;
  }
  H1BoundReport rep;
  rep.margin = margin;
  rep.lhs = std::sqrt(lhs2);
  rep.rhs = std::sqrt(Fh2) / margin;
  rep.pass = rep.lhs <= rep.rhs * (1.0 + 1e-6);
  return rep;
}

void save_sigma_csv(const SigmaTrajectories& traj, const TimeGrid& tgrid,
                    const std::string& path) {
  std::vector<std::string> header = {"t"};
  for (int i = 0; i < traj.sigma.rows(); ++i)
    header.push_back("sigma_" + std::to_string(i + 1));
  CsvWriter w(path, header);
  for (int n = 0; n < tgrid.nodes(); ++n) {
    std::vector<Real> row = {tgrid.t(n)};
    for (int i = 0; i < traj.sigma.rows(); ++i) row.push_back(traj.sigma(i, n));
    w.row(row);
  }
  w.commit();
}

}  // namespace ph
