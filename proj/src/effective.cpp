#include "plasmoheat/effective.hpp"

#include "plasmoheat/csv.hpp"
#include "plasmoheat/kernels.hpp"
#include "plasmoheat/parallel.hpp"
#include "plasmoheat/quadrature.hpp"

#include <cmath>
#include <map>

namespace ph {

EffectiveGrid build_grid(const DomainOmega& omega, Real d) {
  if (!(d > 0.0) || d >= 2.0 * omega.extent + 1e-12)
    throw std::invalid_argument("build_grid: cell size must satisfy 0 < d <= extent");
  EffectiveGrid grid;
  grid.omega = omega;
  grid.cell_size = d;
  grid.cell_centers = lattice_centers(omega, d);
  if (grid.cell_centers.empty())
    throw std::invalid_argument("build_grid: no cell of side d fits inside Omega");
  return grid;
}

RealMat3 cell_hessian_avg() { return -RealMat3::Identity() / 3.0; }

EffectiveEMField solve_effective_maxwell(const EffectiveGrid& grid, const RealMat3& A_B,
                                         const IncidentWave& wave, Complex eps_m) {
  const int N = grid.cells();
  const RealMat3 H = cell_hessian_avg();
  const RealMat3 core_lhs = RealMat3::Identity() + A_B * H;
  Eigen::JacobiSVD<RealMat3> svd(core_lhs, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (!(svd.singularValues()(2) > 1e-12 * std::max(1.0, svd.singularValues()(0))))
    throw SolverError("solve_effective_maxwell: I + A_B H_cell ill conditioned");
  const RealMat3 P_core = core_lhs.lu().solve(A_B);
  const RealMat3 P_cell = grid.cell_volume() * P_core;

  const Real kw = wave.k * std::sqrt(std::max(0.0, eps_m.real()));
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(3 * N, 3 * N);
  Eigen::VectorXcd rhs(3 * N);
  parallel_for(N, [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      rhs.segment<3>(3 * i) = incident_field(wave, eps_m, grid.cell_centers[i]);
      for (int j = 0; j < N; ++j) {
        if (j == i) continue;
        const ComplexMat3 ups =
            dyadic_green(kw, grid.cell_centers[i], grid.cell_centers[j]);
        A.block<3, 3>(3 * i, 3 * j) = -(ups * P_cell.cast<Complex>());
      }
    }
  });

  Eigen::VectorXcd e = A.partialPivLu().solve(rhs);
  const Real rel = (A * e - rhs).norm() / std::max(1e-300, rhs.norm());
  if (!(rel < 1e-8))
    throw SolverError("solve_effective_maxwell: relative residual " + std::to_string(rel),
                      rel);

  EffectiveEMField out;
  out.P_core = P_core;
  out.E_hat.resize(N);
  out.E_f.resize(N);
  const RealMat3 recover = RealMat3::Identity() - H * P_core;
  for (int i = 0; i < N; ++i) {
    out.E_hat[i] = e.segment<3>(3 * i);
    out.E_f[i] = recover.cast<Complex>() * out.E_hat[i];
  }
  return out;
}

ComplexMat3 effective_permittivity(const RealMat3& A_B, const DomainOmega& omega,
                                   Complex eps_m, const Point3& x) {
  ComplexMat3 eps = eps_m * ComplexMat3::Identity();
  if (omega.contains(x)) eps += A_B.cast<Complex>();
  return eps;
}

Eigen::MatrixXd effective_heat_source(const EffectiveEMField& emf, const RealMat3& A_B,
                                      const RealMat3& P_B,
                                      const DerivedContrasts& contrasts,
                                      const Modulation& modulation,
                                      const TimeGrid& tgrid) {
  Eigen::FullPivLU<RealMat3> lu(P_B);
  if (!lu.isInvertible())
    throw SolverError("effective_heat_source: singular P_B");
  const RealMat3 hat_map = lu.solve(A_B);  // P_B^-1 A_B

  const int N = static_cast<int>(emf.E_f.size());
  Eigen::MatrixXd F(N, tgrid.nodes());
  for (int i = 0; i < N; ++i) {
    const Complex3 ehat = hat_map.cast<Complex>() * emf.E_f[i];
    const Real quad = (ehat.adjoint() * P_B.cast<Complex>() * ehat)(0, 0).real();
    for (int n = 0; n < tgrid.nodes(); ++n)
      F(i, n) = contrasts.a_bar * modulation_f(tgrid.t(n), modulation) * quad;
  }
  return F;
}

Real self_cell_kernel(Real cell_size, Real s, Real kappa) {
  if (s <= 0.0) return 0.0;
  const Real q = 0.5 * cell_size * std::sqrt(kappa / (4.0 * s));
  const Real e = std::erf(q);
  return e * e * e;
}

Real cell_kernel(const Point3& offset, Real cell_size, Real s, Real kappa) {
  if (s <= 0.0) return 0.0;
  const Real a = std::sqrt(kappa / (4.0 * s));
  Real prod = 1.0;
  for (int k = 0; k < 3; ++k) {
    const Real u = std::abs(offset[k]);
    prod *= 0.5 * (std::erf(a * (u + 0.5 * cell_size)) -
                   std::erf(a * (u - 0.5 * cell_size)));
  }
  return prod;
}

namespace {

// Stationary subinterval weights for one kernel k(s):
//   incr[q-1]  = int k(s) ds                    (d/dtau form, divided by dt)
//   vl[q-1]    = int k(s) (s - a)/dt ds          (multiplies the older node)
//   vr[q-1]    = int k(s) (b - s)/dt ds          (multiplies the newer node)
// over s in (a, b) = ((q-1) dt, q dt).
struct KernelWeights {
  std::vector<Real> incr, vl, vr;
};

KernelWeights make_kernel_weights(const std::function<Real(Real)>& k, Real peak,
                                  const TimeGrid& tg) {
  KernelWeights w;
  const Real dt = tg.dt();
  w.incr.resize(tg.N_t);
  w.vl.resize(tg.N_t);
  w.vr.resize(tg.N_t);
  for (int q = 1; q <= tg.N_t; ++q) {
    const Real a = (q - 1) * dt, b = q * dt;
    w.incr[q - 1] = gauss16_peaked(k, a, b, peak);
    w.vl[q - 1] =
        gauss16_peaked([&](Real s) { return k(s) * (s - a) / dt; }, a, b, peak);
    w.vr[q - 1] = w.incr[q - 1] - w.vl[q - 1];
  }
  return w;
}

}  // namespace

EffectiveHeatField march_effective_heat(const EffectiveGrid& grid, Real b_bar,
                                        const Eigen::MatrixXd& F_eff,
                                        const MaterialParams& params,
                                        const TimeGrid& tgrid) {
  const int N = grid.cells();
  if (F_eff.rows() != N || F_eff.cols() != tgrid.nodes())
    throw std::invalid_argument("march_effective_heat: F must be cells x (N_t + 1)");
  if (b_bar < 0.0)
    throw std::invalid_argument("march_effective_heat: b_bar must be >= 0");

  const Real kappa = params.kappa_m();
  const Real dt = tgrid.dt();
  const Real d = grid.cell_size;

  // Exact cell integrals of the kernel (erf product), so the space rule is
  // midpoint collocation for Y with the kernel resolved over each cell;
  // weights shared per abs-sorted lattice offset.
  const auto offset_key = [&](const Point3& u) {
    std::array<Real, 3> a{std::abs(u.x()), std::abs(u.y()), std::abs(u.z())};
    std::sort(a.begin(), a.end());
    return a;
  };
  std::map<std::array<Real, 3>, KernelWeights> cache;
  std::vector<const KernelWeights*> wptr(static_cast<size_t>(N) * N, nullptr);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const Point3 u = grid.cell_centers[i] - grid.cell_centers[j];
      const auto key = offset_key(u);
      auto it = cache.find(key);
      if (it == cache.end()) {
        const Real near = std::max(0.0, u.norm() - 0.5 * std::sqrt(3.0) * d);
        it = cache.emplace(key, make_kernel_weights(
                                    [&](Real s) { return cell_kernel(u, d, s, kappa); },
                                    kappa * near * near / 6.0, tgrid))
                 .first;
      }
      wptr[i * N + j] = &it->second;
    }

  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      A(i, j) += b_bar * wptr[i * N + j]->incr[0] / dt;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  if (!(lu.rcond() > 1e-14))
    throw SolverError("march_effective_heat: singular step matrix");

  EffectiveHeatField out;
  out.F = F_eff;
  out.Y = Eigen::MatrixXd::Zero(N, tgrid.nodes());

  Eigen::VectorXd rhs(N);
  for (int n = 1; n <= tgrid.N_t; ++n) {
    parallel_for(N, [&](int lo, int hi) {
      for (int i = lo; i < hi; ++i) {
        Real hist = 0.0;
        for (int j = 0; j < N; ++j) {
          const KernelWeights& w = *wptr[i * N + j];
          Real s = 0.0;
          for (int m = 0; m + 1 < n; ++m)
            s += (out.Y(j, m + 1) - out.Y(j, m)) * w.incr[n - m - 1];
          s -= out.Y(j, n - 1) * w.incr[0];
          hist += b_bar * s / dt;
        }
        rhs(i) = F_eff(i, n) - hist;
      }
    });
    out.Y.col(n) = lu.solve(rhs);
  }

  // interior potential W = -b_bar V[Y] at cell centers, piecewise-linear Y
  out.W_interior = Eigen::MatrixXd::Zero(N, tgrid.nodes());
  parallel_for(N, [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i)
      for (int n = 1; n <= tgrid.N_t; ++n) {
        Real acc = 0.0;
        for (int j = 0; j < N; ++j) {
          const KernelWeights& w = *wptr[i * N + j];
          Real s = 0.0;
          for (int m = 0; m < n; ++m) {
            const int q = n - m;
            s += out.Y(j, m) * w.vl[q - 1] + out.Y(j, m + 1) * w.vr[q - 1];
          }
          acc += s;
        }
        out.W_interior(i, n) = -b_bar * acc;
      }
  });
  return out;
}

namespace {
// integer lattice key of a cell center for neighbor lookup
long long cell_key(const Point3& c, const Point3& org, Real d) {
  const long long ix = llround((c.x() - org.x()) / d);
  const long long iy = llround((c.y() - org.y()) / d);
  const long long iz = llround((c.z() - org.z()) / d);
  return (ix + 512) + ((iy + 512) << 11) + ((iz + 512) << 22);
}
}  // namespace

ParabolicResidualReport parabolic_residual_check(const EffectiveHeatField& field,
                                                 const EffectiveGrid& grid,
                                                 Real b_bar,
                                                 const MaterialParams& params,
                                                 const TimeGrid& tgrid) {
  const int N = grid.cells();
  const Real d = grid.cell_size;
  const Real dt = tgrid.dt();
  const Real kappa = params.kappa_m();

  std::map<long long, int> index;
  const Point3 org = grid.cell_centers.empty() ? Point3::Zero() : grid.cell_centers[0];
  for (int i = 0; i < N; ++i) index[cell_key(grid.cell_centers[i], org, d)] = i;

  Real max_res = 0.0, normalizer = 0.0;
  int count = 0;
  for (int i = 0; i < N; ++i) {
    int nb[6];
    bool interior = true;
    for (int k = 0; k < 6 && interior; ++k) {
      Point3 c = grid.cell_centers[i];
      c[k / 2] += (k % 2 ? d : -d);
      auto it = index.find(cell_key(c, org, d));
      if (it == index.end())
        interior = false;
      else
        nb[k] = it->second;
    }
    if (!interior) continue;
    for (int n = 1; n < tgrid.N_t; ++n) {
      const Real wt = (field.W_interior(i, n + 1) - field.W_interior(i, n - 1)) / (2.0 * dt);
      Real lap = -6.0 * field.W_interior(i, n);
      for (int k = 0; k < 6; ++k) lap += field.W_interior(nb[k], n);
      lap /= d * d;
      const Real res =
          kappa * (1.0 + b_bar) * wt - lap + kappa * b_bar * field.F(i, n);
      max_res = std::max(max_res, std::abs(res));
      normalizer = std::max(normalizer, std::abs(kappa * b_bar * field.F(i, n)));
      ++count;
    }
  }

  ParabolicResidualReport rep;
  rep.max_residual = max_res;
  rep.normalizer = normalizer;
  rep.ratio = normalizer > 0.0 ? max_res / normalizer : (max_res > 0.0 ? 1e300 : 0.0);
  rep.pass = rep.ratio < 0.1;
  rep.stencil_points = count;
  return rep;
}

void save_effective_field_csv(const Eigen::MatrixXd& values, const EffectiveGrid& grid,
                              const TimeGrid& tgrid, const std::string& path) {
  CsvWriter w(path, {"cell", "x", "y", "z", "t", "value"});
  for (int i = 0; i < grid.cells(); ++i)
    for (int n = 0; n < tgrid.nodes(); ++n) {
      const Point3& c = grid.cell_centers[i];
      w.row({static_cast<Real>(i), c.x(), c.y(), c.z(), tgrid.t(n), values(i, n)});
    }
  w.commit();
}

void save_em_field_csv(const EffectiveEMField& emf, const EffectiveGrid& grid,
                       const std::string& path) {
  CsvWriter w(path, {"cell", "x", "y", "z", "re_ex", "im_ex", "re_ey", "im_ey",
                     "re_ez", "im_ez"});
  for (int i = 0; i < grid.cells(); ++i) {
    const Point3& c = grid.cell_centers[i];
    const Complex3& e = emf.E_f[i];
    w.row({static_cast<Real>(i), c.x(), c.y(), c.z(), e.x().real(), e.x().imag(),
           e.y().real(), e.y().imag(), e.z().real(), e.z().imag()});
  }
  w.commit();
}

}  // namespace ph
