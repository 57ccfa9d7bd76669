#include "plasmoheat/harness.hpp"

#include "plasmoheat/heat_field.hpp"
#include "plasmoheat/kernels.hpp"
#include "plasmoheat/parallel.hpp"
#include "plasmoheat/quadrature.hpp"

#include <cmath>
#include <numeric>

namespace ph {

MaterialParams rescale_material(const MaterialParams& base, Real delta) {
  MaterialParams p = base;
  const Real ratio = delta / base.delta;
  p.zeta = base.zeta * std::pow(ratio, base.h);
  p.gamma_p = base.gamma_m + (base.gamma_p - base.gamma_m) * std::pow(ratio, -base.beta);
  p.delta = delta;
  return p;
}

DiscreteRun run_discrete(const SimulationConfig& cfg, Real delta, bool with_heat) {
  DiscreteRun out;
  const auto spec = cfg.spectral();
  const MaterialParams params = rescale_material(cfg.material, delta);

  if (cfg.cluster_from_file) {
    out.cluster = load_cluster_csv(cfg.centers_file, delta, spec.vol_B);
  } else {
    out.cluster = lattice_cluster(cfg.omega, delta, params.beta);
    out.cluster.vol_B = spec.vol_B;
  }

  const auto res = resonant_frequency(spec.lambda_n0, params);
  out.k = cfg.wave.resonant
      ? res.k_n0 + cfg.wave.resonant_offset * std::pow(delta, params.h)
      : cfg.wave.k_fixed;

  IncidentWave wave{out.k, cfg.wave.theta, cfg.wave.E0};
  wave.validate();

  const auto contrasts = derive_contrasts(out.k, params, spec.vol_B);
  const ComplexMat3 P_Di = polarization_P_Di(spec, contrasts.eta, delta);
  std::vector<ComplexMat3> P_all(out.cluster.M(), P_Di);

  out.foldy_gate = check_foldy_invertibility(out.cluster, P_all, contrasts.eta);
  if (!out.foldy_gate.pass && !cfg.force)
    throw GateError("Foldy-Lax invertibility condition violated", out.foldy_gate.margin);

  out.dipoles = solve_foldy(assemble_foldy(out.cluster, P_all, contrasts.eta, wave,
                                           params.eps_m));

  const auto pb = polarization_P_B(spec, params, res.k_n0, res.zeta_n0);
  out.P_B = pb.P_B;
  out.C_B = pb.C_B;

  out.heat_gate = check_heat_invertibility(out.cluster, params);
  if (with_heat) {
    if (!out.heat_gate.pass && !cfg.force)
      throw GateError("heat solvability condition violated", out.heat_gate.margin);
    const auto F = heat_source_amplitudes(out.dipoles, out.P_B, params, contrasts,
                                          cfg.modulation, cfg.tgrid);
    out.traj = march_volterra(out.cluster, params, F, cfg.tgrid,
                              VolterraForm::SigmaDerivative, cfg.force);
  }
  return out;
}

EffectiveRun run_effective(const SimulationConfig& cfg, Real delta, bool with_heat) {
  EffectiveRun out;
  const auto spec = cfg.spectral();
  const MaterialParams params = rescale_material(cfg.material, delta);

  const Real d = lattice_spacing(delta, params.beta);
  out.grid = build_grid(cfg.omega, d);

  const auto res = resonant_frequency(spec.lambda_n0, params);
  const Real k = cfg.wave.resonant
      ? res.k_n0 + cfg.wave.resonant_offset * std::pow(delta, params.h)
      : cfg.wave.k_fixed;
  IncidentWave wave{k, cfg.wave.theta, cfg.wave.E0};
  wave.validate();

  const auto contrasts = derive_contrasts(k, params, spec.vol_B);
  const auto pb = polarization_P_B(spec, params, res.k_n0, res.zeta_n0);
  out.A_B = effective_polarization_A_B(pb.P_B, spec);
  out.b_bar = contrasts.b_bar;

  out.emf = solve_effective_maxwell(out.grid, out.A_B, wave, params.eps_m);

  if (with_heat) {
    const auto F = effective_heat_source(out.emf, out.A_B, pb.P_B, contrasts,
                                         cfg.modulation, cfg.tgrid);
    out.heat = march_effective_heat(out.grid, out.b_bar, F, params, cfg.tgrid);
  }
  return out;
}

Real compare_em_entry(const SimulationConfig& cfg, Real delta, int* M_out) {
  if (cfg.cluster_from_file)
    throw ConfigError({"compare: requires a lattice cluster (shared centers)"});
  const auto disc = run_discrete(cfg, delta, false);
  const auto eff = run_effective(cfg, delta, false);
  if (disc.cluster.M() != eff.grid.cells())
    throw SolverError("compare_em: lattice mismatch between the two models");
  const int M = disc.cluster.M();
  if (M_out) *M_out = M;

  Real num = 0.0, den = 0.0;
  for (int i = 0; i < M; ++i) {
    const Real qe = eff.emf.E_hat[i].squaredNorm();
    const Real qd = disc.dipoles.Q[i].squaredNorm();
    num += (qe - qd) * (qe - qd);
    den += qe * qe;
  }
  return std::sqrt(num / M) / std::sqrt(den / M);
}

Real compare_heat_entry(const SimulationConfig& cfg, Real delta, int* M_out) {
  if (cfg.probes.points.empty())
    throw ConfigError({"compare: probes required for the heat comparison"});
  for (size_t p = 0; p < cfg.probes.points.size(); ++p) {
    const Point3 r = cfg.probes.points[p] - cfg.omega.center;
    Real dist;
    if (cfg.omega.kind == DomainOmega::Kind::Box) {
      const Point3 excess = (r.cwiseAbs() - Point3::Constant(cfg.omega.extent)).cwiseMax(0.0);
      dist = excess.norm();
    } else {
      dist = std::max(0.0, r.norm() - cfg.omega.extent);
    }
    if (dist < 0.2 * cfg.omega.diameter())
      throw ConfigError({"compare: probe " + std::to_string(p) +
                         " closer than 0.2 diam(Omega) to Omega"});
  }

  const auto disc = run_discrete(cfg, delta, true);
  const auto eff = run_effective(cfg, delta, true);
  if (M_out) *M_out = disc.cluster.M();

  const MaterialParams params = rescale_material(cfg.material, delta);
  const auto usc = reconstruct_usc(disc.traj, disc.cluster, params, cfg.probes.points,
                                   cfg.tgrid, cfg.rho_min_factor * delta);
  const auto wsc = reconstruct_wsc(eff.heat.Y, eff.grid, eff.b_bar, params,
                                   cfg.probes.points, cfg.tgrid);

  const Real denom = wsc.values.cwiseAbs().maxCoeff();
  if (!(denom > 0.0))
    throw SolverError("compare_heat: effective field vanished, nothing to compare");
  return (usc.values - wsc.values).cwiseAbs().maxCoeff() / denom;
}

Real fit_loglog_rate(const std::vector<Real>& deltas, const std::vector<Real>& errors) {
  if (deltas.size() != errors.size() || deltas.size() < 2)
    throw std::invalid_argument("fit_loglog_rate: need matching sequences, length >= 2");
  // two smallest deltas carry double weight
  std::vector<size_t> idx(deltas.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](size_t a, size_t b) { return deltas[a] < deltas[b]; });
  std::vector<Real> w(deltas.size(), 1.0);
  w[idx[0]] = 2.0;
  if (deltas.size() > 1) w[idx[1]] = 2.0;

  Real sw = 0, sx = 0, sy = 0;
  for (size_t i = 0; i < deltas.size(); ++i) {
    sw += w[i];
    sx += w[i] * std::log(deltas[i]);
    sy += w[i] * std::log(std::max(errors[i], 1e-300));
  }
  const Real xbar = sx / sw, ybar = sy / sw;
  Real sxx = 0, sxy = 0;
  for (size_t i = 0; i < deltas.size(); ++i) {
    const Real dx = std::log(deltas[i]) - xbar;
    sxy += w[i] * dx * (std::log(std::max(errors[i], 1e-300)) - ybar);
    sxx += w[i] * dx * dx;
  }
  return sxy / sxx;
}

ComparisonReport run_comparison(const SimulationConfig& cfg) {
  std::vector<Real> deltas = cfg.compare_deltas;
  std::sort(deltas.rbegin(), deltas.rend());  // largest first

  ComparisonReport rep;
  std::vector<Real> em, heat;
  for (Real delta : deltas) {
    ComparisonEntry e;
    e.delta = delta;
    e.em_error = compare_em_entry(cfg, delta, &e.M);
    e.heat_error = compare_heat_entry(cfg, delta);
    rep.entries.push_back(e);
    em.push_back(e.em_error);
    heat.push_back(e.heat_error);
  }
  rep.em_rate = fit_loglog_rate(deltas, em);
  rep.heat_rate = fit_loglog_rate(deltas, heat);
  rep.em_decreasing = true;
  rep.heat_decreasing = true;
  for (size_t i = 1; i < rep.entries.size(); ++i) {
    rep.em_decreasing &= rep.entries[i].em_error < rep.entries[i - 1].em_error;
    rep.heat_decreasing &= rep.entries[i].heat_error < rep.entries[i - 1].heat_error;
  }
  return rep;
}

// --------------------------------------------------------------------
// Crank-Nicolson reference solver on an embedding box

namespace {

struct FdGrid {
  int n;        // intervals per side
  Real L;       // half width
  Real h;       // spacing
  int nodes1d;  // n + 1

  int id(int i, int j, int k) const { return (i * nodes1d + j) * nodes1d + k; }
  Point3 x(int i, int j, int k) const {
    return Point3(-L + i * h, -L + j * h, -L + k * h);
  }
  bool boundary(int i, int j, int k) const {
    return i == 0 || j == 0 || k == 0 || i == n || j == n || k == n;
  }
};

// 7-point Laplacian with homogeneous Dirichlet walls
void apply_A(const FdGrid& g, const Eigen::VectorXd& u, Eigen::VectorXd& out) {
  const Real ih2 = 1.0 / (g.h * g.h);
  parallel_for(g.nodes1d, [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i)
      for (int j = 0; j < g.nodes1d; ++j)
        for (int k = 0; k < g.nodes1d; ++k) {
          const int p = g.id(i, j, k);
          if (g.boundary(i, j, k)) {
            out(p) = u(p);
            continue;
          }
          out(p) = ih2 * (6.0 * u(p) - u(g.id(i - 1, j, k)) - u(g.id(i + 1, j, k)) -
                          u(g.id(i, j - 1, k)) - u(g.id(i, j + 1, k)) -
                          u(g.id(i, j, k - 1)) - u(g.id(i, j, k + 1)));
        }
  });
}

}  // namespace

Eigen::MatrixXd crank_nicolson_parabolic(const EffectiveGrid& grid, Real b_bar,
                                         const Eigen::MatrixXd& F_cells,
                                         const MaterialParams& params,
                                         const TimeGrid& tgrid, Real box_half_width,
                                         int intervals_per_side) {
  FdGrid g{intervals_per_side, box_half_width,
           2.0 * box_half_width / intervals_per_side, intervals_per_side + 1};
  const int N = g.nodes1d * g.nodes1d * g.nodes1d;
  const Real kappa = params.kappa_m();
  const Real dt = tgrid.dt();

  // node -> cell map, and capacity weighted by the fraction of the node's
  // dual cell inside Omega (interface nodes carry the average coefficient)
  const auto omega_fraction = [&](const Point3& x) -> Real {
    if (grid.omega.kind == DomainOmega::Kind::Box) {
      Real frac = 1.0;
      for (int a = 0; a < 3; ++a) {
        const Real lo = std::max(x[a] - 0.5 * g.h,
                                 grid.omega.center[a] - grid.omega.extent);
        const Real hi = std::min(x[a] + 0.5 * g.h,
                                 grid.omega.center[a] + grid.omega.extent);
        frac *= std::max(0.0, hi - lo) / g.h;
      }
      return frac;
    }
    int inside = 0;
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b)
        for (int c = 0; c < 5; ++c) {
          const Point3 y = x + g.h * Point3((a - 2) / 5.0, (b - 2) / 5.0, (c - 2) / 5.0);
          if (grid.omega.contains(y)) ++inside;
        }
    return inside / 125.0;
  };

  std::vector<int> cell_of(N, -1);
  Eigen::VectorXd cap(N), chi(N);
  for (int i = 0; i < g.nodes1d; ++i)
    for (int j = 0; j < g.nodes1d; ++j)
      for (int k = 0; k < g.nodes1d; ++k) {
        const int p = g.id(i, j, k);
        const Point3 x = g.x(i, j, k);
        chi(p) = omega_fraction(x);
        cap(p) = kappa * (1.0 + b_bar * chi(p));
        if (chi(p) > 0.0) {
          int best = -1;
          Real bd = std::numeric_limits<Real>::infinity();
          for (int c = 0; c < grid.cells(); ++c) {
            const Real dist = (x - grid.cell_centers[c]).norm();
            if (dist < bd) {
              bd = dist;
              best = c;
            }
          }
          if (bd <= 0.5 * std::sqrt(3.0) * grid.cell_size + g.h) cell_of[p] = best;
        }
      }

  Eigen::VectorXd W = Eigen::VectorXd::Zero(N);
  Eigen::VectorXd rhs(N), Au(N), r(N), z(N), pvec(N), Ap(N);

  // M_plus u = cap/dt u + A u / 2 (identity rows on the boundary)
  const auto apply_Mplus = [&](const Eigen::VectorXd& u, Eigen::VectorXd& out) {
    apply_A(g, u, out);
    parallel_for(N, [&](int lo, int hi) {
      for (int p = lo; p < hi; ++p) out(p) = 0.5 * out(p) + cap(p) / dt * u(p);
    });
  };
  Eigen::VectorXd diag(N);
  {
    const Real ih2 = 1.0 / (g.h * g.h);
    for (int p = 0; p < N; ++p) diag(p) = cap(p) / dt + 3.0 * ih2;
  }

  Eigen::MatrixXd samples(grid.cells(), tgrid.nodes());
  samples.setZero();

  for (int n = 0; n < tgrid.N_t; ++n) {
    // rhs = (cap/dt - A/2) W^n + source(t_{n+1/2})
    apply_A(g, W, Au);
    for (int p = 0; p < N; ++p) rhs(p) = cap(p) / dt * W(p) - 0.5 * Au(p);
    for (int i = 0; i < g.nodes1d; ++i)
      for (int j = 0; j < g.nodes1d; ++j)
        for (int k = 0; k < g.nodes1d; ++k) {
          const int p = g.id(i, j, k);
          if (g.boundary(i, j, k)) {
            rhs(p) = 0.0;
            continue;
          }
          if (cell_of[p] >= 0 && chi(p) > 0.0) {
            const Real f_half =
                0.5 * (F_cells(cell_of[p], n) + F_cells(cell_of[p], n + 1));
            rhs(p) += -kappa * b_bar * chi(p) * f_half;
          }
        }

    // Jacobi-preconditioned CG
    apply_Mplus(W, Au);
    r = rhs - Au;
    for (int p = 0; p < N; ++p) z(p) = r(p) / diag(p);
    pvec = z;
    Real rz = r.dot(z);
    const Real tol2 = std::max(1e-24, 1e-20 * rhs.squaredNorm());
    for (int it = 0; it < 500 && r.squaredNorm() > tol2; ++it) {
      apply_Mplus(pvec, Ap);
      const Real alpha = rz / pvec.dot(Ap);
      W += alpha * pvec;
      r -= alpha * Ap;
      for (int p = 0; p < N; ++p) z(p) = r(p) / diag(p);
      const Real rz_new = r.dot(z);
      pvec = z + (rz_new / rz) * pvec;
      rz = rz_new;
    }

    // sample at the cell centers (trilinear)
    for (int c = 0; c < grid.cells(); ++c) {
      const Point3 x = grid.cell_centers[c];
      const Real fi = (x.x() + g.L) / g.h, fj = (x.y() + g.L) / g.h,
                 fk = (x.z() + g.L) / g.h;
      const int i0 = std::clamp(static_cast<int>(std::floor(fi)), 0, g.n - 1);
      const int j0 = std::clamp(static_cast<int>(std::floor(fj)), 0, g.n - 1);
      const int k0 = std::clamp(static_cast<int>(std::floor(fk)), 0, g.n - 1);
      const Real wi = fi - i0, wj = fj - j0, wk = fk - k0;
      Real v = 0.0;
      for (int di = 0; di < 2; ++di)
        for (int dj = 0; dj < 2; ++dj)
          for (int dk = 0; dk < 2; ++dk)
            v += ((di ? wi : 1 - wi) * (dj ? wj : 1 - wj) * (dk ? wk : 1 - wk)) *
                 W(g.id(i0 + di, j0 + dj, k0 + dk));
      samples(c, n + 1) = v;
    }
  }
  return samples;
}

// --------------------------------------------------------------------
// Oracle suite

namespace {

// deterministic LCG for reproducible pseudo-random geometry
struct Lcg {
  uint64_t s;
  explicit Lcg(uint64_t seed) : s(seed) {}
  Real uniform() {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<Real>((s >> 11) & ((1ULL << 53) - 1)) / (1ULL << 53);
  }
  Real uniform(Real a, Real b) { return a + (b - a) * uniform(); }
};

struct OracleTol {
  const char* name;
  Real tol;
};

// Central table of oracle tolerances; every oracle below reads its entry.
constexpr OracleTol kOracleTolerances[] = {
    {"gaussian_mass", 1e-8},
    {"fd_hessian_dyadic", 1e-6},
    {"neumann_series_foldy", 1e-8},
    {"dense_collocation_volterra", 1e-6},
    {"crank_nicolson_effective_heat", 0.05},
    {"ball_eigen_oracle", 1e-5},
};

Real oracle_tol(const std::string& name) {
  for (const auto& e : kOracleTolerances)
    if (name == e.name) return e.tol;
  throw std::logic_error("oracle tolerance missing for " + name);
}

OracleResult oracle_gaussian_mass(Real kernel_bias) {
  Real worst = 0.0;
  for (Real kappa : {0.5, 1.0, 4.0 * pi}) {
    const Real t = 0.7;
    const Point3 origin = Point3::Zero();
    const auto radial = [&](Real r) {
      const Point3 x(r, 0.0, 0.0);
      return (1.0 + kernel_bias) * heat_kernel(x, t, origin, 0.0, kappa) * 4.0 * pi * r * r;
    };
    const Real rmax = 30.0 * std::sqrt(4.0 * t / kappa);
    const Real mass = adaptive_simpson(radial, 0.0, rmax, 1e-12);
    worst = std::max(worst, std::abs(mass - 1.0));
  }
  const Real tol = oracle_tol("gaussian_mass");
  return {"gaussian_mass", worst, tol, worst < tol,
          "adaptive quadrature of the kernel over R^3, kappa in {0.5, 1, 4pi}"};
}

OracleResult oracle_fd_hessian(int pairs) {
  Lcg rng(20240901);
  Real worst = 0.0;
  for (int trial = 0; trial < pairs; ++trial) {
    const Real k = (trial % 2 == 0) ? 0.0 : rng.uniform(0.5, 2.5);
    Point3 x(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    Point3 y(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    if ((x - y).norm() < 0.5) y += Point3(1.0, 0.7, -0.4);
    const Real r = (x - y).norm();
    const Real step = 1e-4 * r;

    ComplexMat3 fd;
    const auto G = [&](const Point3& p) { return helmholtz_green(k, p, y); };
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        Point3 ea = Point3::Zero(), eb = Point3::Zero();
        ea(a) = step;
        eb(b) = step;
        if (a == b) {
          fd(a, b) = (G(x + ea) - 2.0 * G(x) + G(x - ea)) / (step * step);
        } else {
          fd(a, b) = (G(x + ea + eb) - G(x + ea - eb) - G(x - ea + eb) +
                      G(x - ea - eb)) /
                     (4.0 * step * step);
        }
      }
    fd += k * k * G(x) * ComplexMat3::Identity();
    const ComplexMat3 exact = dyadic_green(k, x, y);
    worst = std::max(worst, (fd - exact).norm() / exact.norm());
  }
  const Real tol = oracle_tol("fd_hessian_dyadic");
  return {"fd_hessian_dyadic", worst, tol, worst < tol,
          "central-difference Hessian of the Helmholtz kernel at random pairs"};
}

OracleResult oracle_neumann_series() {
  Lcg rng(77001);
  ParticleCluster cl;
  cl.delta = 0.05;
  while (cl.M() < 12) {
    const Point3 c(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5),
                   rng.uniform(-0.5, 0.5));
    bool ok = true;
    for (const auto& z : cl.centers) ok &= (z - c).norm() > 0.35;
    if (ok) cl.centers.push_back(c);
  }
  const auto spec = ball_spectral_data();
  const Complex eta(-2.5, 0.8);
  const ComplexMat3 P = polarization_P_Di(spec, eta, cl.delta);
  std::vector<ComplexMat3> P_all(cl.M(), P);
  IncidentWave wave{1.7, Point3::UnitZ(), Point3::UnitX()};

  const auto gate = check_foldy_invertibility(cl, P_all, eta);
  if (!(gate.margin > 0.5))
    return {"neumann_series_foldy", 1.0, oracle_tol("neumann_series_foldy"), false,
            "construction failed: contraction margin " + std::to_string(gate.margin)};

  const auto sys = assemble_foldy(cl, P_all, eta, wave, Complex(1.0, 0.0));
  const auto lu_sol = solve_foldy(sys);

  // fixed point q <- rhs + (I - A) q, contraction by the margin
  Eigen::VectorXcd q = sys.rhs;
  for (int it = 0; it < 400; ++it) {
    Eigen::VectorXcd next = sys.rhs + q - sys.A * q;
    if ((next - q).norm() < 1e-14 * q.norm()) {
      q = next;
      break;
    }
    q = next;
  }
  Real diff2 = 0.0, norm2 = 0.0;
  for (int i = 0; i < sys.M; ++i) {
    diff2 += (q.segment<3>(3 * i) - lu_sol.Q[i]).squaredNorm();
    norm2 += lu_sol.Q[i].squaredNorm();
  }
  const Real err = std::sqrt(diff2 / norm2);
  const Real tol = oracle_tol("neumann_series_foldy");
  return {"neumann_series_foldy", err, tol, err < tol,
          "fixed-point iteration vs dense LU, margin " + std::to_string(gate.margin)};
}

// independently coded collocation weights (adaptive Simpson, not the
// production Gauss-Legendre path)
Real colloc_weight(Real r2, Real kappa, Real a, Real b) {
  return adaptive_simpson(
      [&](Real s) {
        if (s <= 0.0) return 0.0;
        return std::pow(kappa / (4.0 * pi * s), 1.5) *
               std::exp(-kappa * r2 / (4.0 * s));
      },
      a, b, 1e-14);
}

OracleResult oracle_dense_collocation() {
  Lcg rng(99017);
  ParticleCluster cl;
  cl.delta = 0.1;
  while (cl.M() < 3) {
    const Point3 c(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4),
                   rng.uniform(-0.4, 0.4));
    bool ok = true;
    for (const auto& z : cl.centers) ok &= (z - c).norm() > 0.45;
    if (ok) cl.centers.push_back(c);
  }
  MaterialParams params;
  params.gamma_m = 1.0;
  params.gamma_p = 6.0;
  params.c_m = 1.0;
  params.delta = cl.delta;

  TimeGrid tg{0.6, 200};
  Modulation mod{2, 0.5, tg.T};
  const int M = cl.M();
  Eigen::MatrixXd F(M, tg.nodes());
  for (int i = 0; i < M; ++i)
    for (int n = 0; n < tg.nodes(); ++n)
      F(i, n) = (1.0 + 0.3 * i) * modulation_f(tg.t(n), mod);

  const auto traj = march_volterra(cl, params, F, tg);

  // dense space-time collocation: unknowns sigma(i, n), n = 1..N_t
  const Real b = heat_coupling_b(params, cl);
  const Real kappa = params.kappa_m();
  const Real dt = tg.dt();
  const int NU = M * tg.N_t;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(NU, NU);
  Eigen::VectorXd rhs(NU);
  const auto uid = [&](int i, int n) { return i * tg.N_t + (n - 1); };
  for (int i = 0; i < M; ++i)
    for (int n = 1; n <= tg.N_t; ++n) {
      const int row = uid(i, n);
      A(row, uid(i, n)) += 1.0;
      rhs(row) = F(i, n);
      for (int j = 0; j < M; ++j) {
        if (j == i) continue;
        const Real r2 = (cl.centers[i] - cl.centers[j]).squaredNorm();
        for (int m = 0; m < n; ++m) {
          const Real w =
              colloc_weight(r2, kappa, (n - m - 1) * dt, (n - m) * dt) / dt;
          if (m >= 1) A(row, uid(j, m)) -= b * w;
          A(row, uid(j, m + 1)) += b * w;
        }
      }
    }
  const Eigen::VectorXd sol = A.partialPivLu().solve(rhs);

  Real diff2 = 0.0, norm2 = 0.0;
  for (int i = 0; i < M; ++i)
    for (int n = 1; n <= tg.N_t; ++n) {
      const Real s = sol(uid(i, n));
      diff2 += (s - traj.sigma(i, n)) * (s - traj.sigma(i, n));
      norm2 += s * s;
    }
  const Real err = std::sqrt(diff2 / norm2);
  const Real tol = oracle_tol("dense_collocation_volterra");
  return {"dense_collocation_volterra", err, tol, err < tol,
          "full space-time system vs time marching, M=3, N_t=200"};
}

OracleResult oracle_crank_nicolson() {
  DomainOmega omega;
  omega.kind = DomainOmega::Kind::Box;
  omega.extent = 0.5;
  const auto grid = build_grid(omega, 0.25);  // 4^3 cells

  MaterialParams params;
  params.c_m = params.gamma_m = 1.0;  // kappa_m = 1
  TimeGrid tg{0.5, 200};
  Modulation mod{2, 0.4, tg.T};
  const Real b_bar = 0.6;

  // smooth-in-space, causal-in-time synthetic source
  Eigen::MatrixXd F(grid.cells(), tg.nodes());
  for (int c = 0; c < grid.cells(); ++c) {
    const Real amp = std::exp(-2.0 * grid.cell_centers[c].squaredNorm());
    for (int n = 0; n < tg.nodes(); ++n)
      F(c, n) = amp * modulation_f(tg.t(n), mod) * 40.0;
  }

  const auto field = march_effective_heat(grid, b_bar, F, params, tg);
  const auto cn = crank_nicolson_parabolic(grid, b_bar, F, params, tg, 3.0, 48);

  const Real err = (field.W_interior - cn).norm() / cn.norm();
  const Real tol = oracle_tol("crank_nicolson_effective_heat");
  return {"crank_nicolson_effective_heat", err, tol, err < tol,
          "cell potential vs 48^3 Crank-Nicolson finite differences"};
}

// Newtonian potential of the unit ball by nested adaptive quadrature; the
// magnetization operator restricted to constant gradients is -Hess N.
Real ball_newtonian_potential(Real r) {
  return adaptive_simpson(
      [&](Real rp) {
        const Real inner = adaptive_simpson(
            [&](Real u) {
              const Real d2 = r * r + rp * rp - 2.0 * r * rp * u;
              return 1.0 / std::sqrt(std::max(d2, 1e-300));
            },
            -1.0, 1.0, 1e-12);
        return 0.5 * rp * rp * inner;
      },
      0.0, 1.0, 1e-11);
}

OracleResult oracle_ball_eigen() {
  // Hessian of N at an interior point by finite differences of the radial
  // profile: N(x) = N(|x|), Hess = N''(r) rhat rhat^T + N'(r)/r (I - rhat rhat^T)
  const Real r0 = 0.37;
  const Real hstep = 2e-3;
  const auto N = [&](Real r) { return ball_newtonian_potential(r); };
  const Real d1 = (N(r0 + hstep) - N(r0 - hstep)) / (2.0 * hstep);
  const Real d2 = (N(r0 + hstep) - 2.0 * N(r0) + N(r0 - hstep)) / (hstep * hstep);

  const Point3 rhat = Point3(1.0, 2.0, -1.0).normalized();
  RealMat3 hess = d2 * rhat * rhat.transpose() +
                  d1 / r0 * (RealMat3::Identity() - rhat * rhat.transpose());

  const auto spec = ball_spectral_data();
  Real worst = (hess - spec.newtonian_hessian_avg).norm();

  // Galerkin eigenvalue on the constant-gradient subspace:
  // lambda = <-Hess N e, e> / <e, e> with Hess N constant inside the ball
  const Real lambda_oracle = -hess.trace() / 3.0;
  worst = std::max(worst, std::abs(lambda_oracle - spec.lambda_n0));

  // moment sum of the normalized constant modes must be vol(B) I
  worst = std::max(
      worst, (spec.moment_outer_sum() - spec.vol_B * RealMat3::Identity()).norm());

  const Real tol = oracle_tol("ball_eigen_oracle");
  return {"ball_eigen_oracle", worst, tol, worst < tol,
          "quadrature Newtonian potential: Hessian, eigenvalue, moment sum"};
}

}  // namespace

OracleReport run_oracles(const OracleHooks& hooks) {
  OracleReport rep;
  rep.results.push_back(oracle_gaussian_mass(hooks.kernel_bias));
  rep.results.push_back(oracle_fd_hessian(20));
  rep.results.push_back(oracle_neumann_series());
  rep.results.push_back(oracle_dense_collocation());
  rep.results.push_back(oracle_crank_nicolson());
  rep.results.push_back(oracle_ball_eigen());
  return rep;
}

}  // namespace ph
