#include "plasmoheat/maxwell.hpp"

#include "plasmoheat/csv.hpp"
#include "plasmoheat/kernels.hpp"
#include "plasmoheat/parallel.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <atomic>
#include <cmath>

namespace ph {

namespace {
std::atomic<int> g_threads{1};
}
void set_thread_count(int n) { g_threads.store(std::max(1, n)); }
int thread_count() { return g_threads.load(); }

void IncidentWave::validate() const {
  if (std::abs(theta.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("incident wave: |theta| != 1");
  if (std::abs(E0.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("incident wave: |E0| != 1");
  if (std::abs(theta.dot(E0)) > 1e-12)
    throw std::invalid_argument("incident wave: polarization not transverse");
  if (!(k > 0.0)) throw std::invalid_argument("incident wave: k must be > 0");
}

Complex3 incident_field(const IncidentWave& wave, Complex eps_m, const Point3& x) {
  const Real kw = wave.k * std::sqrt(std::max(0.0, eps_m.real()));
  return std::exp(Complex(0.0, kw * wave.theta.dot(x))) * wave.E0.cast<Complex>();
}

FoldySystem assemble_foldy(const ParticleCluster& cluster,
                           const std::vector<ComplexMat3>& P_Di, Complex eta,
                           const IncidentWave& wave, Complex eps_m) {
  const int M = cluster.M();
  if (static_cast<int>(P_Di.size()) != M)
    throw std::invalid_argument("assemble_foldy: one polarization matrix per particle");
  for (int i = 0; i < M; ++i)
    for (int j = i + 1; j < M; ++j)
      if ((cluster.centers[i] - cluster.centers[j]).norm() == 0.0)
        throw std::invalid_argument("assemble_foldy: coincident centers");

  FoldySystem sys;
  sys.M = M;
  sys.A = Eigen::MatrixXcd::Identity(3 * M, 3 * M);
  sys.rhs.resize(3 * M);
  const Real kw = wave.k * std::sqrt(std::max(0.0, eps_m.real()));

  parallel_for(M, [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      sys.rhs.segment<3>(3 * i) = incident_field(wave, eps_m, cluster.centers[i]);
      for (int j = 0; j < M; ++j) {
        if (j == i) continue;
        const ComplexMat3 ups = dyadic_green(kw, cluster.centers[i], cluster.centers[j]);
        sys.A.block<3, 3>(3 * i, 3 * j) = -eta * (ups * P_Di[j]);
      }
    }
  });
  return sys;
}

InvertibilityCheck check_foldy_invertibility(const ParticleCluster& cluster,
                                             const std::vector<ComplexMat3>& P_Di,
                                             Complex eta) {
  Real pmax = 0.0;
  for (const auto& P : P_Di) pmax = std::max(pmax, P.jacobiSvd().singularValues()(0));
  Real quantity = 0.0;
  if (cluster.M() >= 2) {
    const Real d = min_center_spacing(cluster);
    quantity = std::abs(eta) * pmax / (d * d * d);
  }
  return {quantity < 1.0, 1.0 - quantity, quantity};
}

DipoleSet solve_foldy(const FoldySystem& sys) {
  const int n = static_cast<int>(sys.A.rows());
  Eigen::VectorXcd q;
  if (n <= 3000) {
    q = sys.A.partialPivLu().solve(sys.rhs);
  } else {
    Eigen::BiCGSTAB<Eigen::MatrixXcd> solver(sys.A);
    solver.setTolerance(1e-12);
    q = solver.solve(sys.rhs);
  }
  const Real res = (sys.A * q - sys.rhs).norm();
  const Real rel = res / std::max(1e-300, sys.rhs.norm());
  if (!(rel < 1e-10))
    throw SolverError("solve_foldy: relative residual " + std::to_string(rel), rel);

  DipoleSet out;
  out.Q.resize(sys.M);
  for (int i = 0; i < sys.M; ++i) out.Q[i] = q.segment<3>(3 * i);
  return out;
}

void save_dipoles_csv(const DipoleSet& dipoles, const std::string& path) {
  CsvWriter w(path, {"particle", "re_qx", "im_qx", "re_qy", "im_qy", "re_qz", "im_qz"});
  for (size_t i = 0; i < dipoles.Q.size(); ++i) {
    const Complex3& q = dipoles.Q[i];
    w.row({static_cast<Real>(i), q.x().real(), q.x().imag(), q.y().real(),
           q.y().imag(), q.z().real(), q.z().imag()});
  }
  w.commit();
}

}  // namespace ph
