#include "plasmoheat/cluster.hpp"

#include "plasmoheat/csv.hpp"

#include <cmath>
#include <limits>

namespace ph {

Real DomainOmega::volume() const {
  if (kind == Kind::Box) return 8.0 * extent * extent * extent;
  return 4.0 * pi / 3.0 * extent * extent * extent;
}

bool DomainOmega::contains(const Point3& x) const {
  const Point3 r = x - center;
  if (kind == Kind::Box)
    return std::abs(r.x()) <= extent && std::abs(r.y()) <= extent &&
           std::abs(r.z()) <= extent;
  return r.norm() <= extent;
}

Real DomainOmega::diameter() const { return 2.0 * extent; }

Real lattice_spacing(Real delta, Real beta) {
  return std::pow(delta, 1.0 - beta / 3.0);
}

std::vector<Point3> lattice_centers(const DomainOmega& omega, Real d) {
  if (d <= 0.0) throw std::invalid_argument("lattice_centers: d must be positive");
  // Cells tile an axis-aligned bounding cube of Omega, anchored so the tiling
  // is centered; a cell survives if it lies wholly inside Omega.
  const Real half = omega.extent;
  const int n = static_cast<int>(std::floor(2.0 * half / d + 1e-12));
  std::vector<Point3> centers;
  if (n <= 0) return centers;
  const Real origin = -0.5 * n * d;  // centered tiling
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        const Point3 c = omega.center +
            Point3(origin + (ix + 0.5) * d, origin + (iy + 0.5) * d,
                   origin + (iz + 0.5) * d);
        bool inside = true;
        for (int corner = 0; corner < 8 && inside; ++corner) {
          const Point3 v = c + 0.5 * d * Point3((corner & 1) ? 1 : -1,
                                                (corner & 2) ? 1 : -1,
                                                (corner & 4) ? 1 : -1);
          inside = omega.contains(v);
        }
        if (inside) centers.push_back(c);
      }
  return centers;
}

ParticleCluster lattice_cluster(const DomainOmega& omega, Real delta, Real beta) {
  const Real d = lattice_spacing(delta, beta);
  if (d <= 2.0 * delta)
    throw std::invalid_argument(
        "lattice_cluster: spacing d = delta^(1-beta/3) <= 2 delta, particles overlap");
  ParticleCluster cl;
  cl.delta = delta;
  cl.centers = lattice_centers(omega, d);
  if (cl.centers.empty())
    throw std::invalid_argument("lattice_cluster: no cell of side d fits inside Omega");
  return cl;
}

Real min_center_spacing(const ParticleCluster& cl) {
  if (cl.M() < 2)
    throw std::invalid_argument("min_center_spacing: needs at least two particles");
  Real best = std::numeric_limits<Real>::infinity();
  for (int i = 0; i < cl.M(); ++i)
    for (int j = i + 1; j < cl.M(); ++j)
      best = std::min(best, (cl.centers[i] - cl.centers[j]).norm());
  return best;
}

Real min_distance(const ParticleCluster& cl) {
  return min_center_spacing(cl) - 2.0 * cl.delta;
}

Real pairwise_kernel_sums(const ParticleCluster& cl, Real p) {
  const int M = cl.M();
  if (M <= 1) return 0.0;
  Real worst = 0.0;
  for (int i = 0; i < M; ++i) {
    Real sum = 0.0;
    for (int j = 0; j < M; ++j) {
      if (j == i) continue;
      sum += std::pow((cl.centers[i] - cl.centers[j]).norm(), -p);
    }
    worst = std::max(worst, sum);
  }
  return worst;
}

void save_cluster_csv(const ParticleCluster& cl, const std::string& path) {
  CsvWriter w(path, {"x", "y", "z"});
  for (const auto& c : cl.centers) w.row({c.x(), c.y(), c.z()});
  w.commit();
}

ParticleCluster load_cluster_csv(const std::string& path, Real delta, Real vol_B) {
  ParticleCluster cl;
  cl.delta = delta;
  cl.vol_B = vol_B;
  for (const auto& row : read_csv(path)) {
    if (row.size() != 3)
      throw std::runtime_error("cluster csv: expected 3 columns x,y,z in " + path);
    cl.centers.emplace_back(row[0], row[1], row[2]);
  }
  if (cl.centers.empty())
    throw std::runtime_error("cluster csv: no particles in " + path);
  return cl;
}

}  // namespace ph
