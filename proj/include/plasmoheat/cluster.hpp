#pragma once

#include "plasmoheat/types.hpp"

namespace ph {

// Container domain Omega for lattice clusters and the effective cell grid.
struct DomainOmega {
  enum class Kind { Box, Ball };
  Kind kind = Kind::Box;
  Point3 center = Point3::Zero();
  Real extent = 0.5;  // half-width of the box, or radius of the ball

  Real volume() const;
  bool contains(const Point3& x) const;  // closed domain
  Real diameter() const;
};

// Particle cluster: centers z_i, radius scale delta, reference shape id.
// The paper's d is surface-to-surface; the minimal center spacing is kept
// alongside because the coupling kernels and the invertibility condition
// use center distances.
struct ParticleCluster {
  std::vector<Point3> centers;
  Real delta = 0.0;
  std::string shape_id = "ball";
  Real vol_B = 4.0 * pi / 3.0;

  int M() const { return static_cast<int>(centers.size()); }
  Real vol_particle() const { return vol_B * delta * delta * delta; }
};

// Periodic lattice: cubic cells of side d = delta^(1 - beta/3), one center
// per wholly contained cell. Cells cut by the boundary stay empty.
ParticleCluster lattice_cluster(const DomainOmega& omega, Real delta, Real beta);

// Cell centers of the same lattice (shared construction with lattice_cluster).
std::vector<Point3> lattice_centers(const DomainOmega& omega, Real d);

Real lattice_spacing(Real delta, Real beta);

// Minimal center spacing min_{i != j} |z_i - z_j|; throws for M < 2.
Real min_center_spacing(const ParticleCluster& cluster);

// The paper's d = min dist(D_i, D_j): minimal center spacing minus 2 delta.
Real min_distance(const ParticleCluster& cluster);

// max_i sum_{j != i} |z_i - z_j|^-p; 0 for M = 1.
Real pairwise_kernel_sums(const ParticleCluster& cluster, Real p);

void save_cluster_csv(const ParticleCluster& cluster, const std::string& path);
ParticleCluster load_cluster_csv(const std::string& path, Real delta,
                                 Real vol_B = 4.0 * pi / 3.0);

}  // namespace ph
