#pragma once

#include "plasmoheat/cluster.hpp"
#include "plasmoheat/materials.hpp"
#include "plasmoheat/maxwell.hpp"
#include "plasmoheat/polarization.hpp"
#include "plasmoheat/volterra.hpp"

namespace ph {

enum class RunMode { Resonance, Discrete, EffectiveEM, EffectiveHeat, Compare };

std::string to_string(RunMode mode);

struct WaveConfig {
  bool resonant = true;     // k = k_n0 + offset * delta^h
  Real k_fixed = 0.0;       // used when resonant is false
  Real resonant_offset = 0.0;
  Point3 theta = Point3::UnitZ();
  Point3 E0 = Point3::UnitX();
};

struct ScanConfig {
  Real k_min = 0.0;  // 0,0 means bracket k_n0 automatically
  Real k_max = 0.0;
  int steps = 200;
};

struct ProbeConfig {
  std::vector<Point3> points;  // from file, or generated from the ray spec
};

struct SimulationConfig {
  RunMode mode = RunMode::Discrete;
  MaterialParams material;
  bool lorentz_reduced = false;  // config asked for lorentz, reduced to drude
  WaveConfig wave;

  bool cluster_from_file = false;
  std::string centers_file;
  DomainOmega omega;  // lattice container (also the effective-medium domain)

  bool shape_from_file = false;
  std::string spectral_file;

  Modulation modulation;
  TimeGrid tgrid;

  ProbeConfig probes;
  ScanConfig scan;
  std::vector<Real> compare_deltas = {0.08, 0.05, 0.03};
  Real rho_min_factor = 5.0;

  // CLI-level switches
  std::string out_dir = ".";
  bool force = false;
  int threads = 1;

  ShapeSpectralData spectral() const;
  ParticleCluster make_cluster() const;
  // Resolved incidence frequency for a given particle scale.
  Real incidence_k(Real delta) const;
};

// Parses and validates; throws ConfigError carrying every violation found.
SimulationConfig parse_config(const std::string& path);

// Runs one mode; returns the process exit code (0 ok, 2 gate, 3 config,
// 4 solver). Artifacts land in config.out_dir, written via temp-then-rename
// only after the computation finished.
int run(const SimulationConfig& config);

// k-grid scan of the resonance gap; returns rows (k, |1 + eta lambda|).
struct ResonanceScan {
  std::vector<Real> k;
  std::vector<Real> gap;
  Real k_argmin;
  Real k_n0;
  Real zeta_n0;
};
ResonanceScan resonance_scan(const SimulationConfig& config);

}  // namespace ph
