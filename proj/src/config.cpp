#include "plasmoheat/config.hpp"

#include "plasmoheat/csv.hpp"
#include "plasmoheat/harness.hpp"
#include "plasmoheat/heat_field.hpp"
#include "plasmoheat/parallel.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ph {

using nlohmann::json;

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::Resonance: return "resonance";
    case RunMode::Discrete: return "discrete";
    case RunMode::EffectiveEM: return "effective-em";
    case RunMode::EffectiveHeat: return "effective-heat";
    case RunMode::Compare: return "compare";
  }
  return "?";
}

ShapeSpectralData SimulationConfig::spectral() const {
  return shape_from_file ? load_spectral_csv(spectral_file) : ball_spectral_data();
}

ParticleCluster SimulationConfig::make_cluster() const {
  if (cluster_from_file) {
    auto cl = load_cluster_csv(centers_file, material.delta, spectral().vol_B);
    return cl;
  }
  auto cl = lattice_cluster(omega, material.delta, material.beta);
  cl.vol_B = spectral().vol_B;
  return cl;
}

Real SimulationConfig::incidence_k(Real delta) const {
  if (!wave.resonant) return wave.k_fixed;
  const auto res = resonant_frequency(spectral().lambda_n0, material);
  return res.k_n0 + wave.resonant_offset * std::pow(delta, material.h);
}

namespace {

Point3 parse_vec3(const json& j, const std::string& name,
                  std::vector<std::string>& errs) {
  if (!j.is_array() || j.size() != 3) {
    errs.push_back(name + ": expected an array of 3 numbers");
    return Point3::Zero();
  }
  return Point3(j[0].get<Real>(), j[1].get<Real>(), j[2].get<Real>());
}

template <typename T>
T get_or(const json& j, const std::string& key, T def) {
  if (j.contains(key)) return j.at(key).get<T>();
  return def;
}

void require(const json& j, const std::string& key, const std::string& where,
             std::vector<std::string>& errs) {
  if (!j.contains(key)) errs.push_back(where + ": missing required field '" + key + "'");
}

}  // namespace

SimulationConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> errs;
  if (!in) throw ConfigError({"cannot open config file " + path});
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("json parse error: ") + e.what()});
  }

  SimulationConfig cfg;

  if (j.contains("mode")) {
    const std::string m = j["mode"].get<std::string>();
    if (m == "resonance") cfg.mode = RunMode::Resonance;
    else if (m == "discrete") cfg.mode = RunMode::Discrete;
    else if (m == "effective-em") cfg.mode = RunMode::EffectiveEM;
    else if (m == "effective-heat") cfg.mode = RunMode::EffectiveHeat;
    else if (m == "compare") cfg.mode = RunMode::Compare;
    else errs.push_back("mode: unknown mode '" + m + "'");
  }

  // ---- material ----
  if (!j.contains("material")) {
    errs.push_back("material: missing block");
  } else {
    const json& m = j["material"];
    MaterialParams& p = cfg.material;
    const std::string model = get_or<std::string>(m, "model", "drude");
    if (model == "lorentz") {
      cfg.lorentz_reduced = true;  // k_0 -> 0 reduction, warned in run()
    } else if (model != "drude") {
      errs.push_back("material.model: expected 'drude' or 'lorentz'");
    }
    p.eps_inf = get_or<Real>(m, "eps_inf", 1.0);
    p.eps0_drude = get_or<Real>(m, "eps0", 9.84);
    p.k_p = get_or<Real>(m, "k_p", 9.096);
    p.zeta = get_or<Real>(m, "zeta", 0.0);
    if (m.contains("eps_m")) {
      const json& em = m["eps_m"];
      if (em.is_number()) {
        p.eps_m = Complex(em.get<Real>(), 0.0);
      } else if (em.is_array() && em.size() == 2) {
        p.eps_m = Complex(em[0].get<Real>(), em[1].get<Real>());
      } else {
        errs.push_back("material.eps_m: number or [re, im] pair expected");
      }
    }
    p.gamma_m = get_or<Real>(m, "gamma_m", 1.0);
    p.gamma_p = get_or<Real>(m, "gamma_p", 10.0);
    p.c_m = get_or<Real>(m, "c_m", 1.0);
    p.c_p = get_or<Real>(m, "c_p", 1.0);
    p.h = get_or<Real>(m, "h", 1.9);
    p.beta = get_or<Real>(m, "beta", 1.9);
    require(m, "delta", "material", errs);
    p.delta = get_or<Real>(m, "delta", 0.05);

    if (!(p.eps_inf > 0.0)) errs.push_back("material.eps_inf: must be > 0");
    if (!(p.eps0_drude > 0.0)) errs.push_back("material.eps0: must be > 0");
    if (!(p.k_p > 0.0)) errs.push_back("material.k_p: must be > 0");
    if (p.zeta < 0.0) errs.push_back("material.zeta: must be >= 0");
    if (p.eps_m.imag() < 0.0) errs.push_back("material.eps_m: Im eps_m must be >= 0");
    if (!(p.gamma_m > 0.0)) errs.push_back("material.gamma_m: must be > 0");
    if (!(p.gamma_p > 0.0)) errs.push_back("material.gamma_p: must be > 0");
    if (!(p.c_m > 0.0)) errs.push_back("material.c_m: must be > 0");
    if (!(p.c_p > 0.0)) errs.push_back("material.c_p: must be > 0");
    if (!(p.delta > 0.0)) errs.push_back("material.delta: must be > 0");
  }

  // ---- wave ----
  if (j.contains("wave")) {
    const json& w = j["wave"];
    if (w.contains("k")) {
      if (w["k"].is_string()) {
        if (w["k"].get<std::string>() != "resonant")
          errs.push_back("wave.k: number or the string 'resonant'");
        cfg.wave.resonant = true;
      } else {
        cfg.wave.resonant = false;
        cfg.wave.k_fixed = w["k"].get<Real>();
        if (!(cfg.wave.k_fixed > 0.0)) errs.push_back("wave.k: must be > 0");
      }
    }
    cfg.wave.resonant_offset = get_or<Real>(w, "resonant_offset", 0.0);
    if (w.contains("theta")) cfg.wave.theta = parse_vec3(w["theta"], "wave.theta", errs);
    if (w.contains("E0")) cfg.wave.E0 = parse_vec3(w["E0"], "wave.E0", errs);
    if (std::abs(cfg.wave.theta.norm() - 1.0) > 1e-12)
      errs.push_back("wave.theta: must be a unit vector");
    if (std::abs(cfg.wave.E0.norm() - 1.0) > 1e-12)
      errs.push_back("wave.E0: must be a unit vector");
    if (std::abs(cfg.wave.theta.dot(cfg.wave.E0)) > 1e-12)
      errs.push_back("wave: polarization not transverse (theta . E0 != 0)");
  }

  // ---- cluster ----
  if (!j.contains("cluster")) {
    errs.push_back("cluster: missing block (lattice or centers_file)");
  } else {
    const json& c = j["cluster"];
    const bool has_file = c.contains("centers_file");
    const bool has_lattice = c.contains("lattice");
    if (has_file == has_lattice) {
      errs.push_back("cluster: exactly one of centers_file / lattice required");
    } else if (has_file) {
      cfg.cluster_from_file = true;
      cfg.centers_file = c["centers_file"].get<std::string>();
    } else {
      const json& l = c["lattice"];
      if (l.contains("omega")) {
        const json& o = l["omega"];
        const std::string kind = get_or<std::string>(o, "kind", "box");
        if (kind == "box") cfg.omega.kind = DomainOmega::Kind::Box;
        else if (kind == "ball") cfg.omega.kind = DomainOmega::Kind::Ball;
        else errs.push_back("cluster.lattice.omega.kind: 'box' or 'ball'");
        if (o.contains("center"))
          cfg.omega.center = parse_vec3(o["center"], "omega.center", errs);
        cfg.omega.extent = get_or<Real>(o, "extent", 0.5);
        if (!(cfg.omega.extent > 0.0))
          errs.push_back("cluster.lattice.omega.extent: must be > 0");
      }
      // delta/beta may be restated here; they must agree with material
      if (l.contains("delta") && cfg.material.delta > 0.0 &&
          l["delta"].get<Real>() != cfg.material.delta)
        errs.push_back("cluster.lattice.delta: conflicts with material.delta");
      if (l.contains("beta") && l["beta"].get<Real>() != cfg.material.beta)
        errs.push_back("cluster.lattice.beta: conflicts with material.beta");
    }
  }

  // ---- shape ----
  if (j.contains("shape")) {
    const json& s = j["shape"];
    if (s.contains("spectral_file")) {
      cfg.shape_from_file = true;
      cfg.spectral_file = s["spectral_file"].get<std::string>();
    }
  }

  // ---- time ----
  if (!j.contains("time")) {
    errs.push_back("time: missing block");
  } else {
    const json& t = j["time"];
    require(t, "T", "time", errs);
    cfg.tgrid.T = get_or<Real>(t, "T", 1.0);
    cfg.tgrid.N_t = get_or<int>(t, "N_t", 100);
    cfg.modulation.r = get_or<int>(t, "r", 2);
    cfg.modulation.ell = get_or<Real>(t, "ell", 0.5 * cfg.tgrid.T);
    cfg.modulation.T = cfg.tgrid.T;
    if (!(cfg.tgrid.T > 0.0)) errs.push_back("time.T: must be > 0");
    if (cfg.tgrid.N_t < 2) errs.push_back("time.N_t: must be >= 2");
    if (cfg.modulation.r < 0) errs.push_back("time.r: must be >= 0");
    if (!(cfg.modulation.ell > 0.0)) errs.push_back("time.ell: must be > 0");
  }

  // ---- probes ----
  if (j.contains("probes")) {
    const json& p = j["probes"];
    if (p.contains("points_file")) {
      try {
        for (const auto& row : read_csv(p["points_file"].get<std::string>())) {
          if (row.size() != 3) {
            errs.push_back("probes.points_file: rows must have 3 columns");
            break;
          }
          cfg.probes.points.emplace_back(row[0], row[1], row[2]);
        }
      } catch (const std::exception& e) {
        errs.push_back(std::string("probes.points_file: ") + e.what());
      }
    } else if (p.contains("ray")) {
      const json& r = p["ray"];
      std::vector<std::string> rerrs;
      const Point3 origin = parse_vec3(r.at("origin"), "probes.ray.origin", rerrs);
      Point3 dir = parse_vec3(r.at("direction"), "probes.ray.direction", rerrs);
      errs.insert(errs.end(), rerrs.begin(), rerrs.end());
      const int count = get_or<int>(r, "count", 5);
      const Real spacing = get_or<Real>(r, "spacing", 0.2);
      if (dir.norm() == 0.0) {
        errs.push_back("probes.ray.direction: zero vector");
      } else {
        dir.normalize();
        for (int i = 0; i < count; ++i)
          cfg.probes.points.push_back(origin + i * spacing * dir);
      }
    } else {
      errs.push_back("probes: points_file or ray required");
    }
  }

  // ---- scan / compare ----
  if (j.contains("scan")) {
    const json& s = j["scan"];
    cfg.scan.k_min = get_or<Real>(s, "k_min", 0.0);
    cfg.scan.k_max = get_or<Real>(s, "k_max", 0.0);
    cfg.scan.steps = get_or<int>(s, "steps", 200);
    if (cfg.scan.steps < 1) errs.push_back("scan.steps: must be >= 1");
    if (cfg.scan.k_max < cfg.scan.k_min)
      errs.push_back("scan: k_max must be >= k_min");
  }
  if (j.contains("compare") && j["compare"].contains("deltas")) {
    cfg.compare_deltas.clear();
    for (const auto& d : j["compare"]["deltas"]) {
      cfg.compare_deltas.push_back(d.get<Real>());
      if (!(cfg.compare_deltas.back() > 0.0))
        errs.push_back("compare.deltas: entries must be > 0");
    }
    if (cfg.compare_deltas.empty()) errs.push_back("compare.deltas: empty list");
  }
  cfg.rho_min_factor = get_or<Real>(j, "rho_min_factor", 5.0);

  if (!errs.empty()) throw ConfigError(errs);
  return cfg;
}

ResonanceScan resonance_scan(const SimulationConfig& cfg) {
  const auto spec = cfg.spectral();
  const auto res = resonant_frequency(spec.lambda_n0, cfg.material);
  ResonanceScan out;
  out.k_n0 = res.k_n0;
  out.zeta_n0 = res.zeta_n0;
  Real k_min = cfg.scan.k_min, k_max = cfg.scan.k_max;
  if (k_min == 0.0 && k_max == 0.0) {
    k_min = 0.8 * res.k_n0;
    k_max = 1.2 * res.k_n0;
  }
  const int steps = cfg.scan.steps;
  Real best_gap = std::numeric_limits<Real>::infinity();
  out.k_argmin = k_min;
  for (int i = 0; i < steps; ++i) {
    const Real k = steps == 1 ? k_min : k_min + (k_max - k_min) * i / (steps - 1);
    const Real g = resonance_gap(k, cfg.material.zeta, spec.lambda_n0, cfg.material);
    out.k.push_back(k);
    out.gap.push_back(g);
    if (g < best_gap) {
      best_gap = g;
      out.k_argmin = k;
    }
  }
  return out;
}

namespace {

std::string diag_order(const std::string& label, Real value) {
  std::ostringstream os;
  os << "  " << label << " ~= " << format_real(value) << "\n";
  return os.str();
}

void print_regime(std::ostream& os, const RegimeReport& rep) {
  for (const auto& c : rep.checks)
    os << "  [" << (c.pass ? "ok" : "warn") << "] " << c.name << ": " << c.detail
       << "\n";
}

}  // namespace

int run(const SimulationConfig& cfg) {
  set_thread_count(cfg.threads);
  std::filesystem::create_directories(cfg.out_dir);
  const auto path = [&](const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
  };
  std::ostringstream summary;
  summary << "plasmoheat " << to_string(cfg.mode) << "\n";
  if (cfg.lorentz_reduced)
    summary << "  warning: lorentz model reduced to drude (k_0 -> 0)\n";

  try {
    const auto spec = cfg.spectral();
    if (cfg.mode == RunMode::Resonance) {
      const auto scan = resonance_scan(cfg);
      CsvWriter w(path("resonance.csv"), {"k", "gap"});
      for (size_t i = 0; i < scan.k.size(); ++i) w.row({scan.k[i], scan.gap[i]});
      w.commit();
      summary << "  k_n0 = " << format_real(scan.k_n0)
              << ", zeta_n0 = " << format_real(scan.zeta_n0)
              << ", grid argmin = " << format_real(scan.k_argmin) << "\n";
      std::cout << summary.str();
      return 0;
    }

    const Real delta = cfg.material.delta;
    if (std::abs(cfg.omega.volume() - 1.0) > 0.5 && !cfg.cluster_from_file)
      summary << "  warning: Omega volume " << format_real(cfg.omega.volume())
              << " far from the unit volume of the effective model\n";

    if (cfg.mode == RunMode::Discrete) {
      auto runr = run_discrete(cfg, delta, true);
      summary << "  M = " << runr.cluster.M() << ", k = " << format_real(runr.k) << "\n";
      summary << "  foldy margin = " << format_real(runr.foldy_gate.margin)
              << (runr.foldy_gate.pass ? " (pass)" : " (VIOLATED)") << "\n";
      summary << "  heat margin = " << format_real(runr.heat_gate.margin)
              << (runr.heat_gate.pass ? " (pass)" : " (VIOLATED)") << "\n";
      const Real lam = runr.cluster.M() > 1
          ? std::log(min_center_spacing(runr.cluster)) / std::log(delta)
          : 0.0;
      summary << "  remainder diagnostics:\n";
      summary << diag_order("O(M delta^(4-h))",
                            runr.cluster.M() * std::pow(delta, 4.0 - cfg.material.h));
      summary << diag_order(
          "O(delta^(min{4-h, 7-2h-4lambda}))",
          std::pow(delta, std::min(4.0 - cfg.material.h,
                                   7.0 - 2.0 * cfg.material.h - 4.0 * lam)));
      summary << diag_order(
          "O(delta^(4+beta-h) sum d_ij^-3)",
          std::pow(delta, 4.0 + cfg.material.beta - cfg.material.h) *
              pairwise_kernel_sums(runr.cluster, 3.0));
      ClusterSummary cs;
      cs.M = runr.cluster.M();
      cs.d_center = cs.M > 1 ? min_center_spacing(runr.cluster) : 0.0;
      cs.omega_volume = cfg.cluster_from_file ? 1.0 : cfg.omega.volume();
      cs.effective_mode = false;
      print_regime(summary, validate_regime(cfg.material, cs));

      save_dipoles_csv(runr.dipoles, path("dipoles.csv"));
      save_sigma_csv(runr.traj, cfg.tgrid, path("sigma.csv"));
      if (!cfg.probes.points.empty()) {
        const auto usc =
            reconstruct_usc(runr.traj, runr.cluster, cfg.material, cfg.probes.points,
                            cfg.tgrid, cfg.rho_min_factor * delta);
        save_field_csv(usc, cfg.tgrid, path("usc.csv"));
      }
      std::cout << summary.str();
      return 0;
    }

    if (cfg.mode == RunMode::EffectiveEM || cfg.mode == RunMode::EffectiveHeat) {
      auto runr = run_effective(cfg, delta, cfg.mode == RunMode::EffectiveHeat);
      summary << "  cells = " << runr.grid.cells()
              << ", d = " << format_real(runr.grid.cell_size) << "\n";
      summary << "  A_B diag = " << format_real(runr.A_B(0, 0))
              << ", b_bar = " << format_real(runr.b_bar) << "\n";
      save_em_field_csv(runr.emf, runr.grid, path("ef.csv"));
      if (cfg.mode == RunMode::EffectiveHeat) {
        save_effective_field_csv(runr.heat.Y, runr.grid, cfg.tgrid, path("y.csv"));
        if (!cfg.probes.points.empty()) {
          const auto wsc = reconstruct_wsc(runr.heat.Y, runr.grid, runr.b_bar,
                                           cfg.material, cfg.probes.points, cfg.tgrid);
          save_field_csv(wsc, cfg.tgrid, path("wsc.csv"));
        }
      }
      std::cout << summary.str();
      return 0;
    }

    // compare
    const auto report = run_comparison(cfg);
    CsvWriter w(path("report.csv"), {"delta", "M", "em_error", "heat_error"});
    for (const auto& e : report.entries)
      w.row({e.delta, static_cast<Real>(e.M), e.em_error, e.heat_error});
    w.commit();
    summary << "  em errors:";
    for (const auto& e : report.entries) summary << " " << format_real(e.em_error);
    summary << "\n  heat errors:";
    for (const auto& e : report.entries) summary << " " << format_real(e.heat_error);
    summary << "\n  fitted rates: em " << format_real(report.em_rate) << ", heat "
            << format_real(report.heat_rate) << "\n";
    summary << "  monotone decrease: em " << (report.em_decreasing ? "yes" : "no")
            << ", heat " << (report.heat_decreasing ? "yes" : "no") << "\n";
    std::cout << summary.str();
    return 0;
  } catch (const ConfigError& e) {
    std::cout << summary.str();
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const GateError& e) {
    std::cout << summary.str();
    std::cerr << "invertibility gate: " << e.what()
              << " (margin = " << format_real(e.margin()) << ")\n";
    return 2;
  } catch (const SolverError& e) {
    std::cout << summary.str();
    std::cerr << "solver failure: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace ph
