#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "plasmoheat/config.hpp"
#include "plasmoheat/effective.hpp"
#include "plasmoheat/harness.hpp"
#include "plasmoheat/heat_field.hpp"
#include "plasmoheat/kernels.hpp"

namespace py = pybind11;
using namespace ph;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Heat generation by clusters of plasmonic nanoparticles";

  py::register_exception<GateError>(m, "GateError");
  py::register_exception<SolverError>(m, "SolverError");
  py::register_exception<ConfigError>(m, "ConfigError");

  // kernels
  m.def("heat_kernel", &heat_kernel, py::arg("x"), py::arg("t"), py::arg("y"),
        py::arg("tau"), py::arg("kappa_m"));
  m.def("heat_kernel_dt", &heat_kernel_dt, py::arg("x"), py::arg("t"), py::arg("y"),
        py::arg("tau"), py::arg("kappa_m"));
  m.def("helmholtz_green", &helmholtz_green, py::arg("k"), py::arg("x"), py::arg("y"));
  m.def("dyadic_green", &dyadic_green, py::arg("k"), py::arg("x"), py::arg("y"));

  // materials
  py::class_<MaterialParams>(m, "MaterialParams")
      .def(py::init<>())
      .def_readwrite("eps_inf", &MaterialParams::eps_inf)
      .def_readwrite("eps0_drude", &MaterialParams::eps0_drude)
      .def_readwrite("k_p", &MaterialParams::k_p)
      .def_readwrite("zeta", &MaterialParams::zeta)
      .def_readwrite("eps_m", &MaterialParams::eps_m)
      .def_readwrite("gamma_m", &MaterialParams::gamma_m)
      .def_readwrite("gamma_p", &MaterialParams::gamma_p)
      .def_readwrite("c_m", &MaterialParams::c_m)
      .def_readwrite("c_p", &MaterialParams::c_p)
      .def_readwrite("h", &MaterialParams::h)
      .def_readwrite("beta", &MaterialParams::beta)
      .def_readwrite("delta", &MaterialParams::delta)
      .def("kappa_m", &MaterialParams::kappa_m);

  py::class_<Modulation>(m, "Modulation")
      .def(py::init<>())
      .def_readwrite("r", &Modulation::r)
      .def_readwrite("ell", &Modulation::ell)
      .def_readwrite("T", &Modulation::T);

  m.def("drude_permittivity", &drude_permittivity, py::arg("k"), py::arg("params"));
  m.def(
      "resonant_frequency",
      [](Real lambda_n0, const MaterialParams& p) {
        const auto r = resonant_frequency(lambda_n0, p);
        return std::make_pair(r.k_n0, r.zeta_n0);
      },
      py::arg("lambda_n0"), py::arg("params"));
  m.def("resonance_gap", &resonance_gap, py::arg("k"), py::arg("zeta"),
        py::arg("lambda_n"), py::arg("params"));
  m.def("modulation_f", &modulation_f, py::arg("t"), py::arg("m"));

  // cluster
  py::class_<DomainOmega>(m, "DomainOmega")
      .def(py::init<>())
      .def_readwrite("center", &DomainOmega::center)
      .def_readwrite("extent", &DomainOmega::extent)
      .def_property(
          "kind",
          [](const DomainOmega& o) {
            return o.kind == DomainOmega::Kind::Box ? "box" : "ball";
          },
          [](DomainOmega& o, const std::string& k) {
            o.kind = (k == "ball") ? DomainOmega::Kind::Ball : DomainOmega::Kind::Box;
          })
      .def("volume", &DomainOmega::volume)
      .def("contains", &DomainOmega::contains);

  py::class_<ParticleCluster>(m, "ParticleCluster")
      .def(py::init<>())
      .def_readwrite("centers", &ParticleCluster::centers)
      .def_readwrite("delta", &ParticleCluster::delta)
      .def_readwrite("vol_B", &ParticleCluster::vol_B)
      .def_property_readonly("M", &ParticleCluster::M);

  m.def("lattice_cluster", &lattice_cluster, py::arg("omega"), py::arg("delta"),
        py::arg("beta"));
  m.def("min_distance", &min_distance);
  m.def("min_center_spacing", &min_center_spacing);
  m.def("pairwise_kernel_sums", &pairwise_kernel_sums, py::arg("cluster"), py::arg("p"));

  // polarization
  py::class_<ShapeSpectralData>(m, "ShapeSpectralData")
      .def(py::init<>())
      .def_readwrite("lambda_n0", &ShapeSpectralData::lambda_n0)
      .def_readwrite("mode_moments", &ShapeSpectralData::mode_moments)
      .def_readwrite("vol_B", &ShapeSpectralData::vol_B)
      .def_readwrite("newtonian_hessian_avg", &ShapeSpectralData::newtonian_hessian_avg);

  m.def("ball_spectral_data", &ball_spectral_data);
  m.def("polarization_P_Di", &polarization_P_Di, py::arg("spec"), py::arg("eta"),
        py::arg("delta"));
  m.def(
      "polarization_P_B",
      [](const ShapeSpectralData& s, const MaterialParams& p, Real k, Real z) {
        const auto r = polarization_P_B(s, p, k, z);
        return std::make_pair(r.P_B, r.C_B);
      },
      py::arg("spec"), py::arg("params"), py::arg("k_n0"), py::arg("zeta_n0"));
  m.def("effective_polarization_A_B", &effective_polarization_A_B, py::arg("P_B"),
        py::arg("spec"));

  // maxwell
  py::class_<IncidentWave>(m, "IncidentWave")
      .def(py::init<>())
      .def_readwrite("k", &IncidentWave::k)
      .def_readwrite("theta", &IncidentWave::theta)
      .def_readwrite("E0", &IncidentWave::E0);
  py::class_<DipoleSet>(m, "DipoleSet").def_readwrite("Q", &DipoleSet::Q);

  m.def("incident_field", &incident_field, py::arg("wave"), py::arg("eps_m"),
        py::arg("x"));
  m.def(
      "solve_foldy",
      [](const ParticleCluster& cl, const std::vector<ComplexMat3>& P, Complex eta,
         const IncidentWave& w, Complex eps_m) {
        return solve_foldy(assemble_foldy(cl, P, eta, w, eps_m));
      },
      py::arg("cluster"), py::arg("P_Di"), py::arg("eta"), py::arg("wave"),
      py::arg("eps_m"));
  m.def(
      "check_foldy_invertibility",
      [](const ParticleCluster& cl, const std::vector<ComplexMat3>& P, Complex eta) {
        const auto c = check_foldy_invertibility(cl, P, eta);
        return std::make_pair(c.pass, c.margin);
      },
      py::arg("cluster"), py::arg("P_Di"), py::arg("eta"));

  // volterra + fields
  py::class_<TimeGrid>(m, "TimeGrid")
      .def(py::init<>())
      .def_readwrite("T", &TimeGrid::T)
      .def_readwrite("N_t", &TimeGrid::N_t)
      .def("dt", &TimeGrid::dt)
      .def("t", &TimeGrid::t);

  py::class_<SigmaTrajectories>(m, "SigmaTrajectories")
      .def_readonly("sigma", &SigmaTrajectories::sigma)
      .def_readonly("F", &SigmaTrajectories::F);

  py::enum_<VolterraForm>(m, "VolterraForm")
      .value("SigmaDerivative", VolterraForm::SigmaDerivative)
      .value("KernelDerivative", VolterraForm::KernelDerivative);
  m.def("march_volterra", &march_volterra, py::arg("cluster"), py::arg("params"),
        py::arg("F"), py::arg("tgrid"),
        py::arg("form") = VolterraForm::SigmaDerivative, py::arg("force") = false);
  m.def(
      "check_heat_invertibility",
      [](const ParticleCluster& cl, const MaterialParams& p) {
        const auto c = check_heat_invertibility(cl, p);
        return std::make_pair(c.pass, c.margin);
      },
      py::arg("cluster"), py::arg("params"));
  m.def(
      "reconstruct_usc",
      [](const SigmaTrajectories& traj, const ParticleCluster& cl,
         const MaterialParams& p, const std::vector<Point3>& pts, const TimeGrid& tg,
         Real rho_min) { return reconstruct_usc(traj, cl, p, pts, tg, rho_min).values; },
      py::arg("traj"), py::arg("cluster"), py::arg("params"), py::arg("points"),
      py::arg("tgrid"), py::arg("rho_min"));

  // effective media
  py::class_<EffectiveGrid>(m, "EffectiveGrid")
      .def_readonly("cell_size", &EffectiveGrid::cell_size)
      .def_readonly("cell_centers", &EffectiveGrid::cell_centers)
      .def_property_readonly("cells", &EffectiveGrid::cells);
  py::class_<EffectiveEMField>(m, "EffectiveEMField")
      .def_readonly("E_hat", &EffectiveEMField::E_hat)
      .def_readonly("E_f", &EffectiveEMField::E_f);
  py::class_<EffectiveHeatField>(m, "EffectiveHeatField")
      .def_readonly("Y", &EffectiveHeatField::Y)
      .def_readonly("W_interior", &EffectiveHeatField::W_interior)
      .def_readonly("F", &EffectiveHeatField::F);

  m.def("build_grid", &build_grid, py::arg("omega"), py::arg("d"));
  m.def("solve_effective_maxwell", &solve_effective_maxwell, py::arg("grid"),
        py::arg("A_B"), py::arg("wave"), py::arg("eps_m"));
  m.def("effective_permittivity", &effective_permittivity, py::arg("A_B"),
        py::arg("omega"), py::arg("eps_m"), py::arg("x"));
  m.def("march_effective_heat", &march_effective_heat, py::arg("grid"),
        py::arg("b_bar"), py::arg("F_eff"), py::arg("params"), py::arg("tgrid"));
  m.def(
      "reconstruct_wsc",
      [](const Eigen::MatrixXd& Y, const EffectiveGrid& g, Real b_bar,
         const MaterialParams& p, const std::vector<Point3>& pts, const TimeGrid& tg) {
        return reconstruct_wsc(Y, g, b_bar, p, pts, tg).values;
      },
      py::arg("Y"), py::arg("grid"), py::arg("b_bar"), py::arg("params"),
      py::arg("points"), py::arg("tgrid"));

  // config-driven runs and the harness
  m.def("parse_config", &parse_config, py::arg("path"));
  py::class_<SimulationConfig>(m, "SimulationConfig")
      .def_readwrite("out_dir", &SimulationConfig::out_dir)
      .def_readwrite("force", &SimulationConfig::force)
      .def_readwrite("threads", &SimulationConfig::threads);
  m.def("run", &run, py::arg("config"));
  m.def(
      "run_oracles",
      [](Real kernel_bias) {
        const auto rep = run_oracles({kernel_bias});
        py::list out;
        for (const auto& r : rep.results)
          out.append(py::make_tuple(r.name, r.measured, r.tolerance, r.pass));
        return out;
      },
      py::arg("kernel_bias") = 0.0);
}
