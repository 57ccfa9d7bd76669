#include "plasmoheat/polarization.hpp"

#include "plasmoheat/csv.hpp"

#include <cmath>

namespace ph {

ShapeSpectralData ball_spectral_data() {
  ShapeSpectralData s;
  s.lambda_n0 = 1.0 / 3.0;
  s.vol_B = 4.0 * pi / 3.0;
  // The three resonant modes of the ball are the normalized constant
  // gradients e_m / sqrt(vol); their moments are sqrt(vol) e_m.
  const Real m = std::sqrt(s.vol_B);
  s.mode_moments = {m * Point3::UnitX(), m * Point3::UnitY(), m * Point3::UnitZ()};
  s.newtonian_hessian_avg = -RealMat3::Identity() / 3.0;
  return s;
}

ShapeSpectralData load_spectral_csv(const std::string& path) {
  ShapeSpectralData s;
  s.mode_moments.clear();
  int hess_row = 0;
  bool have_lambda = false, have_vol = false;
  bool first = true;
  for (const auto& cells : read_csv_raw(path)) {
    if (first) {  // header
      first = false;
      continue;
    }
    if (cells.empty()) continue;
    const std::string& tag = cells[0];
    if (tag == "lambda") {
      s.lambda_n0 = std::stod(cells.at(1));
      have_lambda = true;
    } else if (tag == "vol") {
      s.vol_B = std::stod(cells.at(1));
      have_vol = true;
    } else if (tag == "moment") {
      s.mode_moments.emplace_back(std::stod(cells.at(1)), std::stod(cells.at(2)),
                                  std::stod(cells.at(3)));
    } else if (tag == "hess") {
      if (hess_row >= 3) throw std::runtime_error("spectral csv: more than 3 hess rows");
      for (int c = 0; c < 3; ++c)
        s.newtonian_hessian_avg(hess_row, c) = std::stod(cells.at(c + 1));
      ++hess_row;
    } else {
      throw std::runtime_error("spectral csv: unknown row tag '" + tag + "'");
    }
  }
  if (!have_lambda || !have_vol || s.mode_moments.empty() || hess_row != 3)
    throw std::runtime_error("spectral csv: incomplete data in " + path);
  if (!(s.lambda_n0 > 0.0 && s.lambda_n0 < 1.0))
    throw std::runtime_error("spectral csv: lambda_n0 must lie in (0,1)");
  return s;
}

void save_spectral_csv(const ShapeSpectralData& s, const std::string& path) {
  CsvWriter w(path, {"kind", "a", "b", "c"});
  w.raw_row({"lambda", format_real(s.lambda_n0)});
  w.raw_row({"vol", format_real(s.vol_B)});
  for (const auto& v : s.mode_moments)
    w.raw_row({"moment", format_real(v.x()), format_real(v.y()), format_real(v.z())});
  for (int r = 0; r < 3; ++r)
    w.raw_row({"hess", format_real(s.newtonian_hessian_avg(r, 0)),
               format_real(s.newtonian_hessian_avg(r, 1)),
               format_real(s.newtonian_hessian_avg(r, 2))});
  w.commit();
}

ComplexMat3 polarization_P_Di(const ShapeSpectralData& spec, Complex eta, Real delta) {
  const Complex denom = Complex(1.0, 0.0) + eta * spec.lambda_n0;
  if (std::abs(denom) < 1e-14)
    throw std::domain_error("polarization_P_Di: exact resonance, 1 + eta lambda ~ 0");
  const Real d3 = delta * delta * delta;
  return (d3 / denom) * spec.moment_outer_sum().cast<Complex>();
}

ScaledPolarization polarization_P_B(const ShapeSpectralData& spec,
                                    const MaterialParams& params, Real k_n0,
                                    Real zeta_n0) {
  if (!(k_n0 > 0.0)) throw std::invalid_argument("polarization_P_B: k_n0 must be > 0");
  const Real k2 = k_n0 * k_n0;
  const Real C_B = (k2 * k2 + zeta_n0 * zeta_n0 * k2) /
                   (spec.lambda_n0 * params.k_p * params.k_p * k_n0 * std::sqrt(5.0));
  ScaledPolarization out;
  out.C_B = C_B;
  out.P_B = C_B / spec.vol_B * spec.moment_outer_sum();
  return out;
}

RealMat3 effective_polarization_A_B(const RealMat3& P_B, const ShapeSpectralData& spec) {
  const RealMat3 lhs = RealMat3::Identity() - spec.newtonian_hessian_avg * P_B;
  Eigen::JacobiSVD<RealMat3> svd(lhs, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Real cond = svd.singularValues()(0) / svd.singularValues()(2);
  if (!(svd.singularValues()(2) > 0.0) || cond > 1e12)
    throw SolverError("effective_polarization_A_B: I - H P_B singular, cond = " +
                      std::to_string(cond));
  return lhs.lu().solve(P_B);
}

RealMat3 polarization_from_effective(const RealMat3& A_B, const RealMat3& H) {
  const RealMat3 lhs = RealMat3::Identity() + A_B * H;
  return lhs.lu().solve(A_B);
}

}  // namespace ph
