#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ph {

using Real = double;
using Complex = std::complex<Real>;

using Point3 = Eigen::Vector3d;
using Complex3 = Eigen::Vector3cd;
using RealMat3 = Eigen::Matrix3d;
using ComplexMat3 = Eigen::Matrix3cd;

inline constexpr Real pi = 3.14159265358979323846;

// Invertibility-condition failure; carries the margin for the CLI exit path.
class GateError : public std::runtime_error {
public:
  GateError(const std::string& what, double margin)
      : std::runtime_error(what), margin_(margin) {}
  double margin() const { return margin_; }

private:
  double margin_;
};

class SolverError : public std::runtime_error {
public:
  SolverError(const std::string& what, double residual = -1.0)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_;
};

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "invalid configuration:";
    for (const auto& e : v) s += "\n  - " + e;
    return s;
  }
  std::vector<std::string> violations_;
};

}  // namespace ph
