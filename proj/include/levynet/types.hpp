#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace levynet {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Node indices are 0-based throughout the C++ API. Config files and CLI
// output use 1-based indices.
using IndexSet = std::vector<int>;

class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

struct StructuralError : Error {
  explicit StructuralError(const std::string& w) : Error("structural", w) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error("domain", w) {}
};

struct NumericalError : Error {
  explicit NumericalError(const std::string& w) : Error("numerical", w) {}
};

struct UnsupportedRegime : Error {
  explicit UnsupportedRegime(const std::string& w)
      : Error("unsupported-regime", w) {}
};

struct SingularityError : Error {
  SingularityError(const std::string& w, int factor)
      : Error("singularity", w), factor(factor) {}
  int factor;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error("config", w) {}
};

}  // namespace levynet
