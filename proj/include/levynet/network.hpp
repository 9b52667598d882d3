#pragma once

#include "levynet/monomial.hpp"
#include "levynet/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace levynet {

struct Edge {
  int from;
  int to;
  double p;
};

// Routing fractions p_ij as a dense n x n matrix.
class RoutingMatrix {
 public:
  explicit RoutingMatrix(int n) : p_(Matrix::Zero(n, n)) {}
  explicit RoutingMatrix(Matrix p) : p_(std::move(p)) {}
  static RoutingMatrix from_edges(int n, const std::vector<Edge>& edges);

  int size() const { return static_cast<int>(p_.rows()); }
  double operator()(int i, int j) const { return p_(i, j); }
  double& operator()(int i, int j) { return p_(i, j); }
  const Matrix& matrix() const { return p_; }

 private:
  Matrix p_;
};

using RateSchedule = std::vector<Rate>;

struct NetworkSpec {
  RoutingMatrix routing{0};
  RateSchedule rates;
  Vector phat;
  std::vector<int> ancestor;  // -1 for the root
  std::vector<IndexSet> sets_S;
  std::vector<IndexSet> sets_D;

  int size() const { return routing.size(); }
  Vector rates_at(double u) const;
};

NetworkSpec build_network(const RoutingMatrix& routing, const RateSchedule& rates);

std::pair<IndexSet, IndexSet> structural_sets(const NetworkSpec& spec, int j);

struct ValidationCheck {
  std::string id;
  bool pass;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  std::vector<std::string> warnings;
  bool pass() const;
};

ValidationReport validate_assumptions(const NetworkSpec& spec, double u_probe);

// Pointwise N2 test: r_j/phat_j > r_{j+1}/phat_{j+1} for all j.
bool n2_holds_at(const NetworkSpec& spec, double u);

}  // namespace levynet
