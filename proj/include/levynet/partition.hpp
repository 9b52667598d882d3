#pragma once

#include "levynet/network.hpp"

#include <utility>
#include <vector>

namespace levynet {

struct RateClass {
  int first;
  int last;
  int size() const { return last - first + 1; }
  bool contains(int i) const { return i >= first && i <= last; }
};

struct RateClassPartition {
  std::vector<RateClass> classes;
  std::vector<int> anchors;          // q_k = first node of class k
  std::vector<int> class_of;         // node -> class index
  std::vector<int> reference_node;   // node whose rate is the reference
  std::vector<Rate> reference_rate;  // reference rate per class
  Vector fractions;                  // frak r_i

  int count() const { return static_cast<int>(classes.size()); }
};

RateClassPartition partition_rates(const NetworkSpec& spec);

std::pair<IndexSet, IndexSet> starred_sets(const NetworkSpec& spec,
                                           const RateClassPartition& partition, int j);

// Reference rate of class k multiplied by c; fractions in that class divided by c.
RateClassPartition with_reference_scale(const RateClassPartition& partition, int k,
                                        double c);

}  // namespace levynet
