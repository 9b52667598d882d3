#include "levynet/partition.hpp"

#include <cmath>

namespace levynet {

RateClassPartition partition_rates(const NetworkSpec& spec) {
  const int n = spec.size();
  RateClassPartition part;
  part.class_of.assign(n, 0);
  part.fractions = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    bool fresh = i == 0 || std::abs(spec.rates[i].leading().e - spec.rates[i - 1].leading().e) >
                               kExponentTol;
    if (fresh) {
      part.classes.push_back({i, i});
      part.anchors.push_back(i);
    } else {
      part.classes.back().last = i;
    }
    part.class_of[i] = part.count() - 1;
  }
  for (const auto& c : part.classes) {
    int ref = c.first;
    for (int i = c.first; i <= c.last; ++i)
      if (spec.rates[i].leading().c > spec.rates[ref].leading().c) ref = i;
    part.reference_node.push_back(ref);
    part.reference_rate.push_back(spec.rates[ref]);
    for (int i = c.first; i <= c.last; ++i)
      part.fractions[i] = spec.rates[i].leading().c / spec.rates[ref].leading().c;
  }
  return part;
}

std::pair<IndexSet, IndexSet> starred_sets(const NetworkSpec& spec,
                                           const RateClassPartition& partition, int j) {
  if (j < 0 || j >= spec.size()) throw DomainError("node index out of range");
  const auto& I = partition.classes[partition.class_of[j]];
  IndexSet s, d;
  for (int i : spec.sets_S[j])
    if (I.contains(i)) s.push_back(i);
  for (int i : spec.sets_D[j])
    if (I.contains(i)) d.push_back(i);
  return {s, d};
}

RateClassPartition with_reference_scale(const RateClassPartition& partition, int k, double c) {
  if (k < 0 || k >= partition.count()) throw DomainError("class index out of range");
  if (!(c > 0)) throw DomainError("reference scale must be positive");
  RateClassPartition out = partition;
  out.reference_rate[k] = partition.reference_rate[k].scaled(c);
  const auto& I = partition.classes[k];
  for (int i = I.first; i <= I.last; ++i) out.fractions[i] = partition.fractions[i] / c;
  return out;
}

}  // namespace levynet
