#pragma once

#include "levynet/levy.hpp"
#include "levynet/network.hpp"
#include "levynet/simulator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace levynet {

struct NetworkInput {
  RoutingMatrix routing{0};
  RateSchedule rates;
};

NetworkInput parse_network(const std::string& json_text);
LevyModel parse_model(const std::string& json_text);

struct RunConfig {
  NetworkInput network;
  std::optional<LevyModel> input;
  std::vector<Vector> omegas;
  std::vector<double> u_list;
  std::optional<Regime> regime;
  std::optional<SimConfig> simulation;
};

// Relative network paths resolve against base_dir.
RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir);
RunConfig load_run_config(const std::string& path);

}  // namespace levynet
