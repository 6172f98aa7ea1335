#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "halltorus/spectral_flow.hpp"

namespace halltorus {

struct RunConfig {
  // lattice
  int side = 3;
  int flux_p = 1;
  int flux_q = 3;
  std::optional<double> flux_b;  // raw b overrides p/q when set
  bool magnetic_pbc = true;

  // model
  std::optional<double> mu;  // absent: midpoint of the first one-body gap
  double lambda = 0.0;
  std::string interaction = "nn_density";

  // filter
  double g_fraction = 0.9;  // kernel g as a fraction of the certified gap
  std::string profile = "cubic";
  double t_max = 400.0;
  int quad_nodes = 20001;

  // neass
  int order = 2;
  double eps_log10_min = -2.5;
  double eps_log10_max = -1.0;
  int eps_points = 9;

  // outputs
  std::string out_dir = "out";
  std::vector<std::string> formats = {"csv", "json"};

  std::uint64_t seed = 12345;

  double flux() const;
  std::vector<double> eps_grid() const;
  FilterProfile filter_profile() const;
};

RunConfig load_config(const std::filesystem::path& path);
RunConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const RunConfig& c);
void validate(const RunConfig& c);
std::uint64_t config_digest(const RunConfig& c);

}  // namespace halltorus
