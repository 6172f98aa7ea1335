#include "halltorus/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "halltorus/serialize.hpp"

namespace halltorus {

using nlohmann::json;

double RunConfig::flux() const {
  if (flux_b) return *flux_b;
  if (flux_q == 0) throw std::invalid_argument("config: flux q must be nonzero");
  return kTwoPi * flux_p / flux_q;
}

std::vector<double> RunConfig::eps_grid() const {
  std::vector<double> out;
  if (eps_points == 1) {
    out.push_back(std::pow(10.0, eps_log10_min));
    return out;
  }
  for (int i = 0; i < eps_points; ++i) {
    double t = eps_log10_min +
               (eps_log10_max - eps_log10_min) * i / static_cast<double>(eps_points - 1);
    out.push_back(std::pow(10.0, t));
  }
  return out;
}

FilterProfile RunConfig::filter_profile() const {
  if (profile == "cubic") return FilterProfile::cubic;
  if (profile == "smooth") return FilterProfile::smooth;
  throw std::invalid_argument("config: unknown filter profile '" + profile + "'");
}

RunConfig config_from_json_text(const std::string& text) {
  json j = json::parse(text);
  RunConfig c;
  if (j.contains("lattice")) {
    const auto& l = j["lattice"];
    c.side = l.value("L", c.side);
    c.magnetic_pbc = l.value("magnetic_pbc", c.magnetic_pbc);
    if (l.contains("flux")) {
      const auto& f = l["flux"];
      if (f.is_object()) {
        c.flux_p = f.value("p", c.flux_p);
        c.flux_q = f.value("q", c.flux_q);
      } else {
        c.flux_b = f.get<double>();
      }
    }
  }
  if (j.contains("model")) {
    const auto& m = j["model"];
    if (m.contains("mu") && m["mu"].is_number()) c.mu = m["mu"].get<double>();
    c.lambda = m.value("lambda", c.lambda);
    c.interaction = m.value("interaction", c.interaction);
  }
  if (j.contains("filter")) {
    const auto& f = j["filter"];
    c.g_fraction = f.value("g_fraction", c.g_fraction);
    c.profile = f.value("profile", c.profile);
    c.t_max = f.value("t_max", c.t_max);
    c.quad_nodes = f.value("nodes", c.quad_nodes);
  }
  if (j.contains("neass")) {
    const auto& n = j["neass"];
    c.order = n.value("order", c.order);
    if (n.contains("eps_grid")) {
      const auto& e = n["eps_grid"];
      c.eps_log10_min = e.value("log10_min", c.eps_log10_min);
      c.eps_log10_max = e.value("log10_max", c.eps_log10_max);
      c.eps_points = e.value("points", c.eps_points);
    }
  }
  if (j.contains("outputs")) {
    const auto& o = j["outputs"];
    c.out_dir = o.value("directory", c.out_dir);
    if (o.contains("formats")) c.formats = o["formats"].get<std::vector<std::string>>();
  }
  c.seed = j.value("seed", c.seed);
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return config_from_json_text(ss.str());
}

std::string config_to_json_text(const RunConfig& c) {
  json j;
  j["lattice"]["L"] = c.side;
  if (c.flux_b)
    j["lattice"]["flux"] = *c.flux_b;
  else
    j["lattice"]["flux"] = {{"p", c.flux_p}, {"q", c.flux_q}};
  j["lattice"]["magnetic_pbc"] = c.magnetic_pbc;
  if (c.mu) j["model"]["mu"] = *c.mu;
  j["model"]["lambda"] = c.lambda;
  j["model"]["interaction"] = c.interaction;
  j["filter"] = {{"g_fraction", c.g_fraction},
                 {"profile", c.profile},
                 {"t_max", c.t_max},
                 {"nodes", c.quad_nodes}};
  j["neass"] = {{"order", c.order},
                {"eps_grid",
                 {{"log10_min", c.eps_log10_min},
                  {"log10_max", c.eps_log10_max},
                  {"points", c.eps_points}}}};
  j["outputs"] = {{"directory", c.out_dir}, {"formats", c.formats}};
  j["seed"] = c.seed;
  return j.dump(2);
}

void validate(const RunConfig& c) {
  if (c.side < 1) throw std::invalid_argument("config: L must be positive");
  if (c.magnetic_pbc) {
    double r = c.flux() * c.side / kTwoPi;
    if (std::abs(r - std::round(r)) > 1e-12) {
      std::ostringstream msg;
      msg << "config: flux quantization violated (b=" << c.flux() << ", L=" << c.side
          << "): b*L must be a multiple of 2*pi";
      throw std::invalid_argument(msg.str());
    }
  }
  if (c.eps_points < 1) throw std::invalid_argument("config: eps grid needs points");
  double lo = std::pow(10.0, c.eps_log10_min);
  if (!(lo > 0.0)) throw std::invalid_argument("config: eps grid must be positive");
  if (c.eps_log10_max < c.eps_log10_min)
    throw std::invalid_argument("config: eps grid must be sorted");
  if (c.order < 1 || c.order > 4)
    throw std::invalid_argument("config: NEASS order capped at 4");
  if (c.g_fraction <= 0.0 || c.g_fraction > 1.0)
    throw std::invalid_argument("config: g_fraction must lie in (0, 1]");
  (void)c.filter_profile();
}

std::uint64_t config_digest(const RunConfig& c) {
  std::string s = config_to_json_text(c);
  return fnv1a(s.data(), s.size());
}

}  // namespace halltorus
