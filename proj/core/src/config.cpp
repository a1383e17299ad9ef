#include "caplab/config.hpp"

#include <algorithm>

#include "caplab/io.hpp"

namespace caplab {

void reject_unknown_keys(const Json& j, const std::vector<std::string>& allowed,
                         const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown key \"" + key + "\" in " + where);
}

namespace {

double need_number(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError("missing key \"" + key + "\" in " + where);
  if (!j.at(key).is_number()) throw ConfigError("key \"" + key + "\" in " + where +
                                                " must be a number");
  return j.at(key).get<double>();
}

Vec2 need_vec2(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != 2)
    throw ConfigError("key \"" + key + "\" in " + where + " must be a 2-element array");
  return {j.at(key)[0].get<double>(), j.at(key)[1].get<double>()};
}

}  // namespace

Domain domain_from_json(const Json& j) {
  reject_unknown_keys(j, {"preset", "params", "rho"}, "domain");
  if (!j.contains("preset") || !j.at("preset").is_string())
    throw ConfigError("domain.preset must be a string");
  const std::string preset = j.at("preset").get<std::string>();
  const double rho = need_number(j, "rho", "domain");
  const Json params = j.value("params", Json::object());

  if (preset == "disk") {
    reject_unknown_keys(params, {"center", "radius"}, "domain.params");
    const Vec2 c = params.contains("center") ? need_vec2(params, "center", "domain.params")
                                             : Vec2::Zero();
    const double r = need_number(params, "radius", "domain.params");
    return Domain::disk(c, r, rho);
  }
  if (preset == "annulus") {
    reject_unknown_keys(params, {"center", "r_in", "r_out"}, "domain.params");
    const Vec2 c = params.contains("center") ? need_vec2(params, "center", "domain.params")
                                             : Vec2::Zero();
    return Domain::annulus(c, need_number(params, "r_in", "domain.params"),
                           need_number(params, "r_out", "domain.params"), rho);
  }
  if (preset == "square") {
    reject_unknown_keys(params, {"lo", "hi"}, "domain.params");
    return Domain::rectangle(need_vec2(params, "lo", "domain.params"),
                             need_vec2(params, "hi", "domain.params"), rho);
  }
  throw ConfigError("unknown domain preset \"" + preset + "\"");
}

Nonlinearity nonlinearity_from_json(const Json& j) {
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw ConfigError("nonlinearity.kind must be a string");
  const std::string kind = j.at("kind").get<std::string>();

  if (kind == "power") {
    reject_unknown_keys(j, {"kind", "p", "N"}, "nonlinearity");
    return make_power(need_number(j, "p", "nonlinearity"), j.value("N", 3));
  }
  if (kind == "log_critical") {
    reject_unknown_keys(j, {"kind", "N"}, "nonlinearity");
    return make_log_critical(j.value("N", 3));
  }
  if (kind == "staircase") {
    reject_unknown_keys(j, {"kind", "p", "q", "a1", "N", "n_levels"}, "nonlinearity");
    return make_staircase(need_number(j, "p", "nonlinearity"),
                          need_number(j, "q", "nonlinearity"),
                          need_number(j, "a1", "nonlinearity"), j.value("N", 3),
                          j.value("n_levels", 8));
  }
  if (kind == "exponential") {
    reject_unknown_keys(j, {"kind", "N"}, "nonlinearity");
    return make_exponential(j.value("N", 3));
  }
  if (kind == "linear") {
    reject_unknown_keys(j, {"kind", "c", "N"}, "nonlinearity");
    return make_linear(need_number(j, "c", "nonlinearity"), j.value("N", 3));
  }
  if (kind == "constant") {
    reject_unknown_keys(j, {"kind", "c", "N"}, "nonlinearity");
    return make_constant(need_number(j, "c", "nonlinearity"), j.value("N", 3));
  }
  throw ConfigError("unknown nonlinearity kind \"" + kind + "\"");
}

RunConfig RunConfig::parse(const Json& j) {
  reject_unknown_keys(j,
                      {"domain", "grid_h", "nonlinearity", "solver", "radial", "kelvin",
                       "checks", "appendix", "nonlin", "out_dir", "seed"},
                      "config");
  if (j.contains("domain")) domain_from_json(j.at("domain"));  // validate eagerly
  if (j.contains("nonlinearity")) nonlinearity_from_json(j.at("nonlinearity"));
  if (j.contains("solver"))
    reject_unknown_keys(j.at("solver"), {"h", "tol", "init_amplitudes", "max_iter"}, "solver");
  if (j.contains("radial"))
    reject_unknown_keys(j.at("radial"), {"N", "r_in", "r_out", "tol"}, "radial");
  if (j.contains("kelvin"))
    reject_unknown_keys(j.at("kelvin"), {"x0", "h_out", "N", "threshold"}, "kelvin");
  if (j.contains("checks"))
    reject_unknown_keys(j.at("checks"),
                        {"n_directions", "delta", "tol", "C", "n_samples", "theta", "n_lambda"},
                        "checks");
  if (j.contains("appendix"))
    reject_unknown_keys(j.at("appendix"),
                        {"curve", "lo", "hi", "n_samples", "delta_prime", "fd_step", "psi"},
                        "appendix");
  if (j.contains("nonlin"))
    reject_unknown_keys(j.at("nonlin"), {"s_max", "lambda1", "n_samples"}, "nonlin");
  if (j.contains("seed") && !j.at("seed").is_number_integer())
    throw ConfigError("seed must be an integer");
  if (j.contains("out_dir") && !j.at("out_dir").is_string())
    throw ConfigError("out_dir must be a string");

  RunConfig cfg;
  cfg.raw = j;
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  try {
    return parse(read_json(path));
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
}

const Json& RunConfig::section(const std::string& name) const {
  if (!raw.contains(name)) throw ConfigError("config is missing the \"" + name + "\" section");
  return raw.at(name);
}

Domain RunConfig::make_domain() const { return domain_from_json(section("domain")); }

Nonlinearity RunConfig::make_nonlinearity() const {
  return nonlinearity_from_json(section("nonlinearity"));
}

double RunConfig::grid_h() const {
  const double h = need_number(raw, "grid_h", "config");
  if (h <= 0) throw ConfigError("grid_h must be positive");
  return h;
}

unsigned RunConfig::seed() const { return raw.value("seed", 0u); }

std::string RunConfig::out_dir(const std::string& fallback) const {
  return raw.value("out_dir", fallback);
}

}  // namespace caplab
