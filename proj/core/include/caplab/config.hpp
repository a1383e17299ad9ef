#pragma once

#include <string>

#include "caplab/geometry.hpp"
#include "caplab/json.hpp"
#include "caplab/nonlinearity.hpp"

namespace caplab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Schema-validated run configuration. `raw` is the normalized effective
/// config: reloading it reproduces the run (fixed seed => identical reports).
struct RunConfig {
  Json raw;

  static RunConfig load(const std::string& path);
  static RunConfig parse(const Json& j);

  bool has(const std::string& section) const { return raw.contains(section); }
  const Json& section(const std::string& name) const;

  Domain make_domain() const;
  Nonlinearity make_nonlinearity() const;
  double grid_h() const;
  unsigned seed() const;
  std::string out_dir(const std::string& fallback) const;
};

/// Throws ConfigError when `j` is not an object or carries a key outside
/// `allowed`. `where` names the offending section in the message.
void reject_unknown_keys(const Json& j, const std::vector<std::string>& allowed,
                         const std::string& where);

Domain domain_from_json(const Json& j);
Nonlinearity nonlinearity_from_json(const Json& j);

}  // namespace caplab
