#pragma once

#include <string>

#include "caplab/convexity.hpp"
#include "caplab/grid.hpp"
#include "caplab/json.hpp"
#include "caplab/radial.hpp"

namespace caplab {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal form (up to 17 significant digits).
std::string fmt_double(double v);

/// Portable mask format: header "nx ny h x0 y0", then ny rows of nx 0/1
/// characters (row j on line j+2, i.e. y increases down the file).
void write_mask(const std::string& path, const RegionMask& mask);
RegionMask read_mask(const std::string& path);

/// Grid-value format: same header, then rows of node values; undefined nodes
/// are written as "nan".
void write_grid_values(const std::string& path, const GridFunction& u);
GridFunction read_grid_values(const std::string& path);

/// Radial profiles as CSV with header "r,u,du".
void write_radial_csv(const std::string& path, const RadialSolution& sol);

/// Appendix curve datasets as CSV with header "x,value".
void write_curve_csv(const std::string& path, const CurveDataset& ds);

/// Pretty JSON with trailing newline.
void write_json(const std::string& path, const Json& j);
Json read_json(const std::string& path);

}  // namespace caplab
