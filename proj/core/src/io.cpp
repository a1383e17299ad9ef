#include "caplab/io.hpp"

#include <cmath>
#include <charconv>
#include <fstream>
#include <sstream>

namespace caplab {

std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for writing: " + path);
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open for reading: " + path);
  return f;
}

Grid2D read_header(std::istream& in, const std::string& path) {
  Grid2D g;
  if (!(in >> g.nx >> g.ny >> g.h >> g.x0 >> g.y0))
    throw IoError("bad grid header in " + path);
  if (g.nx <= 0 || g.ny <= 0 || g.h <= 0) throw IoError("invalid grid header in " + path);
  return g;
}

void write_header(std::ostream& out, const Grid2D& g) {
  out << g.nx << ' ' << g.ny << ' ' << fmt_double(g.h) << ' ' << fmt_double(g.x0) << ' '
      << fmt_double(g.y0) << '\n';
}

}  // namespace

void write_mask(const std::string& path, const RegionMask& mask) {
  auto f = open_out(path);
  write_header(f, mask.grid);
  for (int j = 0; j < mask.grid.ny; ++j) {
    for (int i = 0; i < mask.grid.nx; ++i) f << (mask.at(i, j) ? '1' : '0');
    f << '\n';
  }
}

RegionMask read_mask(const std::string& path) {
  auto f = open_in(path);
  RegionMask mask;
  mask.grid = read_header(f, path);
  mask.inside.assign(mask.grid.size(), 0);
  std::string row;
  std::getline(f, row);  // eat end of header line
  for (int j = 0; j < mask.grid.ny; ++j) {
    if (!std::getline(f, row)) throw IoError("truncated mask file: " + path);
    // Accept both packed "0101" rows and space-separated digits.
    int i = 0;
    for (char c : row) {
      if (c == '0' || c == '1') {
        if (i >= mask.grid.nx) throw IoError("row too long in mask file: " + path);
        mask.inside[mask.grid.index(i, j)] = (c == '1');
        ++i;
      } else if (c != ' ' && c != '\t' && c != '\r') {
        throw IoError("unexpected character in mask file: " + path);
      }
    }
    if (i != mask.grid.nx) throw IoError("row too short in mask file: " + path);
  }
  return mask;
}

void write_grid_values(const std::string& path, const GridFunction& u) {
  auto f = open_out(path);
  write_header(f, u.grid);
  for (int j = 0; j < u.grid.ny; ++j) {
    for (int i = 0; i < u.grid.nx; ++i) {
      if (i) f << ' ';
      if (u.is_defined(i, j))
        f << fmt_double(u.at(i, j));
      else
        f << "nan";
    }
    f << '\n';
  }
}

GridFunction read_grid_values(const std::string& path) {
  auto f = open_in(path);
  GridFunction u;
  u.grid = read_header(f, path);
  const int n = u.grid.size();
  u.value.assign(n, 0.0);
  u.defined.assign(n, 0);
  u.interior.assign(n, 0);
  u.frac.assign(n, {});
  for (int j = 0; j < u.grid.ny; ++j)
    for (int i = 0; i < u.grid.nx; ++i) {
      std::string tok;
      if (!(f >> tok)) throw IoError("truncated grid file: " + path);
      const int idx = u.grid.index(i, j);
      if (tok == "nan") continue;
      try {
        u.value[idx] = std::stod(tok);
      } catch (...) {
        throw IoError("bad value in grid file: " + path);
      }
      u.defined[idx] = 1;
      u.interior[idx] = u.value[idx] != 0.0;
    }
  return u;
}

void write_radial_csv(const std::string& path, const RadialSolution& sol) {
  auto f = open_out(path);
  f << "r,u,du\n";
  for (size_t k = 0; k < sol.r.size(); ++k)
    f << fmt_double(sol.r[k]) << ',' << fmt_double(sol.u[k]) << ',' << fmt_double(sol.du[k])
      << '\n';
}

void write_curve_csv(const std::string& path, const CurveDataset& ds) {
  auto f = open_out(path);
  f << "x,value\n";
  for (size_t k = 0; k < ds.x.size(); ++k)
    f << fmt_double(ds.x[k]) << ',' << fmt_double(ds.value[k]) << '\n';
}

void write_json(const std::string& path, const Json& j) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
}

Json read_json(const std::string& path) {
  auto f = open_in(path);
  try {
    return Json::parse(f);
  } catch (const std::exception& e) {
    throw IoError("bad JSON in " + path + ": " + e.what());
  }
}

}  // namespace caplab
