// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#include "nchodge/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <tuple>

#include "nchodge/error.hpp"

namespace nchodge {

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double distance(const Point2& a, const Point2& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

Triangulation::Triangulation(std::vector<Point2> vertices, std::vector<Cell> cells)
    : vertices_(std::move(vertices)), cells_(std::move(cells)) {
  const int nv = num_vertices();
  if (cells_.empty()) throw MeshError("cell", 0, "mesh has no cells");
  for (int v = 0; v < nv; ++v) {
    const Point2& p = vertices_[static_cast<std::size_t>(v)];
    if (!std::isfinite(p[0]) || !std::isfinite(p[1])) throw MeshError("vertex", v, "non-finite coordinate");
  }

  std::vector<std::vector<int>> incident(static_cast<std::size_t>(nv));
  for (int c = 0; c < num_cells(); ++c) {
    const Cell& t = cells_[static_cast<std::size_t>(c)];
    for (int v : t) {
      if (v < 0 || v >= nv) throw MeshError("cell", c, "vertex index out of range");
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) throw MeshError("cell", c, "repeated vertex");
    const double area2 = cross(vertex(t[0]), vertex(t[1]), vertex(t[2]));
    if (area2 == 0.0) throw MeshError("cell", c, "degenerate cell");
    if (area2 < 0.0) throw MeshError("cell", c, "negatively oriented cell");
    for (int v : t) incident[static_cast<std::size_t>(v)].push_back(c);
    h_ = std::max({h_, distance(vertex(t[0]), vertex(t[1])), distance(vertex(t[1]), vertex(t[2])),
                   distance(vertex(t[0]), vertex(t[2]))});
  }
  for (int v = 0; v < nv; ++v) {
    if (incident[static_cast<std::size_t>(v)].empty()) throw MeshError("vertex", v, "vertex belongs to no cell");
  }

  // Edges. Two positively oriented cells sharing an edge traverse it in
  // opposite directions; the same direction means they overlap.
  std::map<std::pair<int, int>, int> edge_id;
  std::map<std::pair<int, int>, int> directed;
  for (int c = 0; c < num_cells(); ++c) {
    const Cell& t = cells_[static_cast<std::size_t>(c)];
    for (int i = 0; i < 3; ++i) {
      const int a = t[static_cast<std::size_t>(i)];
      const int b = t[static_cast<std::size_t>((i + 1) % 3)];
      if (!directed.emplace(std::make_pair(a, b), c).second) {
        throw MeshError("cell", c, "overlaps a neighbour along edge " + std::to_string(a) + "-" + std::to_string(b));
      }
      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_id.try_emplace({key.first, key.second}, num_edges());
      if (inserted) edges_.push_back(Edge{key.first, key.second, {}});
      Edge& e = edges_[static_cast<std::size_t>(it->second)];
      e.cells.push_back(c);
      if (e.cells.size() > 2) throw MeshError("edge", it->second, "edge shared by more than two cells");
    }
  }

  classes_.assign(static_cast<std::size_t>(nv), VertexClass::kInterior);
  std::vector<int> boundary_edges_at(static_cast<std::size_t>(nv), 0);
  for (const Edge& e : edges_) {
    if (!e.boundary()) continue;
    classes_[static_cast<std::size_t>(e.a)] = VertexClass::kBoundary;
    classes_[static_cast<std::size_t>(e.b)] = VertexClass::kBoundary;
    ++boundary_edges_at[static_cast<std::size_t>(e.a)];
    ++boundary_edges_at[static_cast<std::size_t>(e.b)];
  }

  // Hanging vertices sit inside a boundary edge of the cell complex.
  for (int id = 0; id < num_edges(); ++id) {
    const Edge& e = edges_[static_cast<std::size_t>(id)];
    if (!e.boundary()) continue;
    const Point2& pa = vertex(e.a);
    const Point2& pb = vertex(e.b);
    const double len = distance(pa, pb);
    for (int v = 0; v < nv; ++v) {
      if (v == e.a || v == e.b) continue;
      const Point2& p = vertex(v);
      if (std::abs(cross(pa, pb, p)) > 1e-12 * len * len) continue;
      const double s = ((p[0] - pa[0]) * (pb[0] - pa[0]) + (p[1] - pa[1]) * (pb[1] - pa[1])) / (len * len);
      if (s > 0.0 && s < 1.0) throw MeshError("vertex", v, "hanging vertex on edge " + std::to_string(id));
    }
  }

  auto other_cell = [&](int c, int a, int b) {
    const auto key = std::minmax(a, b);
    const Edge& e = edges_[static_cast<std::size_t>(edge_id.at({key.first, key.second}))];
    if (e.boundary()) return -1;
    return e.cells[0] == c ? e.cells[1] : e.cells[0];
  };
  // (next, previous) neighbours of v in cell c, counterclockwise.
  auto ring = [&](int c, int v) {
    const Cell& t = cells_[static_cast<std::size_t>(c)];
    const int i = local_index(c, v);
    return std::make_pair(t[static_cast<std::size_t>((i + 1) % 3)], t[static_cast<std::size_t>((i + 2) % 3)]);
  };

  patches_.resize(static_cast<std::size_t>(nv));
  for (int v = 0; v < nv; ++v) {
    const auto& inc = incident[static_cast<std::size_t>(v)];
    std::vector<int>& fan = patches_[static_cast<std::size_t>(v)];
    int start = -1;
    if (classes_[static_cast<std::size_t>(v)] == VertexClass::kInterior) {
      ++num_interior_;
      start = *std::min_element(inc.begin(), inc.end());
    } else {
      if (boundary_edges_at[static_cast<std::size_t>(v)] != 2) {
        throw MeshError("vertex", v, "vertex star is not a half-disk");
      }
      for (int c : inc) {
        if (other_cell(c, v, ring(c, v).first) < 0) start = c;
      }
    }
    int c = start;
    do {
      fan.push_back(c);
      c = other_cell(c, v, ring(c, v).second);
    } while (c >= 0 && c != start && fan.size() <= inc.size());
    if (fan.size() != inc.size()) throw MeshError("vertex", v, "vertex star is not a disk or half-disk");
  }

  if (num_interior_ > 0) {
    for (int v = 0; v < nv; ++v) {
      if (is_interior(v)) continue;
      bool connected = false;
      for (int c : patches_[static_cast<std::size_t>(v)]) {
        for (int w : cells_[static_cast<std::size_t>(c)]) connected = connected || is_interior(w);
      }
      if (!connected) throw MeshError("vertex", v, "boundary vertex has no edge to an interior vertex");
    }
  }
}

int Triangulation::local_index(int c, int v) const {
  const Cell& t = cell(c);
  for (int i = 0; i < 3; ++i) {
    if (t[static_cast<std::size_t>(i)] == v) return i;
  }
  return -1;
}

Simplex Triangulation::cell_simplex(int c) const {
  const Cell& t = cell(c);
  std::vector<std::vector<double>> v;
  for (int id : t) v.push_back({vertex(id)[0], vertex(id)[1]});
  return Simplex::from_doubles(v);
}

std::vector<std::shared_ptr<const Simplex>> build_cell_simplices(const Triangulation& tri) {
  std::vector<std::shared_ptr<const Simplex>> out;
  out.reserve(static_cast<std::size_t>(tri.num_cells()));
  for (int c = 0; c < tri.num_cells(); ++c) out.push_back(std::make_shared<const Simplex>(tri.cell_simplex(c)));
  return out;
}

MeshPattern parse_pattern(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (s == "diagonal") return MeshPattern::kDiagonal;
  if (s == "crisscross") return MeshPattern::kCrissCross;
  throw DomainError("unknown mesh pattern '" + name + "' (expected diagonal or crisscross)");
}

const char* to_string(MeshPattern pattern) {
  return pattern == MeshPattern::kDiagonal ? "diagonal" : "crisscross";
}

Triangulation generate_square_mesh(int m, MeshPattern pattern) {
  if (m < 2) throw DomainError("square mesh needs m >= 2");
  std::vector<Point2> v;
  std::vector<Cell> cells;
  const auto id = [m](int i, int j) { return j * (m + 1) + i; };
  for (int j = 0; j <= m; ++j) {
    for (int i = 0; i <= m; ++i) v.push_back({static_cast<double>(i) / m, static_cast<double>(j) / m});
  }
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v11 = id(i + 1, j + 1), v01 = id(i, j + 1);
      if (pattern == MeshPattern::kDiagonal) {
        const bool flip = (i == m - 1 && j == 0) || (i == 0 && j == m - 1);
        if (flip) {
          cells.push_back({v00, v10, v01});
          cells.push_back({v10, v11, v01});
        } else {
          cells.push_back({v00, v10, v11});
          cells.push_back({v00, v11, v01});
        }
      } else {
        const int c = static_cast<int>(v.size());
        v.push_back({(i + 0.5) / m, (j + 0.5) / m});
        cells.push_back({v00, v10, c});
        cells.push_back({v10, v11, c});
        cells.push_back({v11, v01, c});
        cells.push_back({v01, v00, c});
      }
    }
  }
  return Triangulation(std::move(v), std::move(cells));
}

Triangulation subdivide(const Triangulation& tri, int s) {
  if (s < 1) throw DomainError("subdivision factor must be positive");
  std::vector<Point2> v = tri.vertices();
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(tri.num_cells() * s * s));
  // Edge points are keyed by (low vertex, high vertex, steps from low).
  std::map<std::tuple<int, int, int>, int> edge_points;
  const auto lerp = [](const Point2& a, const Point2& b, double t) {
    return Point2{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
  };
  const auto edge_point = [&](int a, int b, int steps) {
    if (steps == 0) return a;
    if (steps == s) return b;
    if (a > b) {
      std::swap(a, b);
      steps = s - steps;
    }
    const auto [it, fresh] = edge_points.try_emplace({a, b, steps}, static_cast<int>(v.size()));
    if (fresh) v.push_back(lerp(v[static_cast<std::size_t>(a)], v[static_cast<std::size_t>(b)], static_cast<double>(steps) / s));
    return it->second;
  };
  for (const Cell& c : tri.cells()) {
    // Lattice point (i, j) sits at c0 + i/s (c1 - c0) + j/s (c2 - c0).
    std::vector<std::vector<int>> id(static_cast<std::size_t>(s + 1));
    for (int i = 0; i <= s; ++i) {
      id[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(s + 1 - i));
      for (int j = 0; i + j <= s; ++j) {
        int& slot = id[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (j == 0) {
          slot = edge_point(c[0], c[1], i);
        } else if (i == 0) {
          slot = edge_point(c[0], c[2], j);
        } else if (i + j == s) {
          slot = edge_point(c[1], c[2], j);
        } else {
          const Point2& p0 = tri.vertex(c[0]);
          const Point2& p1 = tri.vertex(c[1]);
          const Point2& p2 = tri.vertex(c[2]);
          const double a = static_cast<double>(i) / s, b = static_cast<double>(j) / s;
          slot = static_cast<int>(v.size());
          v.push_back({p0[0] + a * (p1[0] - p0[0]) + b * (p2[0] - p0[0]), p0[1] + a * (p1[1] - p0[1]) + b * (p2[1] - p0[1])});
        }
      }
    }
    const auto at = [&](int i, int j) { return id[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
    for (int i = 0; i < s; ++i) {
      for (int j = 0; i + j < s; ++j) {
        cells.push_back({at(i, j), at(i + 1, j), at(i, j + 1)});
        if (i + j + 1 < s) cells.push_back({at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)});
      }
    }
  }
  return Triangulation(std::move(v), std::move(cells));
}

Triangulation read_mesh(std::istream& in) {
  std::string line;
  long lineno = 0;
  auto next = [&]() -> std::istringstream {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(line);
    }
    throw MeshError("line", lineno, "unexpected end of mesh file");
  };
  auto header = [&](const std::string& key) {
    std::istringstream s = next();
    std::string word;
    long value = -1;
    if (!(s >> word >> value) || word != key || value < 0) {
      throw MeshError("line", lineno, "expected '" + key + " <count>'");
    }
    return value;
  };
  if (header("ndim") != 2) throw MeshError("line", lineno, "only ndim 2 is supported");
  const long nv = header("vertices");
  std::vector<Point2> v(static_cast<std::size_t>(nv));
  for (auto& p : v) {
    std::istringstream s = next();
    std::string xs, ys, extra;
    if (!(s >> xs >> ys) || (s >> extra)) throw MeshError("line", lineno, "expected 'x y'");
    for (int j = 0; j < 2; ++j) {
      const std::string& tok = j == 0 ? xs : ys;
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), p[static_cast<std::size_t>(j)]);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw MeshError("line", lineno, "bad coordinate '" + tok + "'");
      }
    }
  }
  const long nc = header("cells");
  std::vector<Cell> cells(static_cast<std::size_t>(nc));
  for (auto& c : cells) {
    std::istringstream s = next();
    std::string extra;
    if (!(s >> c[0] >> c[1] >> c[2]) || (s >> extra)) throw MeshError("line", lineno, "expected 'i j k'");
  }
  return Triangulation(std::move(v), std::move(cells));
}

Triangulation read_mesh_text(const std::string& text) {
  std::istringstream in(text);
  return read_mesh(in);
}

Triangulation read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

std::string write_mesh(const Triangulation& tri) {
  std::string out = "ndim 2\nvertices " + std::to_string(tri.num_vertices()) + "\n";
  for (const Point2& p : tri.vertices()) out += format_double(p[0]) + " " + format_double(p[1]) + "\n";
  out += "cells " + std::to_string(tri.num_cells()) + "\n";
  for (const Cell& c : tri.cells()) {
    out += std::to_string(c[0]) + " " + std::to_string(c[1]) + " " + std::to_string(c[2]) + "\n";
  }
  return out;
}

WhitneySpace::WhitneySpace(const Triangulation& tri, WhitneyKind kind) : kind_(kind) {
  dof_index_.assign(static_cast<std::size_t>(tri.num_vertices()), -1);
  for (int v = 0; v < tri.num_vertices(); ++v) {
    if (kind == WhitneyKind::kLagrangeZero && !tri.is_interior(v)) continue;
    dof_index_[static_cast<std::size_t>(v)] = size();
    dof_vertices_.push_back(v);
  }
}

WhitneySpace whitney_basis(const Triangulation& tri, WhitneyKind kind) { return WhitneySpace(tri, kind); }

Polynomial whitney_function(const Triangulation& tri, int c, const Simplex& t, int vertex) {
  const int i = tri.local_index(c, vertex);
  if (i < 0) return Polynomial(2);
  if (t.reordered()) throw DomainError("cell simplex was reordered; mesh cells must be positively oriented");
  return t.barycentric(i);
}

PolyForm whitney_zero_form(const Triangulation& tri, int c, const Simplex& t, int vertex) {
  return PolyForm::basis(MultiIndex::empty(2), whitney_function(tri, c, t, vertex));
}

PolyForm whitney_volume_form(const Triangulation& tri, int c, const Simplex& t, int vertex) {
  return PolyForm::basis(MultiIndex::full(2), whitney_function(tri, c, t, vertex));
}

}  // namespace nchodge
