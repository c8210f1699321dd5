// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The nchodge authors

#pragma once

// 2D triangulations: validation, fan-ordered vertex patches, a square
// generator, the text format, and the nodal Whitney spaces used as
// constraint tests.

#include <array>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "nchodge/forms.hpp"
#include "nchodge/simplex.hpp"

namespace nchodge {

using Point2 = std::array<double, 2>;
using Cell = std::array<int, 3>;

enum class VertexClass { kInterior, kBoundary };

struct Edge {
  int a = 0;  // a < b
  int b = 0;
  std::vector<int> cells;  // one (boundary) or two
  bool boundary() const noexcept { return cells.size() == 1; }
};

/// Immutable validated triangulation. The constructor throws MeshError naming
/// the offending cell, edge or vertex when the mesh is not a conforming,
/// positively oriented triangulation with disk/half-disk vertex stars in which
/// every boundary vertex has an interior neighbour. A mesh without interior
/// vertices is accepted (the neighbour rule cannot apply) and flagged.
class Triangulation {
 public:
  Triangulation(std::vector<Point2> vertices, std::vector<Cell> cells);

  int num_vertices() const noexcept { return static_cast<int>(vertices_.size()); }
  int num_cells() const noexcept { return static_cast<int>(cells_.size()); }
  int num_edges() const noexcept { return static_cast<int>(edges_.size()); }
  int num_interior_vertices() const noexcept { return num_interior_; }
  bool has_interior_vertices() const noexcept { return num_interior_ > 0; }

  const std::vector<Point2>& vertices() const noexcept { return vertices_; }
  const std::vector<Cell>& cells() const noexcept { return cells_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Point2& vertex(int v) const { return vertices_.at(static_cast<std::size_t>(v)); }
  const Cell& cell(int c) const { return cells_.at(static_cast<std::size_t>(c)); }
  VertexClass vertex_class(int v) const { return classes_.at(static_cast<std::size_t>(v)); }
  bool is_interior(int v) const { return vertex_class(v) == VertexClass::kInterior; }

  /// Incident cells in counterclockwise fan order. Boundary vertices start at
  /// the cell holding the clockwise-most boundary edge; interior vertices at
  /// their lowest-numbered cell.
  const std::vector<int>& patch(int v) const { return patches_.at(static_cast<std::size_t>(v)); }
  /// Position (0..2) of vertex v in cell c, -1 when absent.
  int local_index(int c, int v) const;

  /// Largest cell diameter.
  double mesh_size() const noexcept { return h_; }
  int euler_characteristic() const noexcept { return num_vertices() - num_edges() + num_cells(); }

  /// Exact simplex of cell c (doubles are converted exactly).
  Simplex cell_simplex(int c) const;

 private:
  std::vector<Point2> vertices_;
  std::vector<Cell> cells_;
  std::vector<Edge> edges_;
  std::vector<VertexClass> classes_;
  std::vector<std::vector<int>> patches_;
  int num_interior_ = 0;
  double h_ = 0.0;
};

/// Shared per-cell simplices, built once.
std::vector<std::shared_ptr<const Simplex>> build_cell_simplices(const Triangulation& tri);

enum class MeshPattern { kDiagonal, kCrissCross };

MeshPattern parse_pattern(const std::string& name);
const char* to_string(MeshPattern pattern);

/// Unit square split into m x m squares. DIAGONAL cuts each square along its
/// (0,0)-(1,1) diagonal except the two corner squares at (1,0) and (0,1),
/// which are cut the other way so the corner vertices see an interior vertex.
/// CRISSCROSS adds a centre vertex to every square. Requires m >= 2.
Triangulation generate_square_mesh(int m, MeshPattern pattern);

/// Splits every edge into s equal segments and every cell into s^2 similar
/// cells. s = 1 returns a copy.
Triangulation subdivide(const Triangulation& tri, int s);

/// Text format: "ndim 2", "vertices N" + N lines "x y", "cells M" + M lines
/// "i j k" (0-based). Coordinates are printed in shortest round-trip form.
Triangulation read_mesh(std::istream& in);
Triangulation read_mesh_text(const std::string& text);
Triangulation read_mesh_file(const std::string& path);
std::string write_mesh(const Triangulation& tri);

enum class WhitneyKind {
  kLagrangeFull,  // continuous P1, all vertices
  kLagrangeZero,  // continuous P1 vanishing on the boundary, interior vertices
};

/// Nodal basis of V1_h or V1_h0. The restriction of the function of vertex a
/// to an incident cell is that cell's barycentric coordinate of a.
class WhitneySpace {
 public:
  WhitneySpace(const Triangulation& tri, WhitneyKind kind);

  WhitneyKind kind() const noexcept { return kind_; }
  const std::vector<int>& dof_vertices() const noexcept { return dof_vertices_; }
  int size() const noexcept { return static_cast<int>(dof_vertices_.size()); }
  /// Row index of vertex v, -1 when v carries no basis function.
  int dof_index(int v) const { return dof_index_.at(static_cast<std::size_t>(v)); }

 private:
  WhitneyKind kind_;
  std::vector<int> dof_vertices_;
  std::vector<int> dof_index_;
};

WhitneySpace whitney_basis(const Triangulation& tri, WhitneyKind kind);

/// phi_a restricted to cell c, in the centered coordinates of t (the cell's simplex).
Polynomial whitney_function(const Triangulation& tri, int c, const Simplex& t, int vertex);
/// phi_a as a 0-form.
PolyForm whitney_zero_form(const Triangulation& tri, int c, const Simplex& t, int vertex);
/// phi_a dx^{12}, the volume-form counterpart used for the rot constraints.
PolyForm whitney_volume_form(const Triangulation& tri, int c, const Simplex& t, int vertex);

}  // namespace nchodge
