#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "skesim/geometry.hpp"

namespace skesim {

using NodeId = std::int32_t;
using EdgeId = std::int32_t;
inline constexpr NodeId kInvalidNode = -1;
inline constexpr EdgeId kInvalidEdge = -1;

// A node carries the incidence bookkeeping next to the core model fields.
// `mark` is the clamped incident-edge count that drives bifurcation: marks 1
// and 2 may still grow, mark 3 is terminal. `degree` keeps the true incident
// count when the clamp kicks in (junctions of degree four stay mark 3).
struct Node {
  NodeId id = kInvalidNode;
  Point2 p;
  std::vector<Vec2> alpha;  // unit directions of edges arriving at p, at most two
  int mark = 1;
  bool is_root = false;

  int degree = 0;
  // Root only: arrivals counted before any edge exists, so the first
  // bifurcation rule is well defined on a bare root.
  int virtual_inflows = 0;
  // Set when a clip at the region boundary retires the node regardless of its
  // incident count.
  bool forced_terminal = false;
  std::vector<EdgeId> in_edges;
  std::vector<EdgeId> out_edges;
};

struct Edge {
  EdgeId id = kInvalidEdge;
  NodeId father = kInvalidNode;
  NodeId son = kInvalidNode;
};

struct Violation {
  std::string code;  // "ref", "edge-length", "alpha", "mark", "connectivity", "cycle", "planarity"
  std::string detail;
};

class Skeleton {
 public:
  NodeId add_node(Point2 p, int mark);
  // Wires incidence lists, degrees and the son's arrival direction.
  // Marks are the caller's business; the growth rules own them.
  EdgeId add_edge(NodeId father, NodeId son);

  // Splits edge e at interior point q. Edge e keeps its father and ends at the
  // new node; a fresh edge continues to the old son. Returns the new node id.
  NodeId split_edge(EdgeId e, Point2 q);

  Node& node(NodeId id) { return nodes_[static_cast<std::size_t>(id)]; }
  const Node& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  Edge& edge(EdgeId id) { return edges_[static_cast<std::size_t>(id)]; }
  const Edge& edge(EdgeId id) const { return edges_[static_cast<std::size_t>(id)]; }

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::vector<Node>& nodes() { return nodes_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  NodeId root() const { return root_; }
  void set_root(NodeId id) { root_ = id; }

  Point2 father_point(EdgeId e) const { return node(edge(e).father).p; }
  Point2 son_point(EdgeId e) const { return node(edge(e).son).p; }
  double edge_length(EdgeId e) const { return (son_point(e) - father_point(e)).norm(); }
  Vec2 edge_direction(EdgeId e) const;  // unit, father -> son

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  NodeId root_ = kInvalidNode;
};

// Empty result iff every skeleton invariant holds: valid references, positive
// edge lengths, unit arrival directions, mark consistency, connectivity from
// the root, directed acyclicity, and planarity (edges may only touch at shared
// endpoint nodes; checked pairwise).
std::vector<Violation> validate(const Skeleton& sk);

// Rigid transform of the whole skeleton: rotate by rot_radians about the
// origin, then translate. Arrival directions rotate along.
Skeleton transformed(const Skeleton& sk, double rot_radians, Vec2 translation);

// CSV exchange format, one row per edge:
//   # root=<node_id>
//   edge_id,father_id,son_id,fx,fy,sx,sy,father_mark,son_mark
// Coordinates are printed with nine significant digits.
void write_skeleton_csv(const Skeleton& sk, std::ostream& out);
void write_skeleton_csv_file(const Skeleton& sk, const std::string& path);
Skeleton read_skeleton_csv(std::istream& in);
Skeleton read_skeleton_csv_file(const std::string& path);

}  // namespace skesim
