#include "skesim/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "skesim/errors.hpp"

namespace skesim {

namespace {

std::string fmt_coord(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

NodeId Skeleton::add_node(Point2 p, int mark) {
  Node n;
  n.id = static_cast<NodeId>(nodes_.size());
  n.p = p;
  n.mark = mark;
  nodes_.push_back(std::move(n));
  return nodes_.back().id;
}

EdgeId Skeleton::add_edge(NodeId father, NodeId son) {
  if (father == son) {
    throw std::invalid_argument("add_edge: father == son");
  }
  Edge e;
  e.id = static_cast<EdgeId>(edges_.size());
  e.father = father;
  e.son = son;
  edges_.push_back(e);

  Node& f = node(father);
  Node& s = node(son);
  f.out_edges.push_back(e.id);
  s.in_edges.push_back(e.id);
  f.degree += 1;
  s.degree += 1;
  if (s.alpha.size() < 2) {
    s.alpha.push_back(normalized(s.p - f.p));
  }
  return e.id;
}

NodeId Skeleton::split_edge(EdgeId eid, Point2 q) {
  Edge& e = edge(eid);
  const NodeId old_son = e.son;
  const Vec2 dir = edge_direction(eid);

  Node mid;
  mid.id = static_cast<NodeId>(nodes_.size());
  mid.p = q;
  mid.mark = 2;
  mid.degree = 2;
  mid.alpha.push_back(dir);
  mid.in_edges.push_back(eid);
  nodes_.push_back(std::move(mid));
  const NodeId mid_id = nodes_.back().id;

  Edge tail;
  tail.id = static_cast<EdgeId>(edges_.size());
  tail.father = mid_id;
  tail.son = old_son;
  edges_.push_back(tail);

  edge(eid).son = mid_id;
  node(mid_id).out_edges.push_back(tail.id);

  // The old son keeps its arrival direction (the split is collinear); only the
  // incoming edge id changes.
  Node& son_node = node(old_son);
  std::replace(son_node.in_edges.begin(), son_node.in_edges.end(), eid, tail.id);
  return mid_id;
}

Vec2 Skeleton::edge_direction(EdgeId e) const {
  return normalized(son_point(e) - father_point(e));
}

namespace {

void check_refs(const Skeleton& sk, std::vector<Violation>& out) {
  const auto n = static_cast<NodeId>(sk.node_count());
  if (sk.root() < 0 || sk.root() >= n) {
    out.push_back({"ref", "root id " + std::to_string(sk.root()) + " out of range"});
  }
  for (const Edge& e : sk.edges()) {
    if (e.father < 0 || e.father >= n || e.son < 0 || e.son >= n) {
      out.push_back({"ref", "edge " + std::to_string(e.id) + " references missing node"});
    } else if (e.father == e.son) {
      out.push_back({"ref", "edge " + std::to_string(e.id) + " is a self loop"});
    }
  }
}

void check_edges(const Skeleton& sk, std::vector<Violation>& out) {
  for (const Edge& e : sk.edges()) {
    if (sk.edge_length(e.id) <= kGeomEps) {
      out.push_back({"edge-length",
                     "edge " + std::to_string(e.id) + " has zero length"});
    }
  }
}

void check_alpha(const Skeleton& sk, std::vector<Violation>& out) {
  for (const Node& nd : sk.nodes()) {
    if (nd.alpha.size() > 2) {
      out.push_back({"alpha", "node " + std::to_string(nd.id) +
                                  " stores more than two arrival directions"});
    }
    for (const Vec2& a : nd.alpha) {
      if (std::abs(a.norm() - 1.0) > kGeomEps) {
        out.push_back({"alpha", "node " + std::to_string(nd.id) +
                                    " arrival direction is not unit length"});
      }
    }
  }
}

void check_marks(const Skeleton& sk, std::vector<Violation>& out) {
  for (const Node& nd : sk.nodes()) {
    if (nd.mark < 1 || nd.mark > 3) {
      out.push_back({"mark", "node " + std::to_string(nd.id) + " has mark " +
                                 std::to_string(nd.mark)});
      continue;
    }
    const int expected = std::min(3, nd.degree + nd.virtual_inflows);
    const bool ok = nd.mark == expected || (nd.forced_terminal && nd.mark == 3);
    if (!ok) {
      out.push_back({"mark", "node " + std::to_string(nd.id) + " mark " +
                                 std::to_string(nd.mark) + " != expected " +
                                 std::to_string(expected)});
    }
  }
}

void check_connectivity(const Skeleton& sk, std::vector<Violation>& out) {
  if (sk.node_count() == 0 || sk.root() < 0 ||
      sk.root() >= static_cast<NodeId>(sk.node_count())) {
    return;
  }
  std::vector<char> seen(sk.node_count(), 0);
  std::deque<NodeId> queue{sk.root()};
  seen[static_cast<std::size_t>(sk.root())] = 1;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const NodeId cur = queue.front();
    queue.pop_front();
    const Node& nd = sk.node(cur);
    auto visit = [&](NodeId other) {
      if (!seen[static_cast<std::size_t>(other)]) {
        seen[static_cast<std::size_t>(other)] = 1;
        ++reached;
        queue.push_back(other);
      }
    };
    for (EdgeId e : nd.out_edges) visit(sk.edge(e).son);
    for (EdgeId e : nd.in_edges) visit(sk.edge(e).father);
  }
  if (reached != sk.node_count()) {
    out.push_back({"connectivity",
                   std::to_string(sk.node_count() - reached) +
                       " node(s) unreachable from root"});
  }
}

void check_acyclic(const Skeleton& sk, std::vector<Violation>& out) {
  // Iterative three-color DFS over the directed graph.
  enum : char { kWhite, kGray, kBlack };
  std::vector<char> color(sk.node_count(), kWhite);
  for (const Node& start : sk.nodes()) {
    if (color[static_cast<std::size_t>(start.id)] != kWhite) {
      continue;
    }
    std::vector<std::pair<NodeId, std::size_t>> stack{{start.id, 0}};
    color[static_cast<std::size_t>(start.id)] = kGray;
    while (!stack.empty()) {
      auto& [cur, idx] = stack.back();
      const Node& nd = sk.node(cur);
      if (idx < nd.out_edges.size()) {
        const NodeId next = sk.edge(nd.out_edges[idx]).son;
        ++idx;
        const auto ni = static_cast<std::size_t>(next);
        if (color[ni] == kGray) {
          out.push_back({"cycle", "directed cycle through node " +
                                      std::to_string(next)});
          return;
        }
        if (color[ni] == kWhite) {
          color[ni] = kGray;
          stack.emplace_back(next, 0);
        }
      } else {
        color[static_cast<std::size_t>(cur)] = kBlack;
        stack.pop_back();
      }
    }
  }
}

void check_planarity(const Skeleton& sk, std::vector<Violation>& out) {
  const auto& edges = sk.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const Edge& ea = edges[i];
      const Edge& eb = edges[j];
      const Point2 a1 = sk.node(ea.father).p;
      const Point2 a2 = sk.node(ea.son).p;
      const Point2 b1 = sk.node(eb.father).p;
      const Point2 b2 = sk.node(eb.son).p;
      if ((a2 - a1).norm() <= kGeomEps || (b2 - b1).norm() <= kGeomEps) {
        continue;  // degenerate edges are reported by check_edges
      }
      const ContactReport c = classify_segment_contact(a1, a2, b1, b2);
      if (c.kind == SegmentContact::kNone) {
        continue;
      }
      bool legal = false;
      if (c.kind == SegmentContact::kPoint) {
        for (NodeId shared : {ea.father, ea.son}) {
          if ((shared == eb.father || shared == eb.son) &&
              (sk.node(shared).p - c.point).norm() <= 1e-7) {
            legal = true;
            break;
          }
        }
      }
      if (!legal) {
        out.push_back({"planarity", "edges " + std::to_string(ea.id) + " and " +
                                        std::to_string(eb.id) +
                                        " intersect away from a shared node"});
      }
    }
  }
}

}  // namespace

std::vector<Violation> validate(const Skeleton& sk) {
  std::vector<Violation> out;
  check_refs(sk, out);
  if (!out.empty()) {
    return out;  // downstream checks assume resolvable ids
  }
  check_edges(sk, out);
  check_alpha(sk, out);
  check_marks(sk, out);
  check_connectivity(sk, out);
  check_acyclic(sk, out);
  check_planarity(sk, out);
  return out;
}

Skeleton transformed(const Skeleton& sk, double rot_radians, Vec2 translation) {
  Skeleton out = sk;
  for (Node& nd : out.nodes()) {
    nd.p = rotated(nd.p, rot_radians) + translation;
    for (Vec2& a : nd.alpha) {
      a = rotated(a, rot_radians);
    }
  }
  return out;
}

void write_skeleton_csv(const Skeleton& sk, std::ostream& out) {
  out << "# root=" << sk.root() << "\n";
  out << "edge_id,father_id,son_id,fx,fy,sx,sy,father_mark,son_mark\n";
  for (const Edge& e : sk.edges()) {
    const Node& f = sk.node(e.father);
    const Node& s = sk.node(e.son);
    out << e.id << ',' << e.father << ',' << e.son << ',' << fmt_coord(f.p.x)
        << ',' << fmt_coord(f.p.y) << ',' << fmt_coord(s.p.x) << ','
        << fmt_coord(s.p.y) << ',' << f.mark << ',' << s.mark << "\n";
  }
}

void write_skeleton_csv_file(const Skeleton& sk, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open for writing: " + path);
  }
  write_skeleton_csv(sk, out);
  if (!out) {
    throw IoError("write failed: " + path);
  }
}

Skeleton read_skeleton_csv(std::istream& in) {
  struct Row {
    EdgeId id;
    NodeId father, son;
    Point2 fp, sp;
    int fmark, smark;
  };
  std::vector<Row> rows;
  NodeId root = kInvalidNode;
  bool have_root = false;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    if (line[0] == '#') {
      const auto pos = line.find("root=");
      if (pos != std::string::npos) {
        try {
          root = static_cast<NodeId>(std::stol(line.substr(pos + 5)));
        } catch (const std::exception&) {
          throw ValidationError("skeleton csv: bad root comment: " + line);
        }
        have_root = true;
      }
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("edge_id,", 0) == 0) {
        continue;
      }
      throw ValidationError("skeleton csv: missing header line");
    }
    Row r{};
    std::istringstream ls(line);
    std::string field;
    auto next = [&]() -> std::string {
      if (!std::getline(ls, field, ',')) {
        throw ValidationError("skeleton csv: short row: " + line);
      }
      return field;
    };
    try {
      r.id = static_cast<EdgeId>(std::stol(next()));
      r.father = static_cast<NodeId>(std::stol(next()));
      r.son = static_cast<NodeId>(std::stol(next()));
      r.fp.x = std::stod(next());
      r.fp.y = std::stod(next());
      r.sp.x = std::stod(next());
      r.sp.y = std::stod(next());
      r.fmark = static_cast<int>(std::stol(next()));
      r.smark = static_cast<int>(std::stol(next()));
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception&) {
      throw ValidationError("skeleton csv: bad row: " + line);
    }
    rows.push_back(r);
  }
  if (!have_root) {
    throw ValidationError("skeleton csv: missing '# root=' line");
  }
  if (rows.empty()) {
    throw ValidationError("skeleton csv: no edges");
  }

  // Collect node ids, checking that repeated ids agree on coordinates/marks.
  std::map<NodeId, std::pair<Point2, int>> node_info;
  auto note = [&](NodeId id, Point2 p, int mark) {
    auto [it, inserted] = node_info.try_emplace(id, std::make_pair(p, mark));
    if (!inserted) {
      if ((it->second.first - p).norm() > 1e-6 || it->second.second != mark) {
        throw ValidationError("skeleton csv: node " + std::to_string(id) +
                              " has conflicting rows");
      }
    }
  };
  for (const Row& r : rows) {
    note(r.father, r.fp, r.fmark);
    note(r.son, r.sp, r.smark);
  }
  if (node_info.find(root) == node_info.end()) {
    throw ValidationError("skeleton csv: root node never appears in an edge");
  }

  // Node ids in the file may be sparse; remap to dense storage order.
  Skeleton sk;
  std::map<NodeId, NodeId> remap;
  for (const auto& [id, info] : node_info) {
    remap[id] = sk.add_node(info.first, info.second);
  }
  std::sort(rows.begin(), rows.end(),
            [](const Row& a, const Row& b) { return a.id < b.id; });
  for (const Row& r : rows) {
    sk.add_edge(remap[r.father], remap[r.son]);
  }
  sk.set_root(remap[root]);

  // Reconstruct bookkeeping the format does not carry.
  Node& root_node = sk.node(sk.root());
  root_node.is_root = true;
  root_node.virtual_inflows =
      std::clamp(root_node.mark - root_node.degree, 0, 2);
  if (root_node.alpha.empty() && !root_node.out_edges.empty()) {
    root_node.alpha.push_back(sk.edge_direction(root_node.out_edges.front()));
  }
  for (Node& nd : sk.nodes()) {
    if (!nd.is_root && nd.mark == 3 && nd.degree < 3) {
      nd.forced_terminal = true;
    }
  }
  return sk;
}

Skeleton read_skeleton_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open: " + path);
  }
  return read_skeleton_csv(in);
}

}  // namespace skesim
