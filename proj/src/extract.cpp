#include "skesim/extract.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "skesim/errors.hpp"

namespace skesim {

namespace {

constexpr std::array<std::pair<int, int>, 8> kRing{{
    {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1},
}};

std::vector<std::size_t> component_sizes(const BinaryImage& bm) {
  std::vector<std::uint8_t> seen(bm.fg.size(), 0);
  std::vector<std::size_t> sizes;
  for (int y = 0; y < bm.height; ++y) {
    for (int x = 0; x < bm.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * bm.width + x;
      if (bm.fg[i] == 0 || seen[i]) {
        continue;
      }
      std::size_t size = 0;
      std::deque<std::pair<int, int>> queue{{x, y}};
      seen[i] = 1;
      while (!queue.empty()) {
        const auto [cx, cy] = queue.front();
        queue.pop_front();
        ++size;
        for (const auto& [dx, dy] : kRing) {
          const int nx = cx + dx, ny = cy + dy;
          if (!bm.at(nx, ny)) {
            continue;
          }
          const std::size_t ni = static_cast<std::size_t>(ny) * bm.width + nx;
          if (!seen[ni]) {
            seen[ni] = 1;
            queue.emplace_back(nx, ny);
          }
        }
      }
      sizes.push_back(size);
    }
  }
  return sizes;
}

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) {
      parent[i] = static_cast<int>(i);
    }
  }
  int find(int i) {
    while (parent[i] != i) {
      i = parent[i] = parent[parent[i]];
    }
    return i;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

ExtractResult extract_graph(const PixelSkeleton& ps, Point2 root_hint) {
  const BinaryImage& bm = ps.mask;
  {
    const auto sizes = component_sizes(bm);
    if (sizes.size() != 1) {
      std::ostringstream msg;
      msg << "extract: skeleton has " << sizes.size()
          << " components (sizes:";
      for (std::size_t s : sizes) {
        msg << ' ' << s;
      }
      msg << ")";
      throw ValidationError(msg.str());
    }
  }

  const PixelClasses pc = classify_pixels(ps);
  std::vector<std::pair<int, int>> node_px = pc.branch_points;
  node_px.insert(node_px.end(), pc.end_points.begin(), pc.end_points.end());
  std::sort(node_px.begin(), node_px.end(),
            [](const auto& a, const auto& b) {
              return a.second != b.second ? a.second < b.second
                                          : a.first < b.first;
            });
  if (node_px.empty()) {
    throw ValidationError("extract: skeleton has no end or branch pixels");
  }

  // Clustered branch pixels (thinning often leaves two junction pixels side
  // by side) collapse into one node.
  Dsu dsu(node_px.size());
  for (std::size_t i = 0; i < node_px.size(); ++i) {
    for (std::size_t j = i + 1; j < node_px.size(); ++j) {
      const int dx = node_px[i].first - node_px[j].first;
      const int dy = node_px[i].second - node_px[j].second;
      if (dx * dx + dy * dy <= 4) {
        dsu.unite(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  std::map<int, int> cluster_of_root;  // dsu root -> dense cluster index
  std::vector<Point2> centroid;
  std::vector<int> cluster_size;
  std::map<std::pair<int, int>, int> cluster_of_px;
  for (std::size_t i = 0; i < node_px.size(); ++i) {
    const int r = dsu.find(static_cast<int>(i));
    auto [it, inserted] =
        cluster_of_root.try_emplace(r, static_cast<int>(centroid.size()));
    if (inserted) {
      centroid.push_back({0, 0});
      cluster_size.push_back(0);
    }
    const int c = it->second;
    centroid[c] = centroid[c] + Point2{double(node_px[i].first),
                                       double(node_px[i].second)};
    cluster_size[c] += 1;
    cluster_of_px[node_px[i]] = c;
  }
  for (std::size_t c = 0; c < centroid.size(); ++c) {
    centroid[c] = (1.0 / cluster_size[c]) * centroid[c];
  }

  // Trace every maximal pixel path between node pixels. Interior pixels have
  // exactly two neighbors, so each walk is forced; marking interiors visited
  // makes each path come out once.
  struct PathEdge {
    int a, b;  // cluster indices
  };
  std::vector<PathEdge> paths;
  std::vector<std::string> warnings;
  std::vector<std::uint8_t> visited(bm.fg.size(), 0);
  std::set<std::pair<std::pair<int, int>, std::pair<int, int>>> direct_seen;
  auto record = [&](int ca, int cb, std::size_t interior_len) {
    if (ca == cb) {
      if (interior_len > 4) {
        warnings.push_back("dropped a pixel loop of " +
                           std::to_string(interior_len) +
                           " pixels at cluster " + std::to_string(ca));
      }
      return;  // merged-junction fuzz or a loop; either way not an edge
    }
    paths.push_back({ca, cb});
  };
  for (const auto& np : node_px) {
    const int ca = cluster_of_px.at(np);
    for (const auto& [dx, dy] : kRing) {
      const int qx = np.first + dx, qy = np.second + dy;
      if (!bm.at(qx, qy)) {
        continue;
      }
      const auto qit = cluster_of_px.find({qx, qy});
      if (qit != cluster_of_px.end()) {
        // Two node pixels touch directly; count the pair once.
        auto key = std::minmax(np, std::pair{qx, qy});
        if (direct_seen.insert({key.first, key.second}).second) {
          record(ca, qit->second, 0);
        }
        continue;
      }
      const std::size_t qi = static_cast<std::size_t>(qy) * bm.width + qx;
      if (visited[qi]) {
        continue;  // path already traced from its other end
      }
      int px = np.first, py = np.second, cx = qx, cy = qy;
      std::size_t steps = 0;
      int cb = -1;
      while (true) {
        visited[static_cast<std::size_t>(cy) * bm.width + cx] = 1;
        ++steps;
        int nx = -1, ny = -1;
        for (const auto& [ddx, ddy] : kRing) {
          const int tx = cx + ddx, ty = cy + ddy;
          if (bm.at(tx, ty) && !(tx == px && ty == py)) {
            nx = tx;
            ny = ty;
            break;
          }
        }
        if (nx < 0) {
          break;  // dead end; the end pixel itself was a node, unreachable
        }
        const auto nit = cluster_of_px.find({nx, ny});
        if (nit != cluster_of_px.end()) {
          cb = nit->second;
          break;
        }
        px = cx;
        py = cy;
        cx = nx;
        cy = ny;
      }
      if (cb >= 0) {
        record(ca, cb, steps);
      }
    }
  }

  // Root: snap the hint to the skeleton, then to the nearest node cluster.
  double best_px = std::numeric_limits<double>::infinity();
  for (int y = 0; y < bm.height; ++y) {
    for (int x = 0; x < bm.width; ++x) {
      if (!bm.at(x, y)) {
        continue;
      }
      const double d = (Point2{double(x), double(y)} - root_hint).norm();
      best_px = std::min(best_px, d);
    }
  }
  if (best_px > 5.0) {
    throw ValidationError("extract: root hint is not within 5 px of the skeleton");
  }
  int root_cluster = 0;
  double best_cl = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroid.size(); ++c) {
    const double d = (centroid[c] - root_hint).norm();
    if (d < best_cl) {
      best_cl = d;
      root_cluster = static_cast<int>(c);
    }
  }

  // Orient away from the root; parallel paths and loops become back edges and
  // are dropped so the result stays a tree.
  std::vector<std::vector<std::pair<int, std::size_t>>> adj(centroid.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    adj[static_cast<std::size_t>(paths[i].a)].emplace_back(paths[i].b, i);
    adj[static_cast<std::size_t>(paths[i].b)].emplace_back(paths[i].a, i);
  }
  std::vector<char> node_seen(centroid.size(), 0);
  std::vector<char> path_used(paths.size(), 0);
  std::vector<std::pair<int, int>> tree_edges;  // (father cluster, son cluster)
  std::deque<int> queue{root_cluster};
  node_seen[static_cast<std::size_t>(root_cluster)] = 1;
  while (!queue.empty()) {
    const int cur = queue.front();
    queue.pop_front();
    for (const auto& [other, pi] : adj[static_cast<std::size_t>(cur)]) {
      if (path_used[pi]) {
        continue;
      }
      path_used[pi] = 1;
      if (node_seen[static_cast<std::size_t>(other)]) {
        warnings.push_back("dropped a cycle edge between clusters " +
                           std::to_string(cur) + " and " +
                           std::to_string(other));
        continue;
      }
      node_seen[static_cast<std::size_t>(other)] = 1;
      tree_edges.emplace_back(cur, other);
      queue.push_back(other);
    }
  }

  if (tree_edges.empty()) {
    throw ValidationError("extract: skeleton collapses to a single node");
  }

  ExtractResult out;
  out.warnings = std::move(warnings);
  Skeleton& sk = out.skeleton;
  for (const Point2& p : centroid) {
    sk.add_node(p, 1);
  }
  for (const auto& [f, s] : tree_edges) {
    sk.add_edge(f, s);
  }
  for (Node& nd : sk.nodes()) {
    nd.mark = std::min(3, nd.degree);
  }
  sk.set_root(root_cluster);
  Node& root_node = sk.node(root_cluster);
  root_node.is_root = true;
  // The root's virtual inflow points along its first trunk so the training
  // stage has a reference direction there; reloading the CSV rebuilds the
  // same vector.
  if (root_node.alpha.empty() && !root_node.out_edges.empty()) {
    root_node.alpha.push_back(sk.edge_direction(root_node.out_edges.front()));
  }
  return out;
}

}  // namespace skesim
