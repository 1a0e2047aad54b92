// Copyright 2026 The SparseGS Authors
// SPDX-License-Identifier: Apache-2.0

#include "sgs/lattice.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include <json.hpp>

#include "sgs/rng.hpp"

namespace sgs {

LayoutGraph::LayoutGraph(int n_qubits, const std::vector<std::pair<int, int>>& edges)
    : n_(n_qubits), adj_(static_cast<std::size_t>(n_qubits)) {
  if (n_qubits < 0) throw std::invalid_argument("negative qubit count");
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    if (u == v) throw std::invalid_argument("self-loop in layout");
    if (u < 0 || v < 0 || u >= n_ || v >= n_) throw std::invalid_argument("edge endpoint out of range");
    seen.insert({std::min(u, v), std::max(u, v)});
  }
  edges_.assign(seen.begin(), seen.end());
  for (auto [u, v] : edges_) {
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
}

bool LayoutGraph::has_edge(int u, int v) const {
  if (u < 0 || u >= n_) return false;
  return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

int LayoutGraph::distance(int u, int v) const {
  if (u == v) return 0;
  std::vector<int> dist(n_, -1);
  std::deque<int> q{u};
  dist[u] = 0;
  while (!q.empty()) {
    int a = q.front();
    q.pop_front();
    for (int b : adj_[a]) {
      if (dist[b] >= 0) continue;
      dist[b] = dist[a] + 1;
      if (b == v) return dist[b];
      q.push_back(b);
    }
  }
  return -1;
}

LayoutGraph build_heavy_hex(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("heavy-hex needs rows, cols >= 1");
  // Honeycomb as a brick wall: vertex (i, j), column i in [0, cols], row j in
  // [0, 2*rows+1]. Vertical links join (i,j)-(i,j+1); horizontal links join
  // (i,j)-(i+1,j) when i and j have equal parity. Two dangling corners go.
  const int nr = 2 * rows + 2;
  std::set<std::pair<int, int>> verts;
  std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> links;
  for (int i = 0; i <= cols; ++i)
    for (int j = 0; j + 1 < nr; ++j) links.push_back({{i, j}, {i, j + 1}});
  for (int i = 0; i < cols; ++i)
    for (int j = 0; j < nr; ++j)
      if (i % 2 == j % 2) links.push_back({{i, j}, {i + 1, j}});
  const std::pair<int, int> drop1{0, nr - 1}, drop2{cols, (nr - 1) * (cols % 2)};
  std::erase_if(links, [&](const auto& l) {
    return l.first == drop1 || l.second == drop1 || l.first == drop2 || l.second == drop2;
  });

  // Doubled-grid coordinates: vertices at (2i, 2j), link midpoints between.
  std::set<std::pair<int, int>> points;  // (y, x) for row-major order
  for (const auto& [a, b] : links) {
    points.insert({2 * a.second, 2 * a.first});
    points.insert({2 * b.second, 2 * b.first});
    points.insert({a.second + b.second, a.first + b.first});
  }
  std::map<std::pair<int, int>, int> index;
  std::vector<std::pair<int, int>> coords;
  for (const auto& p : points) {
    index[p] = static_cast<int>(coords.size());
    coords.push_back({p.second, p.first});
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& [a, b] : links) {
    const int ia = index.at({2 * a.second, 2 * a.first});
    const int ib = index.at({2 * b.second, 2 * b.first});
    const int im = index.at({a.second + b.second, a.first + b.first});
    edges.push_back({ia, im});
    edges.push_back({im, ib});
  }
  LayoutGraph g(static_cast<int>(coords.size()), edges);
  g.coords = std::move(coords);
  return g;
}

LayoutGraph build_path(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  LayoutGraph g(n, e);
  for (int i = 0; i < n; ++i) g.coords.push_back({i, 0});
  return g;
}

LayoutGraph build_grid(int rows, int cols) {
  std::vector<std::pair<int, int>> e;
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) e.push_back({id(r, c), id(r, c + 1)});
      if (r + 1 < rows) e.push_back({id(r, c), id(r + 1, c)});
    }
  LayoutGraph g(rows * cols, e);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) g.coords.push_back({c, r});
  return g;
}

// ---------------------------------------------------------------- embedding

namespace {

struct PathSearch {
  const LayoutGraph& g;
  int n_patch, len, max_skips;
  Rng& rng;
  std::uint64_t budget;
  std::uint64_t count = 0;
  std::vector<char> used;
  std::vector<std::vector<int>> second;  // distance-2 neighbors
  std::vector<std::vector<int>> paths;

  PathSearch(const LayoutGraph& graph, int np, int l, int ms, Rng& r, std::uint64_t b,
             const std::vector<std::vector<int>>& d2)
      : g(graph), n_patch(np), len(l), max_skips(ms), rng(r), budget(b),
        used(graph.n_qubits(), 0), second(d2) {}

  int free_degree(int v) const {
    int d = 0;
    for (int w : g.neighbors(v)) d += !used[w];
    return d;
  }

  bool place(int k, int skips) {
    if (k == n_patch) return true;
    std::vector<int> starts;
    for (int v = 0; v < g.n_qubits(); ++v)
      if (!used[v]) starts.push_back(v);
    rng.shuffle(starts);
    std::stable_sort(starts.begin(), starts.end(),
                     [this](int a, int b) { return free_degree(a) < free_degree(b); });
    if (starts.size() > 3) starts.resize(3);
    for (int s : starts) {
      used[s] = 1;
      std::vector<int> path{s};
      if (grow(k, path, skips)) return true;
      used[s] = 0;
      if (count > budget) return false;
    }
    return false;
  }

  bool grow(int k, std::vector<int>& path, int skips) {
    if (++count > budget) return false;
    if (static_cast<int>(path.size()) == len) {
      paths.push_back(path);
      if (place(k + 1, skips)) return true;
      paths.pop_back();
      return false;
    }
    const int u = path.back();
    std::vector<std::pair<int, int>> next;  // (vertex, is_skip)
    for (int v : g.neighbors(u))
      if (!used[v]) next.push_back({v, 0});
    if (skips < max_skips)
      for (int v : second[u])
        if (!used[v]) next.push_back({v, 1});
    rng.shuffle(next);
    std::stable_sort(next.begin(), next.end(), [this](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second < b.second;
      return free_degree(a.first) < free_degree(b.first);
    });
    for (auto [v, sk] : next) {
      used[v] = 1;
      path.push_back(v);
      if (grow(k, path, skips + sk)) return true;
      path.pop_back();
      used[v] = 0;
      if (count > budget) return false;
    }
    return false;
  }
};

}  // namespace

PatchEmbedding embed_patches(const LayoutGraph& g, int n_patch, int path_len,
                             const EmbedOptions& opt) {
  if (n_patch < 0 || path_len < 1) throw std::invalid_argument("bad patch request");
  if (n_patch * path_len > g.n_qubits())
    throw EmbeddingError("patches need more qubits than the layout has");

  std::vector<std::vector<int>> d2(g.n_qubits());
  for (int u = 0; u < g.n_qubits(); ++u) {
    std::set<int> s;
    for (int v : g.neighbors(u))
      for (int w : g.neighbors(v))
        if (w != u && !g.has_edge(u, w)) s.insert(w);
    d2[u].assign(s.begin(), s.end());
  }

  const int lo = opt.max_skips < 0 ? 0 : opt.max_skips;
  const int hi = opt.max_skips < 0 ? opt.skip_ceiling : opt.max_skips;
  for (int ms = lo; ms <= hi; ++ms) {
    Rng rng(Rng::split(opt.seed, static_cast<std::uint64_t>(ms)));
    std::uint64_t spent = 0;
    while (spent < opt.max_expansions) {
      const std::uint64_t slice = std::min(opt.restart_expansions, opt.max_expansions - spent);
      PathSearch s(g, n_patch, path_len, ms, rng, slice, d2);
      const bool ok = s.place(0, 0);
      spent += std::min(s.count, slice);
      if (!ok) continue;
      PatchEmbedding emb;
      emb.paths = s.paths;
      std::vector<char> used(g.n_qubits(), 0);
      for (const auto& p : emb.paths) {
        for (std::size_t i = 0; i < p.size(); ++i) {
          used[p[i]] = 1;
          if (i > 0 && !g.has_edge(p[i - 1], p[i])) ++emb.skips;
        }
      }
      for (int v = 0; v < g.n_qubits(); ++v)
        if (!used[v]) emb.padding.push_back(v);
      return emb;
    }
  }
  throw EmbeddingError("no embedding found within the expansion budget");
}

std::string validate_embedding(const LayoutGraph& g, const PatchEmbedding& emb, int path_len,
                               int max_skips) {
  std::vector<int> seen(g.n_qubits(), 0);
  int skips = 0;
  for (const auto& p : emb.paths) {
    if (static_cast<int>(p.size()) != path_len) return "path has wrong length";
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] < 0 || p[i] >= g.n_qubits()) return "path qubit out of range";
      if (seen[p[i]]++) return "paths are not vertex-disjoint";
      if (i == 0 || g.has_edge(p[i - 1], p[i])) continue;
      if (g.distance(p[i - 1], p[i]) != 2) return "path step is neither an edge nor a skip";
      ++skips;
    }
  }
  if (skips > max_skips) return "too many skip steps";
  if (skips != emb.skips) return "recorded skip count disagrees";
  for (int v : emb.padding) {
    if (v < 0 || v >= g.n_qubits()) return "padding qubit out of range";
    if (seen[v]++) return "padding overlaps a path";
  }
  for (int v = 0; v < g.n_qubits(); ++v)
    if (!seen[v]) return "qubit neither in a path nor padding";
  return {};
}

std::vector<DirectedEdge> classify_edges(const LayoutGraph& g, const PatchEmbedding& emb,
                                         CouplingMode mode) {
  // role: -1 free, 0 even position (S0 / coupling), 1 odd position (S1),
  // 2 warmup core qubit.
  std::vector<int> role(g.n_qubits(), -1);
  for (const auto& p : emb.paths) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] < 0 || p[i] >= g.n_qubits()) throw std::invalid_argument("invalid embedding");
      if (mode == CouplingMode::Main)
        role[p[i]] = static_cast<int>(i % 2);
      else
        role[p[i]] = i == 0 ? 0 : 2;
    }
  }
  std::vector<DirectedEdge> out;
  for (auto [u, v] : g.edges()) {
    if (mode == CouplingMode::Main) {
      if (role[u] == 1) out.push_back({u, v});
      if (role[v] == 1) out.push_back({v, u});
    } else {
      if (role[u] == 2 || role[v] == 2) continue;
      if (role[v] == 0 && role[u] != 0)
        out.push_back({v, u});
      else
        out.push_back({u, v});
    }
  }
  return out;
}

std::string layout_to_json(const LayoutGraph& g, const PatchEmbedding* emb) {
  nlohmann::ordered_json j;
  j["n_qubits"] = g.n_qubits();
  j["edges"] = g.edges();
  if (!g.coords.empty()) j["coords"] = g.coords;
  if (emb) {
    j["paths"] = emb->paths;
    j["padding"] = emb->padding;
    j["skips"] = emb->skips;
  }
  return j.dump();
}

LayoutGraph layout_from_json(const std::string& text, PatchEmbedding* emb) {
  auto j = nlohmann::json::parse(text);
  LayoutGraph g(j.at("n_qubits").get<int>(), j.at("edges").get<std::vector<std::pair<int, int>>>());
  if (j.contains("coords")) g.coords = j["coords"].get<std::vector<std::pair<int, int>>>();
  if (emb) {
    emb->paths = j.value("paths", std::vector<std::vector<int>>{});
    emb->padding = j.value("padding", std::vector<int>{});
    emb->skips = j.value("skips", 0);
  }
  return g;
}

}  // namespace sgs
