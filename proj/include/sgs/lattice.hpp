// Copyright 2026 The SparseGS Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sgs {

/// Undirected simple qubit graph.
class LayoutGraph {
 public:
  LayoutGraph() = default;
  LayoutGraph(int n_qubits, const std::vector<std::pair<int, int>>& edges);

  int n_qubits() const noexcept { return n_; }
  /// Edges normalized to (min, max), sorted.
  const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }
  const std::vector<int>& neighbors(int q) const { return adj_.at(q); }
  bool has_edge(int u, int v) const;
  int degree(int q) const { return static_cast<int>(adj_.at(q).size()); }
  /// BFS distance, or -1 if disconnected.
  int distance(int u, int v) const;

  /// Optional planar coordinates (x, y) per qubit for emitted layouts.
  std::vector<std::pair<int, int>> coords;

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
};

/// Heavy-hex lattice: a rows x cols honeycomb with every edge subdivided.
/// Qubits are numbered row-major over doubled-grid coordinates.
LayoutGraph build_heavy_hex(int rows, int cols);
LayoutGraph build_path(int n);
LayoutGraph build_grid(int rows, int cols);

struct PatchEmbedding {
  std::vector<std::vector<int>> paths;
  std::vector<int> padding;
  int skips = 0;  ///< number of path steps that jump over one qubit
};

struct EmbedOptions {
  std::uint64_t seed = 0;
  /// -1: escalate from 0 until an embedding exists; otherwise a fixed budget.
  int max_skips = -1;
  int skip_ceiling = 8;
  std::uint64_t max_expansions = 1'000'000;
  std::uint64_t restart_expansions = 5'000;
};

class EmbeddingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vertex-disjoint paths of `path_len` qubits. A step is a layout edge, or a
/// jump to a distance-2 qubit when the skip budget allows it.
PatchEmbedding embed_patches(const LayoutGraph& g, int n_patch, int path_len,
                             const EmbedOptions& opt = {});

/// Empty string when valid, else a reason.
std::string validate_embedding(const LayoutGraph& g, const PatchEmbedding& emb, int path_len,
                               int max_skips);

enum class CouplingMode { Warmup, Main };

struct DirectedEdge {
  int control;
  int target;
  friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
};

/// Edges carrying H_int.
/// Main: every edge with an S1 (odd path position) endpoint, oriented with the
/// S1 endpoint as control; an S1-S1 edge appears once per orientation.
/// Warmup: edges touching no patch qubit, or whose only patch qubit is a
/// coupling qubit (path position 0). Orientation is (min, max) unless the
/// coupling qubit is present, in which case it is the control.
std::vector<DirectedEdge> classify_edges(const LayoutGraph& g, const PatchEmbedding& emb,
                                         CouplingMode mode);

std::string layout_to_json(const LayoutGraph& g, const PatchEmbedding* emb = nullptr);
LayoutGraph layout_from_json(const std::string& text, PatchEmbedding* emb = nullptr);

}  // namespace sgs
