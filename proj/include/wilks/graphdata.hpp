#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "wilks/types.hpp"

namespace wilks {

// Simple undirected graph kept in canonical form: edges stored with
// first < second, sorted, no duplicates, no self-loops.
struct UndirectedGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> degrees;

  static UndirectedGraph from_edges(int n,
                                    std::vector<std::pair<int, int>> edges);
  int edge_count() const { return static_cast<int>(edges.size()); }
};

// Paired-comparison counts. wins(i, j) is the number of times item i beat
// item j; comparisons(i, j) = wins(i, j) + wins(j, i).
struct ComparisonData {
  int n = 0;
  std::vector<std::int64_t> win;  // n*n row-major

  static ComparisonData zeros(int n);

  std::int64_t wins(int i, int j) const {
    return win[static_cast<std::size_t>(i) * n + j];
  }
  std::int64_t& wins(int i, int j) {
    return win[static_cast<std::size_t>(i) * n + j];
  }
  std::int64_t comparisons(int i, int j) const {
    return wins(i, j) + wins(j, i);
  }
  std::int64_t out_wins(int i) const;

  // True when every pair has at least one comparison.
  bool dense() const;
};

// Edge-list format: '#' comments, two whitespace-separated 1-based node ids
// per line. An optional "#n <count>" line declares trailing isolated nodes,
// which an edge list cannot express otherwise.
UndirectedGraph read_edge_list(std::istream& in);
UndirectedGraph read_edge_list(const std::string& text);
UndirectedGraph read_edge_list_file(const std::string& path);
void write_edge_list(const UndirectedGraph& g, std::ostream& out);

// Comparison CSV: rows "i,j,wins_of_i_over_j" with 1-based ids, optional
// header, repeated (i, j) rows accumulate.
ComparisonData read_comparisons(std::istream& in);
ComparisonData read_comparisons(const std::string& text);
ComparisonData read_comparisons_file(const std::string& path);
void write_comparisons(const ComparisonData& data, std::ostream& out);

// True iff the win digraph (arc i -> j when wins(i, j) > 0) has a single
// strongly connected component covering all items.
bool is_strongly_connected(const ComparisonData& data);

// Stateless seed derivation so replicate k of a run is reproducible
// regardless of scheduling.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

// Each pair {i, j} appears independently with probability
// sigmoid(beta_i + beta_j).
UndirectedGraph simulate_beta_graph(const ParamVector& beta,
                                    std::uint64_t rng_seed);

// wins(i, j) ~ Binomial(k_common, sigmoid(beta_i - beta_j)) for i < j,
// with wins(j, i) the complement.
ComparisonData simulate_bt_data(const ParamVector& beta, int k_common,
                                std::uint64_t rng_seed);

}  // namespace wilks
