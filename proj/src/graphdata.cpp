#include "wilks/graphdata.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "wilks/errors.hpp"
#include "wilks/numerics.hpp"

namespace wilks {

namespace {

bool blank_or_comment(const std::string& line) {
  for (char ch : line) {
    if (ch == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

// "#n <count>" declares the node count; any other '#' line is a comment.
bool parse_count_header(const std::string& line, long line_no, int* n_out) {
  std::istringstream ss(line);
  std::string tag;
  ss >> tag;
  if (tag != "#n") return false;
  long long n = 0;
  if (!(ss >> n) || n < 1) {
    throw parse_error("malformed #n header", line_no);
  }
  *n_out = static_cast<int>(n);
  return true;
}

long long parse_id(const std::string& tok, long line_no) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    throw parse_error("expected integer, got '" + tok + "'", line_no);
  }
  if (pos != tok.size()) {
    throw parse_error("expected integer, got '" + tok + "'", line_no);
  }
  if (v < 1) throw parse_error("node ids are 1-based, got " + tok, line_no);
  return v;
}

// Canonical double in [0, 1) from 53 random bits; avoids the
// implementation-defined std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

UndirectedGraph UndirectedGraph::from_edges(
    int n, std::vector<std::pair<int, int>> edges) {
  if (n < 2) throw dimension_mismatch("graph needs at least 2 nodes");
  for (auto& [a, b] : edges) {
    if (a == b) {
      throw self_loop_error("self-loop at node " + std::to_string(a + 1));
    }
    if (a < 0 || b < 0 || a >= n || b >= n) {
      throw dimension_mismatch("edge endpoint outside node range");
    }
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  UndirectedGraph g;
  g.n = n;
  g.edges = std::move(edges);
  g.degrees.assign(n, 0);
  for (const auto& [a, b] : g.edges) {
    ++g.degrees[a];
    ++g.degrees[b];
  }
  return g;
}

UndirectedGraph read_edge_list(std::istream& in) {
  std::vector<std::pair<int, int>> edges;
  int declared_n = 0;
  int max_id = 0;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank_or_comment(line)) {
      int n = 0;
      if (parse_count_header(line, line_no, &n)) {
        declared_n = std::max(declared_n, n);
      }
      continue;
    }
    std::istringstream ss(line);
    std::string ta, tb, extra;
    if (!(ss >> ta >> tb)) {
      throw parse_error("expected two node ids", line_no);
    }
    if (ss >> extra) {
      throw parse_error("trailing token '" + extra + "'", line_no);
    }
    const long long a = parse_id(ta, line_no);
    const long long b = parse_id(tb, line_no);
    if (a == b) {
      throw self_loop_error("line " + std::to_string(line_no) +
                            ": self-loop at node " + std::to_string(a));
    }
    max_id = std::max(max_id, static_cast<int>(std::max(a, b)));
    edges.emplace_back(static_cast<int>(a - 1), static_cast<int>(b - 1));
  }
  const int n = std::max(declared_n, max_id);
  if (n < 2) throw parse_error("edge list defines fewer than 2 nodes", line_no);
  return UndirectedGraph::from_edges(n, std::move(edges));
}

UndirectedGraph read_edge_list(const std::string& text) {
  std::istringstream in(text);
  return read_edge_list(in);
}

UndirectedGraph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("io_error", "cannot open " + path);
  return read_edge_list(in);
}

void write_edge_list(const UndirectedGraph& g, std::ostream& out) {
  out << "#n " << g.n << "\n";
  for (const auto& [a, b] : g.edges) {
    out << (a + 1) << " " << (b + 1) << "\n";
  }
}

ComparisonData ComparisonData::zeros(int n) {
  if (n < 2) throw dimension_mismatch("comparison data needs at least 2 items");
  ComparisonData d;
  d.n = n;
  d.win.assign(static_cast<std::size_t>(n) * n, 0);
  return d;
}

std::int64_t ComparisonData::out_wins(int i) const {
  std::int64_t s = 0;
  for (int j = 0; j < n; ++j) s += wins(i, j);
  return s;
}

bool ComparisonData::dense() const {
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (comparisons(i, j) < 1) return false;
    }
  }
  return true;
}

ComparisonData read_comparisons(std::istream& in) {
  struct Row {
    int i, j;
    std::int64_t w;
  };
  std::vector<Row> rows;
  int max_id = 0;
  std::string line;
  long line_no = 0;
  bool first_data_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank_or_comment(line)) continue;
    std::istringstream ss(line);
    std::string ta, tb, tw, extra;
    if (!std::getline(ss, ta, ',') || !std::getline(ss, tb, ',') ||
        !std::getline(ss, tw, ',')) {
      throw parse_error("expected 'i,j,wins'", line_no);
    }
    if (std::getline(ss, extra, ',')) {
      throw parse_error("trailing field '" + extra + "'", line_no);
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    ta = trim(ta);
    tb = trim(tb);
    tw = trim(tw);
    if (first_data_line) {
      first_data_line = false;
      // Optional header row: skip when the first field is not a number.
      if (!ta.empty() && !std::isdigit(static_cast<unsigned char>(ta[0])) &&
          ta[0] != '-' && ta[0] != '+') {
        continue;
      }
    }
    const long long a = parse_id(ta, line_no);
    const long long b = parse_id(tb, line_no);
    if (a == b) {
      throw self_loop_error("line " + std::to_string(line_no) +
                            ": item compared with itself");
    }
    long long w = 0;
    std::size_t pos = 0;
    try {
      w = std::stoll(tw, &pos);
    } catch (const std::exception&) {
      throw parse_error("expected integer win count, got '" + tw + "'",
                        line_no);
    }
    if (pos != tw.size()) {
      throw parse_error("expected integer win count, got '" + tw + "'",
                        line_no);
    }
    if (w < 0) {
      throw negative_count_error("line " + std::to_string(line_no) +
                                 ": negative win count");
    }
    max_id = std::max(max_id, static_cast<int>(std::max(a, b)));
    rows.push_back({static_cast<int>(a - 1), static_cast<int>(b - 1), w});
  }
  if (max_id < 2) {
    throw parse_error("comparison file defines fewer than 2 items", line_no);
  }
  ComparisonData d = ComparisonData::zeros(max_id);
  for (const Row& r : rows) d.wins(r.i, r.j) += r.w;
  return d;
}

ComparisonData read_comparisons(const std::string& text) {
  std::istringstream in(text);
  return read_comparisons(in);
}

ComparisonData read_comparisons_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("io_error", "cannot open " + path);
  return read_comparisons(in);
}

void write_comparisons(const ComparisonData& data, std::ostream& out) {
  out << "i,j,wins\n";
  for (int i = 0; i < data.n; ++i) {
    for (int j = 0; j < data.n; ++j) {
      if (data.wins(i, j) > 0) {
        out << (i + 1) << "," << (j + 1) << "," << data.wins(i, j) << "\n";
      }
    }
  }
}

bool is_strongly_connected(const ComparisonData& data) {
  const int n = data.n;
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && data.wins(i, j) > 0) adj[i].push_back(j);
    }
  }

  // Iterative Tarjan; returns early once a second component is found.
  std::vector<int> index(n, -1), lowlink(n, 0), stack, on_stack(n, 0);
  int next_index = 0;
  int components = 0;
  std::vector<std::pair<int, std::size_t>> call;  // (vertex, next child pos)
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    call.emplace_back(root, 0);
    while (!call.empty()) {
      auto& [v, child] = call.back();
      if (child == 0) {
        index[v] = lowlink[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      bool descended = false;
      while (child < adj[v].size()) {
        const int w = adj[v][child++];
        if (index[w] == -1) {
          call.emplace_back(w, 0);
          descended = true;
          break;
        }
        if (on_stack[w]) lowlink[v] = std::min(lowlink[v], index[w]);
      }
      if (descended) continue;
      if (lowlink[v] == index[v]) {
        ++components;
        if (components > 1) return false;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
        } while (w != v);
      }
      const int finished = v;
      call.pop_back();
      if (!call.empty()) {
        lowlink[call.back().first] =
            std::min(lowlink[call.back().first], lowlink[finished]);
      }
    }
  }
  return components == 1;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  // splitmix64 finalizer over a golden-ratio stream.
  std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

UndirectedGraph simulate_beta_graph(const ParamVector& beta,
                                    std::uint64_t rng_seed) {
  const int n = beta.size();
  if (n < 2) throw dimension_mismatch("simulate_beta_graph: need n >= 2");
  std::mt19937_64 rng(rng_seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double p = sigmoid(beta.values[i] + beta.values[j]);
      if (uniform01(rng) < p) edges.emplace_back(i, j);
    }
  }
  return UndirectedGraph::from_edges(n, std::move(edges));
}

ComparisonData simulate_bt_data(const ParamVector& beta, int k_common,
                                std::uint64_t rng_seed) {
  const int n = beta.size();
  if (n < 2) throw dimension_mismatch("simulate_bt_data: need n >= 2");
  if (k_common < 1) throw dimension_mismatch("simulate_bt_data: need k >= 1");
  std::mt19937_64 rng(rng_seed);
  ComparisonData d = ComparisonData::zeros(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double p = sigmoid(beta.values[i] - beta.values[j]);
      int w = 0;
      for (int t = 0; t < k_common; ++t) {
        if (uniform01(rng) < p) ++w;
      }
      d.wins(i, j) = w;
      d.wins(j, i) = k_common - w;
    }
  }
  return d;
}

}  // namespace wilks
