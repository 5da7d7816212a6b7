#include "wilks/graphdata.hpp"

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "wilks/errors.hpp"

using namespace wilks;

TEST_CASE("read_edge_list builds the graph and collapses duplicates") {
  const UndirectedGraph g = read_edge_list("1 2\n1 3\n");
  CHECK(g.n == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.degrees == std::vector<int>{2, 1, 1});

  const UndirectedGraph dup = read_edge_list("1 2\n2 1\n");
  CHECK(dup.edge_count() == 1);
  CHECK(dup.edges[0] == std::pair<int, int>{0, 1});
}

TEST_CASE("read_edge_list comments, #n header, and errors") {
  const UndirectedGraph g = read_edge_list("# a comment\n#n 5\n1 2\n");
  CHECK(g.n == 5);
  CHECK(g.degrees == std::vector<int>{1, 1, 0, 0, 0});

  CHECK_THROWS_AS(read_edge_list("1 1\n"), self_loop_error);
  CHECK_THROWS_AS(read_edge_list("1 x\n"), parse_error);
  CHECK_THROWS_AS(read_edge_list("1\n"), parse_error);
  CHECK_THROWS_AS(read_edge_list("1 2 3\n"), parse_error);
  CHECK_THROWS_AS(read_edge_list("0 2\n"), parse_error);
  try {
    read_edge_list("1 2\n3 oops\n");
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("edge list round-trips through the canonical writer") {
  const UndirectedGraph g = read_edge_list("#n 6\n3 1\n1 2\n5 2\n");
  std::ostringstream out;
  write_edge_list(g, out);
  const UndirectedGraph back = read_edge_list(out.str());
  CHECK(back.n == g.n);
  CHECK(back.edges == g.edges);
  CHECK(back.degrees == g.degrees);
}

TEST_CASE("read_comparisons accumulates and validates") {
  const ComparisonData d = read_comparisons("1,2,3\n2,1,1\n");
  CHECK(d.n == 2);
  CHECK(d.wins(0, 1) == 3);
  CHECK(d.wins(1, 0) == 1);
  CHECK(d.comparisons(0, 1) == 4);

  const ComparisonData acc = read_comparisons("1,2,1\n1,2,2\n");
  CHECK(acc.wins(0, 1) == 3);

  const ComparisonData header = read_comparisons("i,j,wins\n1,2,1\n2,1,2\n");
  CHECK(header.out_wins(1) == 2);

  CHECK_THROWS_AS(read_comparisons("1,2,-1\n"), negative_count_error);
  CHECK_THROWS_AS(read_comparisons("1,1,4\n"), self_loop_error);
  CHECK_THROWS_AS(read_comparisons("1,2\n"), parse_error);
  CHECK_THROWS_AS(read_comparisons("1,2,x\n"), parse_error);
}

TEST_CASE("dense detects missing pairs") {
  ComparisonData d = ComparisonData::zeros(3);
  d.wins(0, 1) = 1;
  d.wins(1, 2) = 1;
  CHECK_FALSE(d.dense());
  d.wins(2, 0) = 1;
  CHECK(d.dense());
}

TEST_CASE("is_strongly_connected on cycles and broken digraphs") {
  ComparisonData cyc = ComparisonData::zeros(3);
  cyc.wins(0, 1) = 1;
  cyc.wins(1, 2) = 1;
  cyc.wins(2, 0) = 1;
  CHECK(is_strongly_connected(cyc));

  ComparisonData oneway = ComparisonData::zeros(2);
  oneway.wins(0, 1) = 1;
  CHECK_FALSE(is_strongly_connected(oneway));

  // two disjoint 2-cycles
  ComparisonData split = ComparisonData::zeros(4);
  split.wins(0, 1) = 1;
  split.wins(1, 0) = 1;
  split.wins(2, 3) = 1;
  split.wins(3, 2) = 1;
  CHECK_FALSE(is_strongly_connected(split));
}

TEST_CASE("simulators are deterministic in the seed") {
  ParamVector beta(std::vector<double>(20, 0.3));
  const UndirectedGraph a = simulate_beta_graph(beta, 42);
  const UndirectedGraph b = simulate_beta_graph(beta, 42);
  CHECK(a.edges == b.edges);
  const UndirectedGraph c = simulate_beta_graph(beta, 43);
  CHECK(a.edges != c.edges);

  const ComparisonData x = simulate_bt_data(beta, 3, 11);
  const ComparisonData y = simulate_bt_data(beta, 3, 11);
  CHECK(x.win == y.win);
}

TEST_CASE("simulate_beta_graph saturates at extreme parameters") {
  ParamVector low(std::vector<double>(10, -100.0));
  CHECK(simulate_beta_graph(low, 5).edge_count() == 0);
  ParamVector high(std::vector<double>(10, 100.0));
  CHECK(simulate_beta_graph(high, 5).edge_count() == 45);
}

TEST_CASE("simulate_beta_graph density concentrates at one half") {
  ParamVector beta(std::vector<double>(1000, 0.0));
  const UndirectedGraph g = simulate_beta_graph(beta, 2024);
  const double density = g.edge_count() / (1000.0 * 999.0 / 2.0);
  CHECK(std::fabs(density - 0.5) < 0.01);
}

TEST_CASE("simulate_bt_data preserves the comparison count") {
  ParamVector beta(std::vector<double>(3, 0.0), 0);
  const ComparisonData d = simulate_bt_data(beta, 1, 9);
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      CHECK(d.comparisons(i, j) == 1);
    }
  }

  ParamVector skew(std::vector<double>{0.0, -100.0}, 0);
  const ComparisonData s = simulate_bt_data(skew, 5, 1);
  CHECK(s.wins(0, 1) == 5);
}

TEST_CASE("simulate_bt_data mean win rate near one half at beta = 0") {
  ParamVector beta(std::vector<double>(200, 0.0), 0);
  const ComparisonData d = simulate_bt_data(beta, 3, 77);
  double total = 0.0;
  int pairs = 0;
  for (int i = 0; i < d.n; ++i) {
    for (int j = i + 1; j < d.n; ++j) {
      total += static_cast<double>(d.wins(i, j)) / 3.0;
      ++pairs;
    }
  }
  CHECK(std::fabs(total / pairs - 0.5) < 0.01);
}

TEST_CASE("derive_seed separates replicates") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(123, 45) == derive_seed(123, 45));
}
