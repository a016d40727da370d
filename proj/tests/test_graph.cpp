#include <doctest.h>

#include <complex>
#include <sstream>

#include "ctap/errors.hpp"
#include "ctap/generators.hpp"
#include "ctap/graph.hpp"
#include "ctap/viability.hpp"

using ctap::Complex;
using ctap::Edge;
using ctap::WeightedGraph;

namespace {

WeightedGraph lambda_graph() {
    return WeightedGraph::build(2, 1, {{0, 2, 1.0}, {1, 2, 1.0}}, {0, 1});
}

} // namespace

TEST_CASE("build: the 3-site chain graph") {
    const WeightedGraph g = lambda_graph();
    CHECK(g.n1() == 2);
    CHECK(g.n2() == 1);
    CHECK(g.size() == 3);
    CHECK(g.parties() == std::vector<int>{0, 1});
    CHECK(g.edges().size() == 2);
    CHECK(g.is_real());
}

TEST_CASE("build: single vertex is valid") {
    const WeightedGraph g = WeightedGraph::build(1, 0, {}, {0});
    CHECK(g.size() == 1);
    CHECK(ctap::adjacency(g).rows() == 1);
    CHECK(ctap::adjacency(g)(0, 0) == Complex(0.0));
}

TEST_CASE("build: validation failures") {
    CHECK_THROWS_AS(WeightedGraph::build(2, 1, {{0, 1, 1.0}}, {}),
                    ctap::SemiBipartiteViolation); // V1–V1 edge
    CHECK_THROWS_AS(WeightedGraph::build(2, 1, {{0, 0, 1.0}}, {}),
                    ctap::SemiBipartiteViolation); // V1 self-loop
    CHECK_THROWS_AS(
        WeightedGraph::build(2, 1, {{0, 2, 1.0}, {2, 0, 1.0}}, {}),
        ctap::DuplicateEdge); // same unordered pair, reversed
    CHECK_THROWS_AS(WeightedGraph::build(2, 1, {{0, 3, 1.0}}, {}), ctap::NoSuchVertex);
    CHECK_THROWS_AS(WeightedGraph::build(2, 1, {{0, 2, 0.0}}, {}),
                    ctap::InvalidParameter); // zero weight
    CHECK_THROWS_AS(WeightedGraph::build(2, 1, {{0, 2, 1.0}}, {2}),
                    ctap::PartyPlacement); // party outside V1
    CHECK_THROWS_AS(WeightedGraph::build(2, 1, {{0, 2, 1.0}}, {0, 0}),
                    ctap::PartyPlacement); // repeated party
    CHECK_THROWS_AS(
        WeightedGraph::build(1, 2, {{1, 1, Complex(0.0, 0.5)}}, {}),
        ctap::InvalidParameter); // complex self-loop breaks hermitian diagonal
}

TEST_CASE("build: canonical edge storage conjugates a flipped pair") {
    const WeightedGraph g =
        WeightedGraph::build(1, 1, {{1, 0, Complex(0.0, 1.0)}}, {});
    REQUIRE(g.edges().size() == 1);
    CHECK(g.edges()[0].u == 0);
    CHECK(g.edges()[0].v == 1);
    CHECK(g.edges()[0].w == Complex(0.0, -1.0));
}

TEST_CASE("adjacency: chain graph block form") {
    const Eigen::MatrixXcd a = ctap::adjacency(lambda_graph());
    Eigen::MatrixXcd expect(3, 3);
    expect << 0, 0, 1, 0, 0, 1, 1, 1, 0;
    CHECK((a - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("adjacency: V2 self-loop lands on the diagonal C block") {
    const WeightedGraph g = WeightedGraph::build(
        2, 1, {{0, 2, 1.0}, {1, 2, 1.0}, {2, 2, 0.25}}, {0, 1});
    const Eigen::MatrixXcd a = ctap::adjacency(g);
    CHECK(a(2, 2) == Complex(0.25));
    CHECK(a(0, 0) == Complex(0.0));
    CHECK(a(1, 1) == Complex(0.0));
}

TEST_CASE("adjacency: complex weight is placed hermitianly") {
    const WeightedGraph g = WeightedGraph::build(
        2, 1, {{0, 2, Complex(0.0, 1.0)}, {1, 2, 1.0}}, {0, 1});
    const Eigen::MatrixXcd a = ctap::adjacency(g);
    CHECK(a(0, 2) == Complex(0.0, 1.0));
    CHECK(a(2, 0) == Complex(0.0, -1.0));
    CHECK((a - a.adjoint()).cwiseAbs().maxCoeff() == 0.0); // exact hermiticity
    CHECK_FALSE(g.is_real());
}

TEST_CASE("max_abs_weight") {
    CHECK(ctap::max_abs_weight(lambda_graph()) == 1.0);
    CHECK(ctap::max_abs_weight(WeightedGraph::build(1, 0, {}, {})) == 0.0);
    const WeightedGraph g =
        WeightedGraph::build(1, 1, {{0, 1, Complex(3.0, 4.0)}}, {});
    CHECK(ctap::max_abs_weight(g) == doctest::Approx(5.0));
}

TEST_CASE("delete_vertex: chain graph minus vertex 0") {
    const auto [g, map] = ctap::delete_vertex(lambda_graph(), 0);
    CHECK(g.size() == 2);
    CHECK(g.n1() == 1);
    CHECK(g.n2() == 1);
    REQUIRE(g.edges().size() == 1);
    CHECK(g.edges()[0].u == map[1]);
    CHECK(g.edges()[0].v == map[2]);
    CHECK(g.edges()[0].w == Complex(1.0));
    CHECK(map == std::vector<int>{-1, 0, 1});
}

TEST_CASE("delete_vertex: endpoint of path(5) leaves a 4-path") {
    const WeightedGraph p5 = ctap::path(5);
    const auto [g, map] = ctap::delete_vertex(p5, 0);
    CHECK(g.size() == 4);
    CHECK(g.edges().size() == 3);
    const auto deg = g.degrees();
    int ones = 0;
    for (int d : deg) ones += (d == 1);
    CHECK(ones == 2); // a path has exactly two endpoints
    CHECK(ctap::is_connected(g));
    (void)map;
}

TEST_CASE("delete_vertex: boundary and errors") {
    const WeightedGraph single = WeightedGraph::build(1, 0, {}, {});
    const auto [empty, map] = ctap::delete_vertex(single, 0);
    CHECK(empty.size() == 0);
    CHECK(map == std::vector<int>{-1});
    CHECK_THROWS_AS(ctap::delete_vertex(single, 1), ctap::NoSuchVertex);
}

TEST_CASE("delete_vertex equals the principal submatrix, entry for entry") {
    int checked = 0;
    for (const WeightedGraph& base :
         {ctap::path(7), ctap::star(3, 2), ctap::hex_grid(2), ctap::square_grid(3)}) {
        const WeightedGraph g = ctap::randomize_weights(
            WeightedGraph::build(base.n1(), base.n2(), base.edges(), {}), 11);
        const Eigen::MatrixXcd a = ctap::adjacency(g);
        for (int p = 0; p < g.size(); ++p) {
            const auto [h, map] = ctap::delete_vertex(g, p);
            const Eigen::MatrixXcd b = ctap::adjacency(h);
            int mismatches = 0;
            for (int i = 0; i < g.size(); ++i)
                for (int j = 0; j < g.size(); ++j)
                    if (i != p && j != p && b(map[i], map[j]) != a(i, j)) ++mismatches;
            CHECK(mismatches == 0);
            ++checked;
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("is_connected") {
    CHECK(ctap::is_connected(lambda_graph()));
    CHECK(ctap::is_connected(WeightedGraph::build(1, 0, {}, {})));
    const WeightedGraph disjoint =
        WeightedGraph::build(2, 2, {{0, 2, 1.0}, {1, 3, 1.0}}, {});
    CHECK_FALSE(ctap::is_connected(disjoint));
    CHECK_FALSE(ctap::is_connected(WeightedGraph::build(0, 0, {}, {})));
}

TEST_CASE("serialize/parse round-trip is the identity") {
    const WeightedGraph complex_g = WeightedGraph::build(
        2, 2, {{0, 2, Complex(0.5, -1.25)}, {1, 2, 1.0}, {1, 3, Complex(0.0, 2.0)},
               {2, 3, 0.125}, {3, 3, 0.75}},
        {0, 1});
    for (const WeightedGraph& g :
         {lambda_graph(), ctap::path(9), ctap::hex_grid(3), complex_g,
          ctap::randomize_weights(ctap::path(5), 3)}) {
        const WeightedGraph back = ctap::parse_graph(ctap::serialize(g));
        CHECK(back == g);
        CHECK(ctap::serialize(back) == ctap::serialize(g));
    }
}

TEST_CASE("serialize: canonical text of the chain graph") {
    CHECK(ctap::serialize(lambda_graph()) ==
          "graph v1=2 v2=1\nparty 0 1\nedge 0 2 1\nedge 1 2 1\n");
}

TEST_CASE("parse: comments, blank lines, imaginary parts") {
    const std::string text = "# a comment\n"
                             "graph v1=2 v2=1\n"
                             "\n"
                             "party 0 1\n"
                             "edge 0 2 0 1\n"
                             "edge 1 2 1\n";
    const WeightedGraph g = ctap::parse_graph(text);
    CHECK(g.edges()[0].w == Complex(0.0, 1.0));
    CHECK(g.edges()[1].w == Complex(1.0));
}

TEST_CASE("parse: malformed input carries the line number") {
    auto line_of = [](const std::string& text) -> std::string {
        try {
            ctap::parse_graph(text);
        } catch (const ctap::ParseError& e) {
            return e.what();
        }
        return "";
    };
    CHECK(line_of("edge 0 1 1\n").find("line 1") != std::string::npos);
    CHECK(line_of("graph v1=2 v2=1\nparty 0\nwhat 1 2\n").find("line 3") !=
          std::string::npos);
    CHECK(line_of("graph v1=x v2=1\n") != "");
    // syntactically fine but semantically broken: the builder names the
    // offending edge instead of a line
    CHECK_THROWS_WITH_AS(ctap::parse_graph("graph v1=2 v2=1\nedge 0 9 1\n"),
                         "build_graph: edge (0,9) references a missing vertex",
                         ctap::NoSuchVertex);
}

TEST_CASE("adjacency_list and degrees count a self-loop once and twice") {
    const WeightedGraph g =
        WeightedGraph::build(1, 1, {{0, 1, 1.0}, {1, 1, 0.5}}, {});
    const auto adj = g.adjacency_list();
    CHECK(adj[0] == std::vector<int>{1});
    CHECK(adj[1] == std::vector<int>{0, 1});
    CHECK(g.degrees() == std::vector<int>{1, 3});
}
