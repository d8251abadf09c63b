#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dist/errors.hpp"
#include "dist/graph.hpp"
#include "dist/isomorphism.hpp"
#include "dist/triconnect.hpp"
#include "doctest.h"

using namespace dist;

namespace {

int count_kind(const TriDecomposition& d, CompKind k) {
    int c = 0;
    for (const auto& comp : d.components)
        if (comp.kind == k) ++c;
    return c;
}

// tag- and order-independent fingerprint of a decomposition
std::vector<std::string> normal_form(const TriDecomposition& d) {
    std::vector<std::string> parts;
    for (const auto& c : d.components)
        parts.push_back(std::string(kind_name(c.kind)) + "|" + canonical_code(c.graph));
    std::vector<std::pair<int, int>> ps;
    for (const auto& p : d.pairs) ps.push_back(std::minmax(p.x, p.y));
    std::sort(ps.begin(), ps.end());
    for (auto [x, y] : ps)
        parts.push_back("pair " + std::to_string(x) + " " + std::to_string(y));
    std::sort(parts.begin(), parts.end());
    return parts;
}

Graph random_two_connected(std::mt19937_64& rng) {
    while (true) {
        int n = 4 + static_cast<int>(rng() % 5);
        Graph g;
        g.n = n;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng() % 100 < 55) g.edges.push_back({u, v});
        if (connected_components(g).size() != 1) continue;
        auto bd = blocks_and_cut_vertices(g);
        if (bd.blocks.size() == 1 && bd.cut_vertices.empty() && !g.edges.empty()) return g;
    }
}

}  // namespace

TEST_CASE("separation classes") {
    MultiGraph tri = multigraph_from(parse_edgelist("a b\nb c\nc a\n"));
    auto cl = separation_classes(tri, 0, 1);
    REQUIRE(cl.size() == 2);
    CHECK(cl[0] == std::vector<int>{0});       // the a-b edge
    CHECK(cl[1] == std::vector<int>{1, 2});    // the path through c
    CHECK_FALSE(is_separating_pair(tri, 0, 1));

    MultiGraph c4 = multigraph_from(parse_edgelist("a b\nb c\nc d\nd a\n"));
    CHECK(separation_classes(c4, 0, 2).size() == 2);
    CHECK(is_separating_pair(c4, 0, 2));
    CHECK_FALSE(is_separating_pair(c4, 0, 1));  // adjacent on the cycle

    // three triangles sharing the edge x-y
    MultiGraph fan = multigraph_from(parse_edgelist("x y\nx a\ny a\nx b\ny b\nx c\ny c\n"));
    CHECK(separation_classes(fan, 0, 1).size() == 4);
    CHECK(is_separating_pair(fan, 0, 1));
}

TEST_CASE("three-connected graphs stay whole") {
    Graph prism = parse_edgelist("a b\nb c\nc a\nd e\ne f\nf d\na d\nb e\nc f\n");
    for (const Graph& g : {parse_graph6("C~"), prism}) {
        auto d = triconnected_components(multigraph_from(g));
        REQUIRE(d.components.size() == 1);
        CHECK(d.components[0].kind == CompKind::RIGID);
        CHECK(d.pairs.empty());
    }
    Graph wheel;  // hub plus a five-cycle
    wheel.n = 6;
    for (int i = 0; i < 5; ++i) {
        wheel.add_edge(i, (i + 1) % 5);
        wheel.add_edge(i, 5);
    }
    auto d = triconnected_components(multigraph_from(wheel));
    REQUIRE(d.components.size() == 1);
    CHECK(d.components[0].kind == CompKind::RIGID);
    CHECK(find_separating_pair(multigraph_from(wheel)) == std::nullopt);
}

TEST_CASE("cycles merge back into one polygon") {
    for (int n : {3, 4, 5, 8}) {
        Graph c;
        c.n = n;
        for (int i = 0; i < n; ++i) c.add_edge(i, (i + 1) % n);
        auto d = triconnected_components(multigraph_from(c));
        REQUIRE(d.components.size() == 1);
        CHECK(d.components[0].kind == CompKind::POLYGON);
        CHECK(d.components[0].graph.edges.size() == static_cast<size_t>(n));
        CHECK(d.pairs.empty());
    }
}

TEST_CASE("single edge block is a two-vertex polygon") {
    auto d = triconnected_components(multigraph_from(parse_edgelist("a b\n")));
    REQUIRE(d.components.size() == 1);
    CHECK(d.components[0].kind == CompKind::POLYGON);
    CHECK(d.components[0].graph.verts.size() == 2);
}

TEST_CASE("diamond splits into two triangles and a bond") {
    Graph dia = parse_edgelist("a b\nb c\nc a\nc d\nd a\n");
    auto d = triconnected_components(multigraph_from(dia));
    CHECK(d.components.size() == 3);
    CHECK(count_kind(d, CompKind::POLYGON) == 2);
    CHECK(count_kind(d, CompKind::BOND) == 1);
    REQUIRE(d.pairs.size() == 2);
    for (const auto& p : d.pairs) CHECK(std::minmax(p.x, p.y) == std::minmax(0, 2));
    validate_decomposition(multigraph_from(dia), d);
}

TEST_CASE("triangle fan around an edge") {
    Graph fan = parse_edgelist("x y\nx a\ny a\nx b\ny b\nx c\ny c\n");
    auto d = triconnected_components(multigraph_from(fan));
    CHECK(d.components.size() == 4);
    CHECK(count_kind(d, CompKind::POLYGON) == 3);
    CHECK(count_kind(d, CompKind::BOND) == 1);
    CHECK(d.pairs.size() == 3);
    for (const auto& c : d.components)
        if (c.kind == CompKind::BOND) CHECK(c.graph.edges.size() == 4);
    validate_decomposition(multigraph_from(fan), d);
}

TEST_CASE("two squares sharing an edge") {
    Graph dom = parse_edgelist("a b\nb c\nc d\nd a\nc e\ne f\nf d\n");
    auto d = triconnected_components(multigraph_from(dom));
    CHECK(d.components.size() == 3);
    CHECK(count_kind(d, CompKind::POLYGON) == 2);
    CHECK(count_kind(d, CompKind::BOND) == 1);
    CHECK(d.pairs.size() == 2);
    for (const auto& c : d.components) {
        if (c.kind == CompKind::BOND) {
            CHECK(c.graph.edges.size() == 3);
            CHECK(c.graph.verts == std::vector<int>{2, 3});
        } else {
            CHECK(c.graph.edges.size() == 4);
        }
    }
    validate_decomposition(multigraph_from(dom), d);
}

TEST_CASE("decomposition is unique regardless of split order") {
    std::mt19937_64 rng(20331);
    std::vector<Graph> batch = {
        parse_edgelist("a b\nb c\nc a\nc d\nd a\n"),
        parse_edgelist("x y\nx a\ny a\nx b\ny b\nx c\ny c\n"),
        parse_edgelist("a b\nb c\nc d\nd a\nc e\ne f\nf d\n"),
        parse_graph6("C~"),
    };
    for (int i = 0; i < 12; ++i) batch.push_back(random_two_connected(rng));
    for (const auto& g : batch) {
        MultiGraph m = multigraph_from(g);
        auto base = triconnected_components(m);
        validate_decomposition(m, base);
        auto want = normal_form(base);
        for (std::uint64_t seed : {1ull, 7ull, 1234567ull}) {
            auto alt = triconnected_components_randomized(m, seed);
            validate_decomposition(m, alt);
            CHECK(normal_form(alt) == want);
        }
    }
}

TEST_CASE("validation rejects a tampered decomposition") {
    MultiGraph m = multigraph_from(parse_edgelist("a b\nb c\nc a\nc d\nd a\n"));
    auto d = triconnected_components(m);
    d.components[0].graph.edges.push_back({0, 1, kRealEdge});
    CHECK_THROWS_AS(validate_decomposition(m, d), InvariantViolation);
}
