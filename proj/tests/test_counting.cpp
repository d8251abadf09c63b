#include <random>
#include <vector>

#include "dist/bigint.hpp"
#include "dist/counting.hpp"
#include "dist/decomp_tree.hpp"
#include "dist/enumerate.hpp"
#include "dist/oracle.hpp"
#include "doctest.h"

using namespace dist;

namespace {

Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    Graph g(n);
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
}

void check_against_oracle(const Graph& g, int k, const CountOptions& opt = {}) {
    CAPTURE(to_graph6(g));
    CAPTURE(k);
    const OracleResult want = oracle_counts(g, k);
    const CountResult got = count_labelings(g, k, opt);
    CHECK(got.aut == want.aut_order);
    CHECK(got.L == want.L);
    CHECK(got.D == want.D);
}

Rat eval_poly(const std::vector<Rat>& coeff, int k) {
    Rat acc(0);
    for (auto it = coeff.rbegin(); it != coeff.rend(); ++it) acc = acc * k + *it;
    return acc;
}

}  // namespace

TEST_CASE("graph builders have the expected shapes") {
    CHECK(make_path(4).edges.size() == 3);
    CHECK(make_cycle(5).edges.size() == 5);
    CHECK(make_complete(5).edges.size() == 10);
    CHECK(make_star(5).edges.size() == 4);
    const Graph w = make_wheel(6);
    CHECK(w.n == 6);
    CHECK(w.edges.size() == 10);
    const Graph d = make_cycle_with_detours(5);
    CHECK(d.n == 15);
    CHECK(d.edges.size() == 20);
    CHECK(connected_components(d).size() == 1);
}

TEST_CASE("connected graph enumeration matches the known census") {
    CHECK(all_connected_graphs(1).size() == 1);
    CHECK(all_connected_graphs(2).size() == 1);
    CHECK(all_connected_graphs(3).size() == 2);
    CHECK(all_connected_graphs(4).size() == 6);
    CHECK(all_connected_graphs(5).size() == 21);
    CHECK(all_connected_graphs(6).size() == 112);
}

TEST_CASE("counts match the oracle on every small connected graph") {
    CountOptions opt;
    opt.lattice_cap = 1000;  // the complete graph on 6 needs order 720
    for (int n = 2; n <= 6; ++n) {
        for (const Graph& g : all_connected_graphs(n)) {
            check_against_oracle(g, 2, opt);
            check_against_oracle(g, 3, opt);
        }
    }
}

TEST_CASE("counts match the oracle on sampled connected graphs") {
    std::mt19937_64 rng(20240817);
    for (int n = 7; n <= 8; ++n) {
        for (int trial = 0; trial < 10; ++trial) {
            const Graph g = sample_connected_graph(n, rng);
            check_against_oracle(g, 2);
            check_against_oracle(g, 3);
        }
    }
}

TEST_CASE("closed forms for small named graphs") {
    for (int k = 1; k <= 6; ++k) {
        const Big kb(k);
        // path on 3: a label for the middle, an unordered distinct pair
        CHECK(count_labelings(make_path(3), k).D == kb * big_binom(kb, 2));
        // path on 4: half of the orientation-asymmetric labelings
        CHECK(count_labelings(make_path(4), k).D ==
              exact_div(big_pow(kb, 4) - kb * kb, Big(2)));
        // complete graph: one class per label subset
        CHECK(count_labelings(make_complete(4), k).D == big_binom(kb, 4));
        // star: center free, leaves an unordered distinct tuple
        CHECK(count_labelings(make_star(5), k).D == kb * big_binom(kb, 4));
        // two triangles sharing a vertex
        const Graph bowtie =
            from_edges(5, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 2}});
        CHECK(count_labelings(bowtie, k).D == kb * big_binom(big_binom(kb, 2), 2));
        // four-cycle with one chord
        const Graph diamond = from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {1, 3}});
        CHECK(count_labelings(diamond, k).D ==
              exact_div(kb * kb * (kb - 1) * (kb - 1), Big(4)));
        // complete bipartite 2 x 3
        const Graph k23 =
            from_edges(5, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}});
        CHECK(count_labelings(k23, k).D ==
              big_binom(kb, 3) * exact_div(kb * (kb - 1), Big(2)));
    }
}

TEST_CASE("two poles joined by three two-vertex chains") {
    const Graph theta = from_edges(8, {{0, 2}, {2, 3}, {3, 1},
                                       {0, 4}, {4, 5}, {5, 1},
                                       {0, 6}, {6, 7}, {7, 1}});
    CHECK(count_labelings(theta, 2).D == 6);
    check_against_oracle(theta, 2);
    check_against_oracle(theta, 3);
}

TEST_CASE("mirrored rigid halves pair only crosswise") {
    // two rigid pieces between poles 0 and 1, one the pole-reversal of the
    // other; the only symmetry swaps the poles and exchanges the pieces
    const Graph g = from_edges(8, {{0, 2}, {2, 3}, {3, 1}, {0, 3}, {2, 4}, {4, 1},
                                   {1, 5}, {5, 6}, {6, 0}, {1, 6}, {5, 7}, {7, 0}});
    const DecompTree t = build_tree(g);
    REQUIRE(t.nodes[t.root].type == NodeType::S);
    const std::pair<int, int> pair = std::minmax(t.nodes[t.root].x, t.nodes[t.root].y);
    CHECK(pair == std::make_pair(0, 1));
    for (int k = 2; k <= 5; ++k) {
        const Big k4 = big_pow(Big(k), 4);
        CHECK(count_labelings(g, k).D == exact_div(k4 * (k4 - 1), Big(2)));
    }
    CHECK(count_labelings(g, 2).aut == 2);
    check_against_oracle(g, 2);
    check_against_oracle(g, 3);
}

TEST_CASE("five-cycle with a detour alongside every edge") {
    const Graph g = make_cycle_with_detours(5);
    for (int k = 1; k <= 6; ++k) {
        const Big kb(k);
        const Big want = exact_div(big_pow(kb, 15) - 5 * big_pow(kb, 8) -
                                       big_pow(kb, 3) + 5 * kb * kb,
                                   Big(10));
        CHECK(count_labelings(g, k).D == want);
    }
    CHECK(count_labelings(g, 2).aut == 10);
    check_against_oracle(g, 2);
}

TEST_CASE("two rigid blocks joined by a bridge") {
    // direct bridge: the bridge component carries both hanging cliques
    Graph g(8);
    for (int u = 0; u < 4; ++u)
        for (int v = u + 1; v < 4; ++v) g.add_edge(u, v);
    for (int u = 4; u < 8; ++u)
        for (int v = u + 1; v < 8; ++v) g.add_edge(u, v);
    g.add_edge(3, 4);
    for (int k = 2; k <= 5; ++k) {
        const Big kq = Big(k) * big_binom(Big(k), 3);
        CHECK(count_labelings(g, k).D == exact_div(kq * (kq - 1), Big(2)));
    }
    check_against_oracle(g, 2);
    check_against_oracle(g, 3);

    // subdivided bridge: the midpoint is the hub, its label is free
    Graph h(9);
    for (int u = 0; u < 4; ++u)
        for (int v = u + 1; v < 4; ++v) h.add_edge(u, v);
    for (int u = 4; u < 8; ++u)
        for (int v = u + 1; v < 8; ++v) h.add_edge(u, v);
    h.add_edge(3, 8);
    h.add_edge(8, 4);
    for (int k = 2; k <= 5; ++k) {
        const Big kq = Big(k) * big_binom(Big(k), 3);
        CHECK(count_labelings(h, k).D == Big(k) * big_binom(kq, 2));
    }
    check_against_oracle(h, 2);
    check_against_oracle(h, 3);
}

TEST_CASE("pendant blocks decide whether the poles can swap") {
    // two poles, four chains and a direct edge via a middle vertex, with
    // pendant triangles breaking or keeping the pole reversal
    const std::vector<std::pair<int, int>> core = {
        {0, 3}, {3, 1}, {0, 4}, {4, 1}, {0, 5}, {5, 2}, {0, 6}, {6, 2}, {1, 2}};
    {
        // pendants on 0 and on a chain vertex, plus a tail shifting the root
        auto edges = core;
        edges.insert(edges.end(), {{0, 7}, {7, 8}, {8, 0}, {3, 9}, {9, 10}});
        const Graph g = from_edges(11, edges);
        check_against_oracle(g, 2);
        check_against_oracle(g, 3);
    }
    {
        // both decorated chains point at the same pole: no reversal
        auto edges = core;
        edges.insert(edges.end(), {{3, 7}, {7, 8}, {8, 3}, {5, 9}, {9, 10}, {10, 5}});
        const Graph g = from_edges(11, edges);
        CHECK(oracle_counts(g, 2).has_swap == false);
        check_against_oracle(g, 2);
        check_against_oracle(g, 3);
    }
    {
        // decorations mirror each other: the reversal survives
        auto edges = core;
        edges.insert(edges.end(), {{3, 7}, {7, 8}, {8, 3}, {6, 9}, {9, 10}, {10, 6}});
        const Graph g = from_edges(11, edges);
        check_against_oracle(g, 2);
        check_against_oracle(g, 3);
    }
}

TEST_CASE("disconnected graphs assemble from component classes") {
    // two four-cycles and a triangle
    Graph g(11);
    for (int i = 0; i < 4; ++i) g.add_edge(i, (i + 1) % 4);
    for (int i = 0; i < 4; ++i) g.add_edge(4 + i, 4 + (i + 1) % 4);
    g.add_edge(8, 9);
    g.add_edge(9, 10);
    g.add_edge(10, 8);
    check_against_oracle(g, 2);
    check_against_oracle(g, 3);
    CHECK(count_labelings(g, 3).aut == 2 * 8 * 8 * 6);

    // a path plus two isolated vertices
    Graph h(6);
    h.add_edge(0, 1);
    h.add_edge(1, 2);
    h.add_edge(2, 3);
    check_against_oracle(h, 2);
    check_against_oracle(h, 4);
}

TEST_CASE("labelings with zero or one label") {
    const Graph c5 = make_cycle(5);
    const CountResult zero = count_labelings(c5, 0);
    CHECK(zero.D == 0);
    CHECK(zero.L == 0);
    CHECK(zero.aut == 10);
    // the smallest tree with no symmetry: legs of lengths 1, 2, 3
    const Graph spider =
        from_edges(7, {{0, 1}, {0, 2}, {2, 3}, {0, 4}, {4, 5}, {5, 6}});
    const CountResult one = count_labelings(spider, 1);
    CHECK(one.D == 1);
    CHECK(one.aut == 1);
    CHECK(count_labelings(spider, 0).D == 0);
}

TEST_CASE("distinguishing numbers of named graphs") {
    CHECK(distinguishing_number(from_edges(1, {})) == 1);
    CHECK(distinguishing_number(make_path(2)) == 2);
    CHECK(distinguishing_number(make_path(4)) == 2);
    CHECK(distinguishing_number(make_cycle(4)) == 3);
    CHECK(distinguishing_number(make_cycle(5)) == 3);
    CHECK(distinguishing_number(make_cycle(6)) == 2);
    CHECK(distinguishing_number(make_complete(4)) == 4);
    CHECK(distinguishing_number(make_star(6)) == 5);
    CHECK(distinguishing_number(make_wheel(6)) == 3);
    CHECK(distinguishing_number(make_wheel(7)) == 2);

    Graph petersen(10);
    for (int i = 0; i < 5; ++i) {
        petersen.add_edge(i, (i + 1) % 5);
        petersen.add_edge(i, i + 5);
        petersen.add_edge(5 + i, 5 + (i + 2) % 5);
    }
    CHECK(distinguishing_number(petersen) == 3);

    // two isolated vertices need distinct labels
    CHECK(distinguishing_number(from_edges(2, {})) == 2);
}

TEST_CASE("distinguishing polynomial of a path") {
    const std::vector<Rat> coeff = distinguishing_polynomial(make_path(4));
    REQUIRE(coeff.size() == 5);
    CHECK(coeff[0] == Rat(0));
    CHECK(coeff[1] == Rat(0));
    CHECK(coeff[2] == -Rat(1, 2));
    CHECK(coeff[3] == Rat(0));
    CHECK(coeff[4] == Rat(1, 2));
}

TEST_CASE("distinguishing polynomial properties on assorted graphs") {
    std::vector<Graph> graphs = {make_cycle(5), make_star(4), make_complete(4),
                                 from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {1, 3}})};
    std::mt19937_64 rng(7);
    graphs.push_back(sample_connected_graph(6, rng));
    graphs.push_back(sample_connected_graph(7, rng));
    for (const Graph& g : graphs) {
        CAPTURE(to_graph6(g));
        const std::vector<Rat> coeff = distinguishing_polynomial(g);
        const Big aut = count_labelings(g, 1).aut;
        REQUIRE(coeff.size() == static_cast<std::size_t>(g.n) + 1);
        CHECK(coeff[0] == Rat(0));
        CHECK(coeff[g.n] == Rat(Big(1), aut));
        Rat sum(0);
        for (const Rat& c : coeff) sum += c;
        CHECK(sum == (aut == 1 ? Rat(1) : Rat(0)));
        // degree-n interpolation is exact, so extrapolation must agree
        for (int k = g.n + 1; k <= g.n + 2; ++k)
            CHECK(eval_poly(coeff, k) == Rat(count_labelings(g, k).D));
        // clearing the automorphism order must clear every denominator
        for (const Rat& c : coeff) {
            const Rat scaled = c * Rat(aut);
            CHECK(scaled.get_den() == 1);
        }
    }
}
