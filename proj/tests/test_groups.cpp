#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "dist/errors.hpp"
#include "dist/graph.hpp"
#include "dist/groups.hpp"
#include "dist/oracle.hpp"
#include "doctest.h"

using namespace dist;

namespace {

Graph cycle_graph(int n) {
    Graph g;
    g.n = n;
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    return g;
}

Graph path_graph(int n) {
    Graph g;
    g.n = n;
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

Graph complete_graph(int n) {
    Graph g;
    g.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
    return g;
}

Permutation identity_perm(int n) {
    Permutation p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

// closure of a generating set, for building small abstract groups
std::vector<Permutation> generated_group(std::vector<Permutation> gens) {
    std::set<Permutation> seen;
    std::vector<Permutation> out;
    out.push_back(identity_perm(static_cast<int>(gens.front().size())));
    seen.insert(out.front());
    for (std::size_t pos = 0; pos < out.size(); ++pos) {
        for (const auto& h : gens) {
            Permutation nxt = perm_compose(out[pos], h);
            if (seen.insert(nxt).second) out.push_back(nxt);
        }
    }
    return out;
}

SubgroupKernel plain_kernel(int n, int k) {
    return [n, k](const std::vector<Permutation>& gens) {
        Big r = 1;
        for (std::size_t i = 0; i < orbits_of(gens, n).size(); ++i) r *= k;
        return r;
    };
}

Big engine_L(const Graph& g, int k) {
    return destroyed_sum(oracle_automorphisms(g), plain_kernel(g.n, k), 1000);
}

}  // namespace

TEST_CASE("permutation basics") {
    Permutation a = {1, 2, 0, 3};  // 3-cycle
    Permutation b = {0, 1, 3, 2};  // transposition
    CHECK(perm_order(a) == 3);
    CHECK(perm_order(b) == 2);
    CHECK(perm_order(identity_perm(4)) == 1);
    CHECK(perm_is_identity(perm_compose(a, perm_inverse(a))));
    Permutation ab = perm_compose(a, b);
    CHECK(ab == Permutation{1, 2, 3, 0});
    CHECK(perm_order(ab) == 4);
    Permutation mixed = {1, 0, 3, 4, 2, 5};
    CHECK(perm_order(mixed) == 6);
}

TEST_CASE("orbits of generators") {
    auto orb = orbits_of({{1, 0, 2, 3}, {0, 1, 3, 2}}, 4);
    REQUIRE(orb.size() == 2);
    CHECK(orb[0] == std::vector<int>{0, 1});
    CHECK(orb[1] == std::vector<int>{2, 3});
    CHECK(orbits_of({}, 3).size() == 3);
    CHECK(orbits_of({{1, 2, 3, 0}}, 4).size() == 1);
}

TEST_CASE("classification of small automorphism groups") {
    auto c5 = classify_group(oracle_automorphisms(cycle_graph(5)));
    CHECK(c5.kind == GroupKind::DIHEDRAL);
    CHECK(c5.t == 5);
    CHECK(c5.pstar.size() == 1);
    CHECK(c5.reflections.size() == 5);

    auto c6 = classify_group(oracle_automorphisms(cycle_graph(6)));
    CHECK(c6.kind == GroupKind::DIHEDRAL);
    CHECK(c6.t == 6);
    CHECK(c6.pstar.size() == 2);  // orders 2 and 3
    CHECK(c6.reflections.size() == 6);

    auto c4 = classify_group(oracle_automorphisms(cycle_graph(4)));
    CHECK(c4.kind == GroupKind::DIHEDRAL);
    CHECK(c4.t == 4);
    CHECK(c4.pstar.size() == 1);
    CHECK(c4.reflections.size() == 4);

    auto p3 = classify_group(oracle_automorphisms(path_graph(3)));
    CHECK(p3.kind == GroupKind::CYCLIC);
    CHECK(p3.t == 2);

    CHECK(classify_group(oracle_automorphisms(path_graph(1))).kind == GroupKind::TRIVIAL);
    CHECK(classify_group(oracle_automorphisms(complete_graph(4))).kind == GroupKind::LATTICE);

    // directed 6-cycle via one orbit of a single rotation
    auto z6 = classify_group(generated_group({{1, 2, 3, 4, 5, 0}}));
    CHECK(z6.kind == GroupKind::CYCLIC);
    CHECK(z6.t == 6);
    CHECK(z6.pstar.size() == 2);

    // Z4 x Z2 on disjoint supports
    auto z4z2 = classify_group(generated_group({{1, 2, 3, 0, 4, 5}, {0, 1, 2, 3, 5, 4}}));
    CHECK(z4z2.kind == GroupKind::CYCLIC_X_Z2);
    CHECK(z4z2.t == 4);
    CHECK(z4z2.pstar.size() == 3);
    CHECK(z4z2.reflections.empty());

    // D4 x Z2 on disjoint supports
    auto d4z2 = classify_group(
        generated_group({{1, 2, 3, 0, 4, 5}, {1, 0, 3, 2, 4, 5}, {0, 1, 2, 3, 5, 4}}));
    CHECK(d4z2.kind == GroupKind::DIHEDRAL_X_Z2);
    CHECK(d4z2.t == 4);
    CHECK(d4z2.pstar.size() == 3);
    CHECK(d4z2.reflections.size() == 8);

    // A4 has three involutions but no index-2 abelian part
    std::vector<Permutation> a4;
    Permutation p = identity_perm(4);
    do {
        int inversions = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) inversions += p[i] > p[j];
        if (inversions % 2 == 0) a4.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    REQUIRE(a4.size() == 12);
    CHECK(classify_group(a4).kind == GroupKind::LATTICE);
}

TEST_CASE("pstar hits every nontrivial cyclic subgroup") {
    for (int t = 2; t <= 60; ++t) {
        Permutation pi(t);
        for (int i = 0; i < t; ++i) pi[i] = (i + 1) % t;
        auto group = generated_group({pi});
        REQUIRE(group.size() == static_cast<std::size_t>(t));
        auto cls = classify_group(group);
        REQUIRE(cls.kind == GroupKind::CYCLIC);
        REQUIRE(cls.t == t);
        for (const auto& e : group) {
            if (perm_is_identity(e)) continue;
            std::set<Permutation> powers;
            Permutation cur = e;
            while (!powers.count(cur)) {
                powers.insert(cur);
                cur = perm_compose(e, cur);
            }
            bool hit = false;
            for (const auto& s : cls.pstar) hit = hit || powers.count(s);
            CHECK(hit);
        }
    }
}

TEST_CASE("subgroup lattice of S3 and D5") {
    auto s3 = subgroup_lattice(oracle_automorphisms(complete_graph(3)), 360);
    REQUIRE(s3.subgroups.size() == 6);
    std::map<std::size_t, std::vector<long long>> by_order;
    for (std::size_t i = 0; i < s3.subgroups.size(); ++i)
        by_order[s3.subgroups[i].size()].push_back(s3.mu[i]);
    CHECK(by_order[1] == std::vector<long long>{1});
    CHECK(by_order[2] == std::vector<long long>(3, -1));
    CHECK(by_order[3] == std::vector<long long>{-1});
    CHECK(by_order[6] == std::vector<long long>{3});

    auto d5 = subgroup_lattice(oracle_automorphisms(cycle_graph(5)), 360);
    REQUIRE(d5.subgroups.size() == 8);
    CHECK(d5.mu.back() == 5);

    auto s4 = subgroup_lattice(oracle_automorphisms(complete_graph(4)), 360);
    CHECK(s4.subgroups.size() == 30);
    auto s5 = subgroup_lattice(oracle_automorphisms(complete_graph(5)), 360);
    CHECK(s5.subgroups.size() == 156);
}

TEST_CASE("lattice cap") {
    CHECK_THROWS_AS(subgroup_lattice(oracle_automorphisms(complete_graph(4)), 10), CapExceeded);
    CHECK_THROWS_AS(
        destroyed_sum(oracle_automorphisms(complete_graph(4)), plain_kernel(4, 3), 10),
        CapExceeded);
}

TEST_CASE("destroyed count matches the oracle") {
    CHECK(engine_L(cycle_graph(5), 3) == 120);
    CHECK(engine_L(cycle_graph(5), 2) == 0);
    for (int k : {2, 3, 4}) {
        for (int n : {3, 4, 5, 6, 7}) {
            CHECK(engine_L(cycle_graph(n), k) == oracle_counts(cycle_graph(n), k).L);
            CHECK(engine_L(path_graph(n), k) == oracle_counts(path_graph(n), k).L);
        }
        CHECK(engine_L(complete_graph(4), k) == oracle_counts(complete_graph(4), k).L);
    }
    CHECK(engine_L(complete_graph(5), 5) == 120);
    CHECK(engine_L(complete_graph(5), 6) == 720);
    CHECK(engine_L(complete_graph(5), 7) == 2520);

    Graph single;
    single.n = 1;
    CHECK(engine_L(single, 4) == 4);
}

TEST_CASE("engines agree with each other") {
    // full inclusion-exclusion over elements vs the classified engine
    for (int k : {2, 3}) {
        for (const Graph& g : {cycle_graph(4), cycle_graph(5), cycle_graph(6), path_graph(4),
                               complete_graph(3)}) {
            auto auts = oracle_automorphisms(g);
            REQUIRE(auts.size() <= 16);
            Big a = destroyed_sum(auts, plain_kernel(g.n, k), 1000);
            Big b = destroyed_sum_full_pie(auts, plain_kernel(g.n, k));
            Big c = destroyed_sum_lattice(auts, plain_kernel(g.n, k), 360);
            CHECK(a == b);
            CHECK(a == c);
        }
    }
    // abstract product groups, same three-way agreement
    for (auto& gens : std::vector<std::vector<Permutation>>{
             {{1, 2, 3, 0, 4, 5}, {0, 1, 2, 3, 5, 4}},
             {{1, 2, 3, 0, 4, 5}, {1, 0, 3, 2, 4, 5}, {0, 1, 2, 3, 5, 4}}}) {
        auto group = generated_group(gens);
        Big a = destroyed_sum(group, plain_kernel(6, 3), 1000);
        Big b = destroyed_sum_full_pie(group, plain_kernel(6, 3));
        Big c = destroyed_sum_lattice(group, plain_kernel(6, 3), 360);
        CHECK(a == b);
        CHECK(a == c);
    }
}

TEST_CASE("lattice engine on wild groups") {
    // S4 and the Petersen graph group go through the lattice fallback
    for (int k : {3, 4, 5}) {
        CHECK(engine_L(complete_graph(4), k) == oracle_counts(complete_graph(4), k).L);
    }
    Graph pet;
    pet.n = 10;
    for (int i = 0; i < 5; ++i) {
        pet.add_edge(i, (i + 1) % 5);
        pet.add_edge(i, i + 5);
        pet.add_edge(i + 5, 5 + (i + 2) % 5);
    }
    auto auts = oracle_automorphisms(pet);
    REQUIRE(auts.size() == 120);
    CHECK(classify_group(auts).kind == GroupKind::LATTICE);
    CHECK(destroyed_sum(auts, plain_kernel(10, 3), 360) == oracle_counts(pet, 3).L);
}
