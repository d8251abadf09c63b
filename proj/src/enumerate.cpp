#include "dist/enumerate.hpp"

#include <set>
#include <string>

#include "dist/errors.hpp"
#include "dist/isomorphism.hpp"

namespace dist {

Graph make_path(int n) {
    require(n >= 1, "make_path: n >= 1");
    Graph g;
    g.n = n;
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

Graph make_cycle(int n) {
    require(n >= 3, "make_cycle: n >= 3");
    Graph g;
    g.n = n;
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    return g;
}

Graph make_complete(int n) {
    require(n >= 1, "make_complete: n >= 1");
    Graph g;
    g.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
    return g;
}

Graph make_star(int n) {
    require(n >= 2, "make_star: n >= 2");
    Graph g;
    g.n = n;
    for (int i = 1; i < n; ++i) g.add_edge(0, i);
    return g;
}

Graph make_wheel(int n) {
    require(n >= 4, "make_wheel: n >= 4");
    Graph g;
    g.n = n;
    for (int i = 1; i < n; ++i) {
        g.add_edge(0, i);
        g.add_edge(i, i == n - 1 ? 1 : i + 1);
    }
    return g;
}

Graph make_cycle_with_detours(int n) {
    require(n >= 3, "make_cycle_with_detours: n >= 3");
    Graph g;
    g.n = 3 * n;
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        const int u = n + 2 * i, v = n + 2 * i + 1;
        g.add_edge(i, j);
        g.add_edge(i, u);
        g.add_edge(u, v);
        g.add_edge(v, j);
    }
    return g;
}

namespace {

bool mask_connected(int n, std::uint64_t mask) {
    if (n <= 1) return true;
    std::vector<std::uint32_t> adj(n, 0);
    int bit = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++bit)
            if (mask >> bit & 1) {
                adj[i] |= 1u << j;
                adj[j] |= 1u << i;
            }
    std::uint32_t seen = 1, frontier = 1;
    while (frontier) {
        std::uint32_t next = 0;
        for (int i = 0; i < n; ++i)
            if (frontier >> i & 1) next |= adj[i];
        frontier = next & ~seen;
        seen |= next;
    }
    return seen == (1u << n) - 1;
}

Graph mask_graph(int n, std::uint64_t mask) {
    Graph g;
    g.n = n;
    int bit = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++bit)
            if (mask >> bit & 1) g.add_edge(i, j);
    return g;
}

}  // namespace

std::vector<Graph> all_connected_graphs(int n, bool up_to_iso) {
    require(n >= 1 && n <= 7, "all_connected_graphs: n in 1..7");
    const int bits = n * (n - 1) / 2;
    std::vector<Graph> out;
    std::set<std::string> seen;
    for (std::uint64_t mask = 0; mask < (1ull << bits); ++mask) {
        if (!mask_connected(n, mask)) continue;
        Graph g = mask_graph(n, mask);
        if (up_to_iso && !seen.insert(canonical_code(multigraph_from(g))).second) continue;
        out.push_back(std::move(g));
    }
    return out;
}

Graph sample_graph(int n, std::mt19937_64& rng) {
    require(n >= 1 && n <= 11, "sample_graph: n in 1..11");
    const int bits = n * (n - 1) / 2;
    std::uniform_int_distribution<std::uint64_t> dist(0, (1ull << bits) - 1);
    return mask_graph(n, dist(rng));
}

Graph sample_connected_graph(int n, std::mt19937_64& rng) {
    require(n >= 1 && n <= 11, "sample_connected_graph: n in 1..11");
    const int bits = n * (n - 1) / 2;
    std::uniform_int_distribution<std::uint64_t> dist(0, (1ull << bits) - 1);
    for (;;) {
        const std::uint64_t mask = dist(rng);
        if (mask_connected(n, mask)) return mask_graph(n, mask);
    }
}

Graph sample_connected_gnp(int n, double p, std::mt19937_64& rng) {
    require(n >= 1, "sample_connected_gnp: n >= 1");
    require(p > 0.0 && p <= 1.0, "sample_connected_gnp: p in (0, 1]");
    std::bernoulli_distribution coin(p);
    for (;;) {
        Graph g;
        g.n = n;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (coin(rng)) g.add_edge(i, j);
        if (connected_components(g).size() == 1) return g;
    }
}

}  // namespace dist
