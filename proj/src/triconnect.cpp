#include "dist/triconnect.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "dist/errors.hpp"

namespace dist {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Cut vertices of g - x, as global ids.  Parallel edges never change
// articulation verdicts, so skipping every parent occurrence is sound.
std::vector<int> cut_vertices_excluding(const MultiGraph& g, int x) {
    int n = static_cast<int>(g.verts.size());
    int lx = g.index_of(x);
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : g.edges) {
        int u = g.index_of(e.u), v = g.index_of(e.v);
        if (u == lx || v == lx) continue;
        adj[u].push_back(v);
        adj[v].push_back(u);
    }

    std::vector<int> num(n, -1), low(n, 0), parent(n, -1);
    std::vector<bool> is_cut(n, false);
    int timer = 0;
    struct Frame {
        int v;
        size_t next = 0;
    };
    for (int root = 0; root < n; ++root) {
        if (root == lx || num[root] >= 0) continue;
        int root_children = 0;
        std::vector<Frame> fs{{root}};
        num[root] = low[root] = timer++;
        while (!fs.empty()) {
            auto& f = fs.back();
            int v = f.v;
            if (f.next < adj[v].size()) {
                int w = adj[v][f.next++];
                if (w == parent[v]) continue;
                if (num[w] < 0) {
                    parent[w] = v;
                    num[w] = low[w] = timer++;
                    fs.push_back({w});
                } else {
                    low[v] = std::min(low[v], num[w]);
                }
            } else {
                fs.pop_back();
                if (fs.empty()) break;
                int p = fs.back().v;
                low[p] = std::min(low[p], low[v]);
                if (p == root) ++root_children;
                else if (low[v] >= num[p]) is_cut[p] = true;
            }
        }
        if (root_children >= 2) is_cut[root] = true;
    }
    std::vector<int> out;
    for (int v = 0; v < n; ++v)
        if (is_cut[v]) out.push_back(g.verts[v]);
    return out;
}

bool polygon_shape(const MultiGraph& g) {
    size_t n = g.verts.size();
    if (n < 3 || g.edges.size() != n) return false;
    std::vector<int> deg(n, 0);
    std::set<std::pair<int, int>> seen;
    for (const auto& e : g.edges) {
        int u = g.index_of(e.u), v = g.index_of(e.v);
        auto key = std::minmax(u, v);
        if (!seen.insert(key).second) return false;  // parallel edges
        ++deg[u];
        ++deg[v];
    }
    for (int d : deg)
        if (d != 2) return false;
    // connected 2-regular simple graph with m == n: a single cycle
    UnionFind uf(static_cast<int>(n));
    for (const auto& e : g.edges) uf.unite(g.index_of(e.u), g.index_of(e.v));
    for (size_t v = 1; v < n; ++v)
        if (uf.find(static_cast<int>(v)) != uf.find(0)) return false;
    return true;
}

CompKind classify(const MultiGraph& g) {
    if (g.verts.size() == 2) return g.edges.size() >= 3 ? CompKind::BOND : CompKind::POLYGON;
    return polygon_shape(g) ? CompKind::POLYGON : CompKind::RIGID;
}

// Split-pair candidates are generated and tested lazily: endpoints of
// parallel edges first, then (x, cut vertex of g - x) with virtual-edge
// endpoints tried as x first, since a virtual-edge endpoint pair often
// separates again.  A piece that splits at all usually costs a single
// articulation pass this way instead of one per vertex.
std::optional<std::pair<int, int>> find_pair(const MultiGraph& g, std::mt19937_64* rng) {
    if (g.verts.size() <= 2) return std::nullopt;
    std::set<std::pair<int, int>> tried;
    auto test = [&](int x, int y) {
        std::pair<int, int> key = std::minmax(x, y);
        return tried.insert(key).second && is_separating_pair(g, key.first, key.second);
    };

    std::map<std::pair<int, int>, int> mult;
    for (const auto& e : g.edges) ++mult[std::minmax(e.u, e.v)];
    std::vector<std::pair<int, int>> par;
    for (const auto& [uv, m] : mult)
        if (m >= 2) par.push_back(uv);
    if (rng) std::shuffle(par.begin(), par.end(), *rng);
    for (auto [x, y] : par)
        if (test(x, y)) return std::make_pair(x, y);

    std::vector<int> xs;
    for (const auto& e : g.edges)
        if (e.is_virtual()) {
            xs.push_back(e.u);
            xs.push_back(e.v);
        }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<int> rest = g.verts;
    if (rng) {
        std::shuffle(xs.begin(), xs.end(), *rng);
        std::shuffle(rest.begin(), rest.end(), *rng);
    }
    xs.insert(xs.end(), rest.begin(), rest.end());

    std::set<int> xs_done;
    for (int x : xs) {
        if (!xs_done.insert(x).second) continue;
        auto cuts = cut_vertices_excluding(g, x);
        if (rng) std::shuffle(cuts.begin(), cuts.end(), *rng);
        for (int y : cuts)
            if (test(x, y)) return std::make_pair(x, y);
    }
    return std::nullopt;
}

MultiGraph subgraph_of(const MultiGraph& g, const std::vector<int>& edge_idx, int x, int y,
                       int tag) {
    MultiGraph out;
    std::set<int> vs{x, y};
    for (int i : edge_idx) {
        out.edges.push_back(g.edges[i]);
        vs.insert(g.edges[i].u);
        vs.insert(g.edges[i].v);
    }
    out.edges.push_back({std::min(x, y), std::max(x, y), tag});
    out.verts.assign(vs.begin(), vs.end());
    return out;
}

// Split classes into two edge-index groups, each covering at least two
// edges.  `which` rotates the choice for the randomized variant.
std::pair<std::vector<int>, std::vector<int>> split_groups(
    const std::vector<std::vector<int>>& classes, size_t which) {
    size_t d = classes.size();
    std::vector<int> a, b;
    if (d == 2) {
        for (int i : classes[0]) a.push_back(i);
        for (int i : classes[1]) b.push_back(i);
        return {a, b};
    }
    size_t big = d;
    for (size_t j = 0; j < d; ++j) {
        size_t jj = (j + which) % d;
        if (classes[jj].size() >= 2) {
            big = jj;
            break;
        }
    }
    if (big < d) {
        for (size_t j = 0; j < d; ++j)
            for (int i : classes[j]) (j == big ? a : b).push_back(i);
    } else {
        // all classes are single edges (so there are at least four)
        for (size_t j = 0; j < d; ++j)
            for (int i : classes[j]) (j < 2 ? a : b).push_back(i);
    }
    return {a, b};
}

TriDecomposition decompose(const MultiGraph& block, std::mt19937_64* rng) {
    for (const auto& e : block.edges)
        require(!e.is_virtual(), "triconnect: input block already has virtual edges");
    require(!block.verts.empty(), "triconnect: empty block");

    TriDecomposition out;
    int next_tag = 0;
    std::vector<MultiGraph> work{block};
    std::vector<MultiGraph> final_pieces;
    while (!work.empty()) {
        MultiGraph s = std::move(work.back());
        work.pop_back();
        auto pair = find_pair(s, rng);
        if (!pair) {
            out.split_edge_total += static_cast<long long>(s.edges.size());
            final_pieces.push_back(std::move(s));
            continue;
        }
        auto [x, y] = *pair;
        auto classes = separation_classes(s, x, y);
        size_t which = 0;
        if (rng) which = (*rng)() % classes.size();
        auto [ea, eb] = split_groups(classes, which);
        int tag = next_tag++;
        work.push_back(subgraph_of(s, ea, x, y, tag));
        work.push_back(subgraph_of(s, eb, x, y, tag));
    }

    // merge phase: glue bonds to bonds and polygons to polygons along a
    // shared virtual edge until no such pair remains; a worklist of tags
    // keeps each merge from rescanning every component
    std::vector<MultiGraph> comps = std::move(final_pieces);
    std::vector<bool> alive(comps.size(), true);
    std::map<int, std::vector<size_t>> by_tag;
    for (size_t i = 0; i < comps.size(); ++i)
        for (const auto& e : comps[i].edges)
            if (e.is_virtual()) by_tag[e.tag].push_back(i);
    std::vector<int> todo;
    for (const auto& [tag, where] : by_tag) todo.push_back(tag);
    while (!todo.empty()) {
        int tag = todo.back();
        todo.pop_back();
        auto it = by_tag.find(tag);
        if (it == by_tag.end() || it->second.size() != 2) continue;
        size_t i1 = it->second[0], i2 = it->second[1];
        if (i1 == i2) continue;
        MultiGraph &c1 = comps[i1], &c2 = comps[i2];
        bool bonds = c1.verts.size() == 2 && c2.verts.size() == 2;
        bool polys = polygon_shape(c1) && polygon_shape(c2);
        if (!bonds && !polys) continue;
        MultiGraph m;
        std::set<int> vs(c1.verts.begin(), c1.verts.end());
        vs.insert(c2.verts.begin(), c2.verts.end());
        m.verts.assign(vs.begin(), vs.end());
        for (const auto* c : {&c1, &c2})
            for (const auto& e : c->edges)
                if (e.tag != tag) m.edges.push_back(e);
        comps[i1] = std::move(m);
        alive[i2] = false;
        by_tag.erase(it);
        for (const auto& e : comps[i1].edges)
            if (e.is_virtual()) {
                for (size_t& w : by_tag.at(e.tag))
                    if (w == i2) w = i1;
                todo.push_back(e.tag);
            }
    }

    for (size_t i = 0; i < comps.size(); ++i)
        if (alive[i]) out.components.push_back({comps[i], classify(comps[i])});

    std::map<int, std::pair<int, int>> tag_ends;
    for (const auto& c : out.components)
        for (const auto& e : c.graph.edges)
            if (e.is_virtual()) tag_ends[e.tag] = std::minmax(e.u, e.v);
    for (const auto& [tag, xy] : tag_ends) out.pairs.push_back({xy.first, xy.second, tag});
    return out;
}

}  // namespace

const char* kind_name(CompKind k) {
    switch (k) {
        case CompKind::BOND: return "bond";
        case CompKind::POLYGON: return "polygon";
        case CompKind::RIGID: return "rigid";
    }
    return "?";
}

std::vector<std::vector<int>> separation_classes(const MultiGraph& g, int x, int y) {
    int n = static_cast<int>(g.verts.size());
    int lx = g.index_of(x), ly = g.index_of(y);
    require(lx >= 0 && ly >= 0 && lx != ly, "separation classes: bad pair");
    UnionFind uf(n);
    for (const auto& e : g.edges) {
        int u = g.index_of(e.u), v = g.index_of(e.v);
        if (u != lx && u != ly && v != lx && v != ly) uf.unite(u, v);
    }
    std::map<int, std::vector<int>> comp_class;
    std::vector<std::vector<int>> singles;
    for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
        int u = g.index_of(g.edges[i].u), v = g.index_of(g.edges[i].v);
        bool u_in = (u == lx || u == ly), v_in = (v == lx || v == ly);
        if (u_in && v_in)
            singles.push_back({i});
        else
            comp_class[uf.find(u_in ? v : u)].push_back(i);
    }
    std::vector<std::vector<int>> classes;
    for (auto& [root, idxs] : comp_class) classes.push_back(std::move(idxs));
    for (auto& s : singles) classes.push_back(std::move(s));
    std::sort(classes.begin(), classes.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return classes;
}

bool is_separating_pair(const MultiGraph& g, int x, int y) {
    auto classes = separation_classes(g, x, y);
    size_t k = classes.size();
    if (k < 2) return false;
    if (k == 2 && (classes[0].size() == 1 || classes[1].size() == 1)) return false;
    if (k == 3 && classes[0].size() == 1 && classes[1].size() == 1 && classes[2].size() == 1)
        return false;
    return true;
}

std::optional<std::pair<int, int>> find_separating_pair(const MultiGraph& g) {
    return find_pair(g, nullptr);
}

TriDecomposition triconnected_components(const MultiGraph& block) {
    return decompose(block, nullptr);
}

TriDecomposition triconnected_components_randomized(const MultiGraph& block, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return decompose(block, &rng);
}

void validate_decomposition(const MultiGraph& block, const TriDecomposition& d) {
    std::map<int, std::vector<std::pair<size_t, std::pair<int, int>>>> tags;
    std::multiset<std::pair<int, int>> real_in, real_out;
    std::set<int> verts_seen;
    for (const auto& e : block.edges) real_in.insert(std::minmax(e.u, e.v));
    for (size_t i = 0; i < d.components.size(); ++i) {
        const auto& c = d.components[i];
        require(classify(c.graph) == c.kind, "decomposition: component kind mislabeled");
        for (int v : c.graph.verts) {
            require(block.index_of(v) >= 0, "decomposition: unknown vertex in component");
            verts_seen.insert(v);
        }
        for (const auto& e : c.graph.edges) {
            if (e.is_virtual())
                tags[e.tag].push_back({i, std::minmax(e.u, e.v)});
            else
                real_out.insert(std::minmax(e.u, e.v));
        }
        if (c.kind == CompKind::RIGID) {
            require(c.graph.verts.size() >= 4, "decomposition: rigid component too small");
            require(!find_separating_pair(c.graph).has_value(),
                    "decomposition: rigid component has a separating pair");
            std::set<std::pair<int, int>> simple;
            for (const auto& e : c.graph.edges)
                require(simple.insert(std::minmax(e.u, e.v)).second,
                        "decomposition: rigid component has parallel edges");
        }
        if (c.kind == CompKind::BOND) {
            require(c.graph.verts.size() == 2 && c.graph.edges.size() >= 3,
                    "decomposition: malformed bond");
        }
    }
    require(real_in == real_out, "decomposition: real edges do not match the block");
    require(verts_seen.size() == block.verts.size(), "decomposition: vertices lost");
    for (const auto& [tag, uses] : tags) {
        require(uses.size() == 2, "decomposition: virtual tag not used exactly twice");
        require(uses[0].first != uses[1].first, "decomposition: tag twice in one component");
        require(uses[0].second == uses[1].second, "decomposition: tag endpoints disagree");
    }
    require(d.pairs.size() == tags.size(), "decomposition: pair list out of sync");
    for (const auto& p : d.pairs) {
        auto it = tags.find(p.tag);
        std::pair<int, int> xy = std::minmax(p.x, p.y);
        require(it != tags.end() && it->second[0].second == xy,
                "decomposition: pair list entry mismatch");
    }
    long long m = static_cast<long long>(block.edges.size());
    if (m >= 3)
        require(d.split_edge_total <= 3 * m - 6, "decomposition: split edge total exceeds bound");
}

}  // namespace dist
