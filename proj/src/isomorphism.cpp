#include "dist/isomorphism.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "dist/errors.hpp"

namespace dist {

namespace {

using Attr = std::uint64_t;
using Adj = std::tuple<int, Attr, Attr>;

// Equitable refinement of vertex colors.  Signatures are compared exactly
// (no hashing), and a vertex's old color is part of its signature, so
// classes only ever split; colors come back normalized to ranks 0..c-1.
std::vector<Attr> refine(const ColoredGraph& g, std::vector<Attr> col) {
    size_t classes = 0;
    while (true) {
        std::vector<std::vector<Attr>> sig(g.n);
        for (int v = 0; v < g.n; ++v) {
            std::vector<std::vector<Attr>> rows;
            rows.reserve(g.adj[v].size());
            for (const auto& [w, out, in] : g.adj[v]) rows.push_back({col[w], out, in});
            std::sort(rows.begin(), rows.end());
            sig[v].push_back(col[v]);
            for (const auto& r : rows) sig[v].insert(sig[v].end(), r.begin(), r.end());
        }
        std::map<std::vector<Attr>, Attr> rank;
        for (int v = 0; v < g.n; ++v) rank.emplace(sig[v], 0);
        Attr next = 0;
        for (auto& [k, r] : rank) r = next++;
        for (int v = 0; v < g.n; ++v) col[v] = rank.at(sig[v]);
        if (rank.size() == classes) return col;
        classes = rank.size();
    }
}

std::vector<int> class_sizes(const std::vector<Attr>& col) {
    std::vector<int> sz;
    for (Attr c : col) {
        if (sz.size() <= c) sz.resize(c + 1, 0);
        ++sz[c];
    }
    return sz;
}

// Vertex processing order for the automorphism search: repeatedly take the
// unplaced vertex with the most already-placed neighbors, so the candidate
// images of each new vertex stay maximally constrained.  Ties go to the
// rarest color class; each component opens with its rarest-class vertex.
std::vector<int> search_order(const ColoredGraph& g, const std::vector<Attr>& col) {
    auto sz = class_sizes(col);
    std::vector<int> placed_deg(g.n, 0);
    std::vector<bool> seen(g.n, false);
    auto key = [&](int v) { return std::tuple(-placed_deg[v], sz[col[v]], col[v], v); };
    std::vector<int> order;
    order.reserve(g.n);
    for (int step = 0; step < g.n; ++step) {
        int best = -1;
        for (int v = 0; v < g.n; ++v)
            if (!seen[v] && (best < 0 || key(v) < key(best))) best = v;
        seen[best] = true;
        order.push_back(best);
        for (const auto& [w, out, in] : g.adj[best]) ++placed_deg[w];
    }
    return order;
}

struct AutSearch {
    const ColoredGraph& g;
    std::vector<Attr> col;
    std::vector<int> order;
    // per order position: (earlier position, attr v->u, attr u->v)
    std::vector<std::vector<std::tuple<int, Attr, Attr>>> placed_nbrs;
    std::uint64_t cap;
    std::vector<int> perm;
    std::vector<bool> used;
    std::vector<int> used_nbr_count;
    std::vector<Permutation> out;

    AutSearch(const ColoredGraph& g_, std::vector<Attr> col_, std::uint64_t cap_)
        : g(g_), col(std::move(col_)), cap(cap_) {
        order = search_order(g, col);
        std::vector<int> pos(g.n, -1);
        placed_nbrs.resize(g.n);
        for (int i = 0; i < g.n; ++i) {
            int v = order[i];
            for (const auto& [w, o, in] : g.adj[v])
                if (pos[w] >= 0) placed_nbrs[i].push_back({pos[w], o, in});
            pos[v] = i;
        }
        perm.assign(g.n, -1);
        used.assign(g.n, false);
        used_nbr_count.assign(g.n, 0);
    }

    bool consistent(int i, int w) const {
        int v = order[i];
        if (used[w] || col[w] != col[v]) return false;
        if (used_nbr_count[w] != static_cast<int>(placed_nbrs[i].size())) return false;
        for (const auto& [j, o, in] : placed_nbrs[i]) {
            int u_img = perm[order[j]];
            auto& a = g.adj[w];
            auto it = std::lower_bound(a.begin(), a.end(), u_img,
                                       [](const Adj& e, int x) { return std::get<0>(e) < x; });
            if (it == a.end() || std::get<0>(*it) != u_img) return false;
            if (std::get<1>(*it) != o || std::get<2>(*it) != in) return false;
        }
        return true;
    }

    void place(int i, int w) {
        perm[order[i]] = w;
        used[w] = true;
        for (const auto& [x, o, in] : g.adj[w]) ++used_nbr_count[x];
    }

    void unplace(int i, int w) {
        perm[order[i]] = -1;
        used[w] = false;
        for (const auto& [x, o, in] : g.adj[w]) --used_nbr_count[x];
    }

    void run(int i) {
        if (i == g.n) {
            out.push_back(perm);
            if (out.size() > cap)
                throw CapExceeded("automorphism count exceeds cap " + std::to_string(cap));
            return;
        }
        if (placed_nbrs[i].empty()) {
            for (int w = 0; w < g.n; ++w)
                if (consistent(i, w)) {
                    place(i, w);
                    run(i + 1);
                    unplace(i, w);
                }
        } else {
            // candidates: suitably attributed neighbors of the image of one
            // already-placed neighbor; anchor on the placed neighbor whose
            // image has the shortest adjacency so high-degree hubs are not
            // rescanned at every position
            size_t pick = 0;
            size_t pick_len = g.adj[perm[order[std::get<0>(placed_nbrs[i][0])]]].size();
            for (size_t t = 1; t < placed_nbrs[i].size() && pick_len > 1; ++t) {
                size_t len = g.adj[perm[order[std::get<0>(placed_nbrs[i][t])]]].size();
                if (len < pick_len) {
                    pick_len = len;
                    pick = t;
                }
            }
            const auto& [j0, o0, in0] = placed_nbrs[i][pick];
            int u_img = perm[order[j0]];
            for (const auto& [w, o, in] : g.adj[u_img]) {
                if (o != in0 || in != o0) continue;
                if (!consistent(i, w)) continue;
                place(i, w);
                run(i + 1);
                unplace(i, w);
            }
        }
    }
};

// Certificate of a fully labeled graph: original colors plus the sorted
// adjacency of every vertex, all in canonical positions.
std::vector<Attr> certificate(const ColoredGraph& g, const std::vector<Attr>& orig,
                              const Permutation& to_canon) {
    std::vector<int> from_canon(g.n);
    for (int v = 0; v < g.n; ++v) from_canon[to_canon[v]] = v;
    std::vector<Attr> cert{static_cast<Attr>(g.n)};
    for (int p = 0; p < g.n; ++p) cert.push_back(orig[from_canon[p]]);
    for (int p = 0; p < g.n; ++p) {
        int v = from_canon[p];
        std::vector<std::array<Attr, 3>> rows;
        for (const auto& [w, o, in] : g.adj[v])
            rows.push_back({static_cast<Attr>(to_canon[w]), o, in});
        std::sort(rows.begin(), rows.end());
        cert.push_back(static_cast<Attr>(rows.size()));
        for (const auto& r : rows) cert.insert(cert.end(), r.begin(), r.end());
    }
    return cert;
}

struct CanonSearch {
    const ColoredGraph& g;
    std::vector<Attr> orig;
    std::vector<Attr> best_cert;
    Permutation best_perm;
    bool have = false;

    explicit CanonSearch(const ColoredGraph& g_) : g(g_), orig(g_.color) {}

    void run(std::vector<Attr> col) {
        col = refine(g, col);
        auto sz = class_sizes(col);
        int target = -1;
        for (int v = 0; v < g.n; ++v)
            if (sz[col[v]] > 1 && (target < 0 || col[v] < col[target])) target = v;
        if (target < 0) {
            Permutation to_canon(g.n);
            for (int v = 0; v < g.n; ++v) to_canon[v] = static_cast<int>(col[v]);
            auto cert = certificate(g, orig, to_canon);
            if (!have || cert < best_cert) {
                best_cert = std::move(cert);
                best_perm = std::move(to_canon);
                have = true;
            }
            return;
        }
        for (int v = 0; v < g.n; ++v) {
            if (col[v] != col[target]) continue;
            auto col2 = col;
            col2[v] = static_cast<Attr>(g.n);  // beyond every rank: individualized
            run(std::move(col2));
        }
    }
};

std::string cert_string(const std::vector<Attr>& cert) {
    std::string s = "cg1";
    for (Attr a : cert) {
        s.push_back(';');
        s += std::to_string(a);
    }
    return s;
}

}  // namespace

void ColoredGraph::add_edge(int u, int v, Attr attr_uv, Attr attr_vu) {
    require(u != v && u >= 0 && v >= 0 && u < n && v < n, "colored graph: bad edge endpoints");
    require(attr_uv != 0 && attr_vu != 0, "colored graph: zero edge attribute");
    require(attr(u, v) == 0, "colored graph: parallel edges must be pre-merged");
    adj[u].push_back({v, attr_uv, attr_vu});
    adj[v].push_back({u, attr_vu, attr_uv});
    std::sort(adj[u].begin(), adj[u].end());
    std::sort(adj[v].begin(), adj[v].end());
}

Attr ColoredGraph::attr(int u, int v) const {
    auto it = std::lower_bound(adj[u].begin(), adj[u].end(), v,
                               [](const Adj& e, int x) { return std::get<0>(e) < x; });
    if (it == adj[u].end() || std::get<0>(*it) != v) return 0;
    return std::get<1>(*it);
}

std::vector<Permutation> automorphisms(const ColoredGraph& g, std::uint64_t cap) {
    AutSearch s(g, refine(g, g.color), cap);
    s.run(0);
    std::sort(s.out.begin(), s.out.end());
    return std::move(s.out);
}

std::string canonical_code(const ColoredGraph& g) {
    CanonSearch s(g);
    s.run(g.color);
    return cert_string(s.best_cert);
}

Permutation canonical_labeling(const ColoredGraph& g) {
    CanonSearch s(g);
    s.run(g.color);
    return s.best_perm;
}

ColoredGraph colored_from(const MultiGraph& g, const std::vector<int>& pins) {
    int n = static_cast<int>(g.verts.size());
    ColoredGraph cg(n);
    for (size_t i = 0; i < pins.size(); ++i) {
        int li = g.index_of(pins[i]);
        require(li >= 0, "isomorphism: pin is not a vertex");
        require(cg.color[li] == 0, "isomorphism: vertex pinned twice");
        cg.color[li] = static_cast<Attr>(i) + 1;
    }
    std::map<std::pair<int, int>, std::pair<Attr, Attr>> mult;  // (real, virtual) counts
    for (const auto& e : g.edges) {
        int u = g.index_of(e.u), v = g.index_of(e.v);
        require(u >= 0 && v >= 0, "isomorphism: edge endpoint outside vertex set");
        auto key = std::minmax(u, v);
        auto& m = mult[{key.first, key.second}];
        if (e.is_virtual())
            ++m.second;
        else
            ++m.first;
    }
    for (const auto& [uv, m] : mult) {
        Attr a = (1ull << 62) | (m.first << 31) | m.second;
        cg.add_edge(uv.first, uv.second, a, a);
    }
    return cg;
}

std::string canonical_code(const MultiGraph& g, const std::vector<int>& pins) {
    return canonical_code(colored_from(g, pins));
}

std::vector<Permutation> automorphisms(const MultiGraph& g, const std::vector<int>& pins,
                                       std::uint64_t cap) {
    return automorphisms(colored_from(g, pins), cap);
}

bool are_isomorphic(const MultiGraph& a, const MultiGraph& b) {
    if (a.verts.size() != b.verts.size() || a.edges.size() != b.edges.size()) return false;
    return canonical_code(a) == canonical_code(b);
}

std::optional<std::vector<int>> isomorphism_witness(const MultiGraph& a, const MultiGraph& b,
                                                    const std::vector<int>& pins_a,
                                                    const std::vector<int>& pins_b) {
    require(pins_a.size() == pins_b.size(), "isomorphism: pin lists differ in length");
    if (a.verts.size() != b.verts.size() || a.edges.size() != b.edges.size()) return std::nullopt;
    ColoredGraph ca = colored_from(a, pins_a), cb = colored_from(b, pins_b);
    CanonSearch sa(ca), sb(cb);
    sa.run(ca.color);
    sb.run(cb.color);
    if (sa.best_cert != sb.best_cert) return std::nullopt;
    std::vector<int> from_canon_b(cb.n);
    for (int v = 0; v < cb.n; ++v) from_canon_b[sb.best_perm[v]] = v;
    std::vector<int> w(ca.n);
    for (int v = 0; v < ca.n; ++v) w[v] = from_canon_b[sa.best_perm[v]];
    for (int v = 0; v < ca.n; ++v) {
        require(ca.color[v] == cb.color[w[v]], "isomorphism: witness breaks colors");
        for (const auto& [x, o, in] : ca.adj[v])
            require(cb.attr(w[v], w[x]) == o, "isomorphism: witness breaks adjacency");
    }
    return w;
}

std::vector<std::vector<int>> group_by_isomorphism(const std::vector<MultiGraph>& gs) {
    std::vector<std::vector<int>> groups;
    std::unordered_map<std::string, size_t> at;
    for (size_t i = 0; i < gs.size(); ++i) {
        std::string code = canonical_code(gs[i]);
        auto [it, fresh] = at.emplace(std::move(code), groups.size());
        if (fresh) groups.push_back({});
        groups[it->second].push_back(static_cast<int>(i));
    }
    return groups;
}

}  // namespace dist
