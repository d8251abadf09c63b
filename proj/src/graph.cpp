#include "dist/graph.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

#include "dist/errors.hpp"

namespace dist {

void Graph::add_edge(int u, int v) {
    if (u == v) throw FormatError("self-loop at vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
    if (has_edge(u, v))
        throw FormatError("duplicate edge " + std::to_string(u) + "-" + std::to_string(v));
    if (v >= n) n = v + 1;
    edges.push_back({u, v});
}

bool Graph::has_edge(int u, int v) const {
    if (u > v) std::swap(u, v);
    for (const auto& e : edges)
        if (e.first == u && e.second == v) return true;
    return false;
}

std::vector<std::vector<int>> adjacency(const Graph& g) {
    std::vector<std::vector<int>> adj(g.n);
    for (const auto& e : g.edges) {
        adj[e.first].push_back(e.second);
        adj[e.second].push_back(e.first);
    }
    return adj;
}

int MultiGraph::index_of(int global_v) const {
    auto it = std::lower_bound(verts.begin(), verts.end(), global_v);
    if (it == verts.end() || *it != global_v) return -1;
    return static_cast<int>(it - verts.begin());
}

std::vector<std::vector<std::pair<int, int>>> m_adjacency(const MultiGraph& g) {
    std::vector<std::vector<std::pair<int, int>>> adj(g.verts.size());
    for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
        int u = g.index_of(g.edges[i].u);
        int v = g.index_of(g.edges[i].v);
        adj[u].push_back({v, i});
        adj[v].push_back({u, i});
    }
    return adj;
}

MultiGraph multigraph_from(const Graph& g) {
    MultiGraph m;
    m.verts.resize(g.n);
    for (int i = 0; i < g.n; ++i) m.verts[i] = i;
    for (const auto& e : g.edges) m.edges.push_back({e.first, e.second, kRealEdge});
    return m;
}

std::vector<GraphComponent> connected_components(const Graph& g) {
    auto adj = adjacency(g);
    std::vector<int> comp(g.n, -1);
    int ncomp = 0;
    for (int s = 0; s < g.n; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<int> stack{s};
        comp[s] = ncomp;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : adj[v])
                if (comp[w] < 0) {
                    comp[w] = ncomp;
                    stack.push_back(w);
                }
        }
        ++ncomp;
    }
    std::vector<GraphComponent> out(ncomp);
    std::vector<int> local(g.n, -1);
    for (int v = 0; v < g.n; ++v) {
        auto& c = out[comp[v]];
        local[v] = c.graph.n++;
        c.vertex_map.push_back(v);
    }
    for (const auto& e : g.edges)
        out[comp[e.first]].graph.edges.push_back({local[e.first], local[e.second]});
    return out;
}

BlockDecomposition blocks_and_cut_vertices(const Graph& g) {
    auto adj = adjacency(g);
    BlockDecomposition out;
    std::vector<int> num(g.n, -1), low(g.n, 0), parent(g.n, -1);
    std::vector<bool> is_cut(g.n, false);
    std::vector<std::pair<int, int>> estack;
    int timer = 0;

    // Iterative DFS; frame keeps position in the adjacency list.
    struct Frame {
        int v;
        size_t next = 0;
    };
    for (int root = 0; root < g.n; ++root) {
        if (num[root] >= 0) continue;
        int root_children = 0;
        std::vector<Frame> fs{{root}};
        num[root] = low[root] = timer++;
        while (!fs.empty()) {
            auto& f = fs.back();
            int v = f.v;
            if (f.next < adj[v].size()) {
                int w = adj[v][f.next++];
                if (w == parent[v]) {
                    // skip one parent edge occurrence only (no parallels in Graph)
                    continue;
                }
                if (num[w] < 0) {
                    parent[w] = v;
                    estack.push_back({v, w});
                    num[w] = low[w] = timer++;
                    fs.push_back({w});
                } else if (num[w] < num[v]) {
                    estack.push_back({v, w});
                    low[v] = std::min(low[v], num[w]);
                }
            } else {
                fs.pop_back();
                if (fs.empty()) break;
                int p = fs.back().v;
                low[p] = std::min(low[p], low[v]);
                if (p == root) ++root_children;
                if (low[v] >= num[p]) {
                    if (p != root) is_cut[p] = true;
                    MultiGraph blk;
                    std::set<int> vs;
                    while (true) {
                        auto e = estack.back();
                        estack.pop_back();
                        vs.insert(e.first);
                        vs.insert(e.second);
                        blk.edges.push_back({e.first, e.second, kRealEdge});
                        if (e.first == p && e.second == v) break;
                    }
                    blk.verts.assign(vs.begin(), vs.end());
                    out.blocks.push_back(std::move(blk));
                }
            }
        }
        if (root_children >= 2) is_cut[root] = true;
        if (adj[root].empty()) {
            MultiGraph blk;
            blk.verts = {root};
            out.blocks.push_back(std::move(blk));
        }
    }
    for (int v = 0; v < g.n; ++v)
        if (is_cut[v]) out.cut_vertices.push_back(v);
    return out;
}

Graph parse_edgelist(const std::string& text) {
    Graph g;
    std::unordered_map<std::string, int> id;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        if (toks.empty()) continue;
        if (toks.size() != 2)
            throw FormatError("line " + std::to_string(lineno) + ": expected two vertex names, got " +
                              std::to_string(toks.size()));
        int ids[2];
        for (int i = 0; i < 2; ++i) {
            auto it = id.find(toks[i]);
            if (it == id.end()) {
                int next = static_cast<int>(id.size());
                id.emplace(toks[i], next);
                g.names.push_back(toks[i]);
                g.n = next + 1;
                ids[i] = next;
            } else {
                ids[i] = it->second;
            }
        }
        if (ids[0] == ids[1])
            throw FormatError("line " + std::to_string(lineno) + ": self-loop at '" + toks[0] + "'");
        if (g.has_edge(ids[0], ids[1]))
            throw FormatError("line " + std::to_string(lineno) + ": duplicate edge '" + toks[0] +
                              "' '" + toks[1] + "'");
        int u = std::min(ids[0], ids[1]), v = std::max(ids[0], ids[1]);
        g.edges.push_back({u, v});
    }
    return g;
}

Graph parse_graph6(const std::string& line_in) {
    std::string s = line_in;
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
    const std::string header = ">>graph6<<";
    if (s.rfind(header, 0) == 0) s = s.substr(header.size());
    if (s.empty()) throw FormatError("graph6: empty input");
    size_t pos = 0;
    auto byte = [&](size_t i) -> int {
        if (i >= s.size()) throw FormatError("graph6: truncated at offset " + std::to_string(i));
        int c = static_cast<unsigned char>(s[i]);
        if (c < 63 || c > 126)
            throw FormatError("graph6: bad character at offset " + std::to_string(i));
        return c - 63;
    };
    long long n;
    if (s[0] != '~') {
        n = byte(0);
        pos = 1;
    } else if (s.size() >= 4 && s[1] != '~') {
        n = (static_cast<long long>(byte(1)) << 12) | (byte(2) << 6) | byte(3);
        pos = 4;
    } else {
        throw FormatError("graph6: vertex counts beyond 258047 not supported");
    }
    Graph g;
    g.n = static_cast<int>(n);
    long long bits = n * (n - 1) / 2;
    long long need = (bits + 5) / 6;
    if (static_cast<long long>(s.size()) - static_cast<long long>(pos) != need)
        throw FormatError("graph6: expected " + std::to_string(need) + " data characters, got " +
                          std::to_string(s.size() - pos));
    long long bi = 0;
    for (int j = 1; j < g.n; ++j)
        for (int i = 0; i < j; ++i) {
            int chunk = byte(pos + bi / 6);
            int bit = (chunk >> (5 - bi % 6)) & 1;
            if (bit) g.edges.push_back({i, j});
            ++bi;
        }
    return g;
}

std::string to_graph6(const Graph& g) {
    std::string s;
    if (g.n < 63) {
        s.push_back(static_cast<char>(g.n + 63));
    } else {
        s.push_back('~');
        s.push_back(static_cast<char>(((g.n >> 12) & 63) + 63));
        s.push_back(static_cast<char>(((g.n >> 6) & 63) + 63));
        s.push_back(static_cast<char>((g.n & 63) + 63));
    }
    std::vector<bool> bits;
    bits.reserve(static_cast<size_t>(g.n) * (g.n - 1) / 2);
    for (int j = 1; j < g.n; ++j)
        for (int i = 0; i < j; ++i) bits.push_back(g.has_edge(i, j));
    for (size_t b = 0; b < bits.size(); b += 6) {
        int chunk = 0;
        for (size_t t = 0; t < 6; ++t) {
            chunk <<= 1;
            if (b + t < bits.size() && bits[b + t]) chunk |= 1;
        }
        s.push_back(static_cast<char>(chunk + 63));
    }
    return s;
}

}  // namespace dist
