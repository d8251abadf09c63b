#include "dist/decomp_tree.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "dist/errors.hpp"
#include "json.hpp"

namespace dist {

namespace {

// Center of a tree given by an adjacency list, by peeling leaves.  The
// trees this runs on all have provably unique centers, so a two-vertex
// center means the construction went wrong somewhere.
int unique_center(const std::vector<std::vector<int>>& adj, const std::vector<int>& members,
                  const char* what) {
    require(!members.empty(), std::string("tree center: empty ") + what);
    if (members.size() == 1) return members[0];
    std::map<int, int> deg;
    std::set<int> in;
    for (int v : members) in.insert(v);
    for (int v : members) {
        int d = 0;
        for (int w : adj[v])
            if (in.count(w)) ++d;
        deg[v] = d;
    }
    std::set<int> alive(members.begin(), members.end());
    std::vector<int> layer;
    for (int v : members)
        if (deg[v] <= 1) layer.push_back(v);
    require(!layer.empty(), std::string("tree center: cycle among ") + what);
    while (alive.size() > 2) {
        std::vector<int> next;
        for (int v : layer) {
            alive.erase(v);
            for (int w : adj[v])
                if (alive.count(w) && --deg[w] == 1) next.push_back(w);
        }
        layer = std::move(next);
        require(!layer.empty() || alive.size() <= 2,
                std::string("tree center: stripping stalled in ") + what);
    }
    require(alive.size() == 1, std::string("tree center: two-vertex center in ") + what);
    return *alive.begin();
}

bool t_node_contains(const TreeNode& n, int v) { return n.comp.index_of(v) >= 0; }

}  // namespace

DecompTree build_tree(const Graph& g) {
    require(g.n >= 1, "decomposition tree: empty graph");
    require(connected_components(g).size() == 1, "decomposition tree: graph not connected");

    DecompTree t;
    t.graph = g;
    if (g.n == 1) {
        TreeNode c;
        c.type = NodeType::C;
        c.vertex = 0;
        t.nodes.push_back(std::move(c));
        t.root = 0;
        t.order = {0};
        return t;
    }

    auto bd = blocks_and_cut_vertices(g);
    int nblocks = static_cast<int>(bd.blocks.size());

    std::vector<std::vector<int>> adj;  // over tree node ids
    auto new_node = [&](TreeNode n) {
        t.nodes.push_back(std::move(n));
        adj.push_back({});
        return static_cast<int>(t.nodes.size()) - 1;
    };
    auto link = [&](int a, int b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    };

    std::vector<std::vector<int>> block_nodes(nblocks);  // ids of S and T nodes per block
    for (int bi = 0; bi < nblocks; ++bi) {
        auto d = triconnected_components(bd.blocks[bi]);
        std::vector<int> t_ids;
        for (auto& c : d.components) {
            TreeNode n;
            n.type = NodeType::T;
            n.block = bi;
            n.comp = std::move(c.graph);
            n.kind = c.kind;
            t_ids.push_back(new_node(std::move(n)));
        }
        std::map<std::pair<int, int>, int> s_of_pair;
        for (const auto& p : d.pairs) {
            auto key = std::minmax(p.x, p.y);
            if (s_of_pair.count(key)) continue;
            TreeNode n;
            n.type = NodeType::S;
            n.block = bi;
            n.x = key.first;
            n.y = key.second;
            s_of_pair[key] = new_node(std::move(n));
        }
        for (int id : t_ids) {
            std::set<std::pair<int, int>> pairs;
            for (const auto& e : t.nodes[id].comp.edges)
                if (e.is_virtual()) pairs.insert(std::minmax(e.u, e.v));
            for (const auto& p : pairs) link(id, s_of_pair.at(p));
        }
        block_nodes[bi] = t_ids;
        for (const auto& [key, id] : s_of_pair) block_nodes[bi].push_back(id);
        // each block contributes a tree: nodes = edges + 1
        size_t block_edges = 0;
        for (int id : block_nodes[bi]) block_edges += adj[id].size();
        require(block_edges / 2 + 1 == block_nodes[bi].size(),
                "decomposition tree: block component tree is not a tree");
    }

    std::map<int, int> c_of_vertex;
    for (int a : bd.cut_vertices) {
        TreeNode n;
        n.type = NodeType::C;
        n.vertex = a;
        c_of_vertex[a] = new_node(std::move(n));
    }

    // attach every cut vertex to the center of the nodes containing it
    // inside each of its blocks
    auto contains = [&](int id, int v) {
        const TreeNode& n = t.nodes[id];
        if (n.type == NodeType::S) return n.x == v || n.y == v;
        return t_node_contains(n, v);
    };
    std::vector<std::vector<int>> block_attach(nblocks);
    for (int bi = 0; bi < nblocks; ++bi) {
        for (int a : bd.cut_vertices) {
            if (bd.blocks[bi].index_of(a) < 0) continue;
            std::vector<int> holding;
            for (int id : block_nodes[bi])
                if (contains(id, a)) holding.push_back(id);
            int at = unique_center(adj, holding, "the nodes holding a cut vertex");
            link(c_of_vertex.at(a), at);
        }
    }

    // root: center of the block-cut tree; descend into the central block
    int root;
    {
        int bc_n = nblocks + static_cast<int>(bd.cut_vertices.size());
        std::vector<std::vector<int>> bc_adj(bc_n);
        std::map<int, int> bc_c;
        for (size_t i = 0; i < bd.cut_vertices.size(); ++i)
            bc_c[bd.cut_vertices[i]] = nblocks + static_cast<int>(i);
        for (int bi = 0; bi < nblocks; ++bi)
            for (int a : bd.cut_vertices)
                if (bd.blocks[bi].index_of(a) >= 0) {
                    bc_adj[bi].push_back(bc_c.at(a));
                    bc_adj[bc_c.at(a)].push_back(bi);
                }
        std::vector<int> all(bc_n);
        for (int i = 0; i < bc_n; ++i) all[i] = i;
        int bc_center = unique_center(bc_adj, all, "the block-cut tree");
        if (bc_center >= nblocks)
            root = c_of_vertex.at(bd.cut_vertices[bc_center - nblocks]);
        else
            root = unique_center(adj, block_nodes[bc_center], "the central block tree");
    }

    // orient away from the root
    t.root = root;
    std::vector<int> queue{root};
    std::vector<bool> seen(t.nodes.size(), false);
    seen[root] = true;
    for (size_t h = 0; h < queue.size(); ++h) {
        int v = queue[h];
        std::vector<int> kids;
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = true;
                t.nodes[w].parent = v;
                t.nodes[w].depth = t.nodes[v].depth + 1;
                kids.push_back(w);
            }
        std::sort(kids.begin(), kids.end());
        t.nodes[v].children = kids;
        queue.insert(queue.end(), kids.begin(), kids.end());
    }
    for (bool s : seen) require(s, "decomposition tree: disconnected node graph");

    t.order.resize(t.nodes.size());
    for (size_t i = 0; i < t.nodes.size(); ++i) t.order[i] = static_cast<int>(i);
    std::stable_sort(t.order.begin(), t.order.end(),
                     [&](int a, int b) { return t.nodes[a].depth > t.nodes[b].depth; });
    return t;
}

MultiGraph subtree_graph(const DecompTree& t, int node) {
    std::set<int> vs;
    std::vector<MEdge> edges;
    std::vector<int> stack{node};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        const TreeNode& n = t.nodes[v];
        if (n.type == NodeType::T) {
            for (const auto& e : n.comp.edges)
                if (!e.is_virtual()) edges.push_back(e);
            vs.insert(n.comp.verts.begin(), n.comp.verts.end());
        }
        for (int w : n.children) stack.push_back(w);
    }
    const TreeNode& n = t.nodes[node];
    if (n.type == NodeType::C) vs.insert(n.vertex);
    if (n.type == NodeType::S) {
        vs.insert(n.x);
        vs.insert(n.y);
    }
    MultiGraph out;
    out.verts.assign(vs.begin(), vs.end());
    std::sort(edges.begin(), edges.end(), [](const MEdge& a, const MEdge& b) {
        return std::minmax(a.u, a.v) < std::minmax(b.u, b.v);
    });
    out.edges = std::move(edges);
    return out;
}

std::vector<int> boundary_pins(const DecompTree& t, int node) {
    const TreeNode& n = t.nodes[node];
    if (node == t.root) return {};
    switch (n.type) {
        case NodeType::C: return {n.vertex};
        case NodeType::S: return {n.x, n.y};
        case NodeType::T: {
            const TreeNode& p = t.nodes[n.parent];
            if (p.type == NodeType::S) return {p.x, p.y};
            require(p.type == NodeType::C, "decomposition tree: T node under T node");
            return {p.vertex};
        }
    }
    return {};
}

namespace {

nlohmann::ordered_json node_json(const DecompTree& t, int id) {
    const TreeNode& n = t.nodes[id];
    nlohmann::ordered_json j;
    switch (n.type) {
        case NodeType::C:
            j["type"] = "c";
            j["vertex"] = n.vertex;
            break;
        case NodeType::S:
            j["type"] = "s";
            j["pair"] = {n.x, n.y};
            break;
        case NodeType::T: {
            j["type"] = "t";
            j["kind"] = kind_name(n.kind);
            j["vertices"] = n.comp.verts;
            std::vector<std::pair<int, int>> real, virt;
            for (const auto& e : n.comp.edges)
                (e.is_virtual() ? virt : real).push_back(std::minmax(e.u, e.v));
            std::sort(real.begin(), real.end());
            std::sort(virt.begin(), virt.end());
            j["real_edges"] = real;
            j["virtual_pairs"] = virt;
            break;
        }
    }
    std::vector<nlohmann::ordered_json> kids;
    for (int c : n.children) kids.push_back(node_json(t, c));
    std::sort(kids.begin(), kids.end(), [](const auto& a, const auto& b) {
        return a.dump() < b.dump();
    });
    j["children"] = kids;
    return j;
}

}  // namespace

std::string tree_to_json(const DecompTree& t) {
    nlohmann::ordered_json j;
    j["n"] = t.graph.n;
    if (!t.graph.names.empty()) j["names"] = t.graph.names;
    j["nodes"] = static_cast<int>(t.nodes.size());
    j["root"] = node_json(t, t.root);
    return j.dump(2);
}

}  // namespace dist
