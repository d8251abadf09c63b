#include "dist/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <set>

#include "dist/errors.hpp"

namespace dist {

namespace {

// (real, virtual) edge multiplicity between a local vertex pair.
struct PairCount {
    int real = 0, virt = 0;
    bool operator==(const PairCount&) const = default;
};

struct BruteGraph {
    int n = 0;
    std::vector<std::vector<PairCount>> count;  // n x n symmetric

    explicit BruteGraph(const MultiGraph& g) {
        n = static_cast<int>(g.verts.size());
        if (n > 15) throw CapExceeded("oracle: graph has " + std::to_string(n) + " vertices, cap is 15");
        count.assign(n, std::vector<PairCount>(n));
        for (const auto& e : g.edges) {
            int u = g.index_of(e.u), v = g.index_of(e.v);
            require(u >= 0 && v >= 0, "oracle: edge endpoint outside vertex set");
            if (e.is_virtual()) {
                ++count[u][v].virt;
                ++count[v][u].virt;
            } else {
                ++count[u][v].real;
                ++count[v][u].real;
            }
        }
    }
};

void search(const BruteGraph& b, const std::vector<int>& forced, std::vector<int>& perm,
            std::vector<bool>& used, int pos, std::vector<Permutation>& out) {
    if (pos == b.n) {
        out.push_back(perm);
        return;
    }
    for (int w = 0; w < b.n; ++w) {
        if (used[w]) continue;
        if (forced[pos] >= 0 && forced[pos] != w) continue;
        bool ok = true;
        for (int j = 0; j < pos && ok; ++j)
            if (!(b.count[pos][j] == b.count[w][perm[j]])) ok = false;
        if (!ok) continue;
        perm[pos] = w;
        used[w] = true;
        search(b, forced, perm, used, pos + 1, out);
        used[w] = false;
    }
}

std::vector<Permutation> enumerate_autos(const MultiGraph& g, const std::vector<int>& pins) {
    BruteGraph b(g);
    std::vector<int> forced(b.n, -1);
    for (int p : pins) {
        int i = g.index_of(p);
        require(i >= 0, "oracle: pin " + std::to_string(p) + " not a vertex");
        forced[i] = i;
    }
    std::vector<int> perm(b.n);
    std::vector<bool> used(b.n, false);
    std::vector<Permutation> out;
    search(b, forced, perm, used, 0, out);
    return out;
}

bool is_identity(const Permutation& p) {
    for (size_t v = 0; v < p.size(); ++v)
        if (p[v] != static_cast<int>(v)) return false;
    return true;
}

bool preserves(const Permutation& p, const std::vector<int>& labels) {
    for (size_t v = 0; v < p.size(); ++v)
        if (labels[p[v]] != labels[v]) return false;
    return true;
}

std::vector<Permutation> drop_identity(const std::vector<Permutation>& grp) {
    std::vector<Permutation> out;
    for (const auto& p : grp)
        if (!is_identity(p)) out.push_back(p);
    return out;
}

Big exact_div(const Big& num, const Big& den, const char* what) {
    require(den != 0 && divides(den, num), std::string("oracle: ") + what + " not divisible");
    return num / den;
}

// Distinct orbits of the given labelings under the group, by canonical
// (lexicographically minimal) orbit representative.
Big orbit_count(const std::set<std::vector<int>>& labelings, const std::vector<Permutation>& grp) {
    std::set<std::vector<int>> reps;
    std::vector<int> img;
    for (const auto& l : labelings) {
        std::vector<int> best = l;
        img.resize(l.size());
        for (const auto& p : grp) {
            for (size_t v = 0; v < l.size(); ++v) img[p[v]] = l[v];
            if (img < best) best = img;
        }
        reps.insert(best);
    }
    return Big(static_cast<unsigned long>(reps.size()));
}

OracleResult count_core(const MultiGraph& g, int k, const std::vector<int>& pins, int x, int y) {
    const bool pair = (x >= 0);
    int n = static_cast<int>(g.verts.size());
    if (n > 15) throw CapExceeded("oracle: graph has " + std::to_string(n) + " vertices, cap is 15");
    double total = 1;
    for (int i = 0; i < n; ++i) {
        total *= k;
        if (total > 1e7) throw CapExceeded("oracle: k^n exceeds 10^7");
    }
    const bool recount = total <= 200000;  // orbit cross-check only at small sizes

    std::vector<Permutation> grp_point, grp_edge;
    int lx = -1, ly = -1;
    if (pair) {
        lx = g.index_of(x);
        ly = g.index_of(y);
        require(lx >= 0 && ly >= 0, "oracle: pair vertex missing");
        grp_point = enumerate_autos(g, {x, y});
        for (const auto& p : enumerate_autos(g, {}))
            if (p[lx] == ly && p[ly] == lx) grp_edge.push_back(p);
        grp_edge.insert(grp_edge.end(), grp_point.begin(), grp_point.end());
    } else {
        grp_point = enumerate_autos(g, pins);
    }

    OracleResult r;
    r.pair_context = pair;
    r.aut_order = static_cast<unsigned long>(grp_point.size());
    if (pair) {
        r.aut_order_edge = static_cast<unsigned long>(grp_edge.size());
        r.has_swap = grp_edge.size() > grp_point.size();
    }
    if (n == 0) {
        r.L = 1;
        r.D = 1;
        return r;
    }
    if (k == 0) return r;

    auto nontriv_point = drop_identity(grp_point);
    auto nontriv_edge = drop_identity(grp_edge);
    std::vector<Permutation> swappers;
    for (const auto& p : grp_edge)
        if (pair && p[lx] == ly) swappers.push_back(p);

    std::vector<int> labels(n, 0);
    std::set<std::vector<int>> dist_point, dist_edge;
    Big bad = 0, L_same = 0, L_diff = 0;
    while (true) {
        bool killed_all = true;
        for (const auto& p : nontriv_point)
            if (preserves(p, labels)) {
                killed_all = false;
                break;
            }
        if (killed_all) {
            r.L += 1;
            if (recount) dist_point.insert(labels);
            for (const auto& p : swappers)
                if (preserves(p, labels)) {
                    bad += 1;
                    break;
                }
        }
        if (pair) {
            bool killed_edge = true;
            for (const auto& p : nontriv_edge)
                if (preserves(p, labels)) {
                    killed_edge = false;
                    break;
                }
            if (killed_edge) {
                r.L_edge += 1;
                if (recount) dist_edge.insert(labels);
                if (labels[lx] == labels[ly])
                    L_same += 1;
                else
                    L_diff += 1;
            }
        }
        int i = 0;
        while (i < n && labels[i] == k - 1) labels[i++] = 0;
        if (i == n) break;
        ++labels[i];
    }

    r.D = exact_div(r.L, r.aut_order, "L by |Aut|");
    if (recount) require(r.D == orbit_count(dist_point, grp_point), "oracle: orbit recount mismatch");
    if (pair) {
        r.D_edge = exact_div(r.L_edge, r.aut_order_edge, "L_edge by |Aut edge|");
        if (recount)
            require(r.D_edge == orbit_count(dist_edge, grp_edge), "oracle: edge orbit recount mismatch");
        r.D_same = exact_div(L_same, r.aut_order_edge, "L_same by |Aut edge|");
        r.D_diff = exact_div(L_diff, r.aut_order_edge, "L_diff by |Aut edge|");
        r.B = exact_div(bad, r.aut_order, "swap-preserved count by |Aut|");
    }
    return r;
}

}  // namespace

std::vector<Permutation> oracle_automorphisms(const MultiGraph& g, const std::vector<int>& pins) {
    return enumerate_autos(g, pins);
}

std::vector<Permutation> oracle_automorphisms(const Graph& g, const std::vector<int>& pins) {
    return enumerate_autos(multigraph_from(g), pins);
}

OracleResult oracle_counts(const MultiGraph& g, int k) { return count_core(g, k, {}, -1, -1); }

OracleResult oracle_counts_fixed(const MultiGraph& g, int k, const std::vector<int>& pins) {
    return count_core(g, k, pins, -1, -1);
}

OracleResult oracle_counts_pair(const MultiGraph& g, int k, int x, int y) {
    return count_core(g, k, {}, x, y);
}

OracleResult oracle_counts(const Graph& g, int k) { return oracle_counts(multigraph_from(g), k); }

}  // namespace dist
