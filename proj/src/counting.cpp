#include "dist/counting.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>

#include "dist/decomp_tree.hpp"
#include "dist/errors.hpp"

namespace dist {

namespace {

// Per-node counting state. d_fix counts the equivalence classes of
// labelings of the hanging subgraph that every nontrivial boundary-fixing
// automorphism destroys; in pair contexts b counts those classes that some
// pair-swapping automorphism keeps, so (d_fix - b) / 2 classes survive the
// swap as setwise-destroyed ones.
struct Bundle {
    Big d_fix = 0;
    Big b = 0;
    bool has_swap = false;
    Big aut = 1;  // |Aut(subtree; boundary pointwise)|
    // interned structure codes; code_rev has the pair roles reversed
    int code = -1;
    int code_rev = -1;
};

constexpr std::uint64_t kPinShift = 1ull << 40;

struct Eval {
    const DecompTree& tree;
    const CountOptions& opt;
    const int k;
    const Big kb, kb2;
    std::unordered_map<std::string, int> registry;
    std::vector<Bundle> bundles;

    Eval(const DecompTree& t, int k_, const CountOptions& o)
        : tree(t), opt(o), k(k_), kb(k_), kb2(Big(k_) * k_) {
        bundles.resize(t.nodes.size());
    }

    int intern(const std::string& s) {
        return registry.emplace(s, static_cast<int>(registry.size())).first->second;
    }

    bool is_root(int id) const { return id == tree.root; }
    void eval_node(int id);
    void eval_c(int id);
    void eval_s(int id);
    void eval_t(int id);
};

std::string class_list_code(std::vector<std::pair<int, int>> code_mult) {
    std::sort(code_mult.begin(), code_mult.end());
    std::string s;
    for (auto [c, m] : code_mult) {
        if (!s.empty()) s += ',';
        s += std::to_string(c) + '*' + std::to_string(m);
    }
    return s;
}

void Eval::eval_c(int id) {
    const TreeNode& nd = tree.nodes[id];
    std::map<int, std::vector<int>> classes;  // code -> child node ids
    for (int ch : nd.children) classes[bundles[ch].code].push_back(ch);

    Bundle& bd = bundles[id];
    bd.d_fix = kb;
    bd.aut = 1;
    std::vector<std::pair<int, int>> code_mult;
    for (const auto& [code, members] : classes) {
        const Bundle& rep = bundles[members.front()];
        for (int ch : members) {
            require(bundles[ch].d_fix == rep.d_fix && bundles[ch].aut == rep.aut,
                    "cut vertex recursion: equal codes with unequal values");
        }
        const auto m = static_cast<unsigned long>(members.size());
        bd.d_fix *= big_binom(exact_div(rep.d_fix, kb), m);
        bd.aut *= big_factorial(m) * big_pow(rep.aut, m);
        code_mult.emplace_back(code, static_cast<int>(m));
    }
    if (!is_root(id)) bd.code = intern("c(" + class_list_code(std::move(code_mult)) + ")");
}

void Eval::eval_s(int id) {
    const TreeNode& nd = tree.nodes[id];
    int cx = -1, cy = -1;
    std::vector<int> tkids;
    for (int ch : nd.children) {
        const TreeNode& c = tree.nodes[ch];
        if (c.type == NodeType::C) {
            require(c.vertex == nd.x || c.vertex == nd.y, "pair node: foreign cut child");
            (c.vertex == nd.x ? cx : cy) = ch;
        } else {
            require(c.type == NodeType::T, "pair node: pair child");
            tkids.push_back(ch);
        }
    }
    require(!tkids.empty(), "pair node without components");

    const Big fx = cx >= 0 ? exact_div(bundles[cx].d_fix, kb) : Big(1);
    const Big fy = cy >= 0 ? exact_div(bundles[cy].d_fix, kb) : Big(1);

    struct Cls {
        int code, code_rev, rep;
        unsigned long m;
        Big q;
    };
    std::vector<Cls> classes;
    {
        std::map<int, std::vector<int>> by_code;
        for (int ch : tkids) by_code[bundles[ch].code].push_back(ch);
        for (const auto& [code, members] : by_code) {
            const Bundle& rep = bundles[members.front()];
            for (int ch : members) {
                require(bundles[ch].d_fix == rep.d_fix && bundles[ch].b == rep.b &&
                            bundles[ch].aut == rep.aut &&
                            bundles[ch].code_rev == rep.code_rev,
                        "pair recursion: equal codes with unequal values");
            }
            classes.push_back({code, rep.code_rev, members.front(),
                               static_cast<unsigned long>(members.size()),
                               exact_div(rep.d_fix, kb2)});
        }
    }

    Bundle& bd = bundles[id];
    bd.d_fix = kb2 * fx * fy;
    bd.aut = (cx >= 0 ? bundles[cx].aut : Big(1)) * (cy >= 0 ? bundles[cy].aut : Big(1));
    for (const Cls& c : classes) {
        bd.d_fix *= big_binom(c.q, c.m);
        bd.aut *= big_factorial(c.m) * big_pow(bundles[c.rep].aut, c.m);
    }

    // A pair swap must exchange the two hanging trees and permute the
    // component classes: every class is matched with its role-reversed
    // class, either itself or a partner of the same multiplicity.
    bool possible = (cx >= 0) == (cy >= 0);
    if (possible && cx >= 0) possible = bundles[cx].code == bundles[cy].code;
    std::map<int, int> class_of_code;
    for (std::size_t i = 0; i < classes.size(); ++i)
        class_of_code.emplace(classes[i].code, static_cast<int>(i));
    std::vector<int> partner(classes.size(), -1);
    for (std::size_t i = 0; possible && i < classes.size(); ++i) {
        auto it = class_of_code.find(classes[i].code_rev);
        if (it == class_of_code.end() || classes[it->second].m != classes[i].m) {
            possible = false;
            break;
        }
        partner[i] = it->second;
    }
    if (possible) {
        bd.has_swap = true;
        bd.b = kb * fx;
        for (std::size_t i = 0; i < classes.size(); ++i) {
            const Cls& c = classes[i];
            if (partner[i] == static_cast<int>(i)) {
                // the reversal acts on this class's pool of labelings as
                // an involution with b/k fixed points
                const Bundle& rep = bundles[c.rep];
                require(rep.has_swap, "self-matched class without a component swap");
                const Big fixed = exact_div(rep.b, kb);
                const Big paired = exact_div(c.q - fixed, 2);
                require(paired >= 0, "pair recursion: negative pool pairing");
                Big sum = 0;
                for (unsigned long l = 0; 2 * l <= c.m; ++l)
                    sum += big_binom(paired, l) * big_binom(fixed, c.m - 2 * l);
                bd.b *= sum;
            } else if (partner[i] > static_cast<int>(i)) {
                bd.b *= big_binom(c.q, c.m);
            }
        }
    }

    if (!is_root(id)) {
        auto orient_code = [&](bool rev) {
            const int hx = cx >= 0 ? bundles[cx].code : -1;
            const int hy = cy >= 0 ? bundles[cy].code : -1;
            std::vector<std::pair<int, int>> code_mult;
            for (const Cls& c : classes)
                code_mult.emplace_back(rev ? c.code_rev : c.code, static_cast<int>(c.m));
            return "s(" + std::to_string(rev ? hy : hx) + ',' + std::to_string(rev ? hx : hy) +
                   '|' + class_list_code(std::move(code_mult)) + ")";
        };
        const TreeNode& par = tree.nodes[nd.parent];
        if (par.type == NodeType::C) {
            // orient the code with the parent's cut vertex first
            bd.code = intern(orient_code(par.vertex != nd.x));
        } else {
            bd.code = intern(orient_code(false));
            bd.code_rev = intern(orient_code(true));
        }
    }
}

void Eval::eval_t(int id) {
    const TreeNode& nd = tree.nodes[id];
    const MultiGraph& comp = nd.comp;
    const int nt = static_cast<int>(comp.verts.size());

    std::vector<int> cchild(nt, -1);
    struct SPair {
        int u, v;  // local endpoints, u playing the child's x role
        int node;
    };
    std::vector<SPair> spairs;
    std::map<std::pair<int, int>, int> spair_at;
    for (int ch : nd.children) {
        const TreeNode& c = tree.nodes[ch];
        if (c.type == NodeType::C) {
            const int lv = comp.index_of(c.vertex);
            require(lv >= 0, "component: cut child outside component");
            cchild[lv] = ch;
        } else {
            require(c.type == NodeType::S, "component under component");
            const int lu = comp.index_of(c.x), lv = comp.index_of(c.y);
            require(lu >= 0 && lv >= 0, "component: pair child outside component");
            spair_at.emplace(std::minmax(lu, lv), static_cast<int>(spairs.size()));
            spairs.push_back({lu, lv, ch});
        }
    }

    int pin_a = -1, pin_x = -1, pin_y = -1;
    if (!is_root(id)) {
        const TreeNode& par = tree.nodes[nd.parent];
        if (par.type == NodeType::C) {
            pin_a = comp.index_of(par.vertex);
            require(pin_a >= 0, "component: parent cut vertex missing");
        } else {
            pin_x = comp.index_of(par.x);
            pin_y = comp.index_of(par.y);
            require(pin_x >= 0 && pin_y >= 0, "component: parent pair missing");
        }
    }

    // aggregate parallel edges per local vertex pair
    std::map<std::pair<int, int>, std::pair<int, int>> mult;  // (real, parent virtual)
    std::map<std::pair<int, int>, int> child_virtual;
    for (const MEdge& e : comp.edges) {
        const int lu = comp.index_of(e.u), lv = comp.index_of(e.v);
        const auto key = std::minmax(lu, lv);
        if (!e.is_virtual()) {
            ++mult[key].first;
        } else if (pin_x >= 0 && key == std::minmax(pin_x, pin_y)) {
            ++mult[key].second;
        } else {
            require(spair_at.count(key), "component: virtual pair without its pair node");
            require(++child_virtual[key] == 1, "component: duplicated child virtual edge");
            mult[key];  // the skeleton keeps an edge on a child pair
        }
    }
    for (const auto& [key, idx] : spair_at) {
        (void)idx;
        require(child_virtual.count(key), "component: pair node without its virtual edge");
    }

    std::vector<Big> qc(nt, Big(0));
    for (int v = 0; v < nt; ++v)
        if (cchild[v] >= 0) qc[v] = exact_div(bundles[cchild[v]].d_fix, kb);
    std::vector<Big> qs, fswap;
    for (const SPair& sp : spairs) {
        const Bundle& sb = bundles[sp.node];
        qs.push_back(exact_div(sb.d_fix, kb2));
        fswap.push_back(sb.has_swap ? exact_div(sb.b, kb) : Big(0));
    }

    auto build_colored = [&](int mode) {  // 0 pointwise, 1 setwise, 2 reversed
        ColoredGraph cg(nt);
        for (int v = 0; v < nt; ++v) {
            std::uint64_t pin = 0;
            if (v == pin_a) pin = 1;
            if (pin_x >= 0) {
                if (mode == 1) {
                    if (v == pin_x || v == pin_y) pin = 3;
                } else {
                    if (v == pin_x) pin = mode == 2 ? 2 : 1;
                    if (v == pin_y) pin = mode == 2 ? 1 : 2;
                }
            }
            const std::uint64_t child =
                cchild[v] >= 0 ? 2 + static_cast<std::uint64_t>(bundles[cchild[v]].code) : 1;
            require(child < kPinShift, "component: color overflow");
            cg.color[v] = pin * kPinShift + child;
        }
        for (const auto& [key, rm] : mult) {
            const auto [r, pv] = rm;
            require(r < 65536 && pv < 65536, "component: multiplicity overflow");
            std::uint64_t sid_uv = 0, sid_vu = 0;
            auto it = spair_at.find(key);
            if (it != spair_at.end()) {
                const SPair& sp = spairs[it->second];
                const Bundle& sb = bundles[sp.node];
                const int fwd = sb.code, rev = sb.code_rev;
                require(fwd >= 0 && rev >= 0, "component: pair child without codes");
                if (sp.u == key.first) {
                    sid_uv = fwd + 1;
                    sid_vu = rev + 1;
                } else {
                    sid_uv = rev + 1;
                    sid_vu = fwd + 1;
                }
            }
            const std::uint64_t base =
                static_cast<std::uint64_t>(r) | static_cast<std::uint64_t>(pv) << 16;
            cg.add_edge(key.first, key.second, base | sid_uv << 32, base | sid_vu << 32);
        }
        return cg;
    };

    // weight of the labeling assignments a subgroup (given by generators)
    // keeps fixed: a label per vertex orbit, one hanging-tree class per
    // cut orbit, and per pair orbit either the pointwise pool or, when the
    // orbit reverses the pair, its swap-fixed part
    auto kernel = [&](const std::vector<Permutation>& gens) -> Big {
        const int ntok = nt + 2 * static_cast<int>(spairs.size());
        std::vector<int> uf(ntok);
        std::iota(uf.begin(), uf.end(), 0);
        auto find = [&](int x) {
            while (uf[x] != x) x = uf[x] = uf[uf[x]];
            return x;
        };
        auto unite = [&](int a, int b) {
            a = find(a);
            b = find(b);
            if (a != b) uf[std::max(a, b)] = std::min(a, b);
        };
        for (const auto& g : gens) {
            for (int v = 0; v < nt; ++v) unite(v, g[v]);
            for (std::size_t i = 0; i < spairs.size(); ++i) {
                const auto im = std::minmax(g[spairs[i].u], g[spairs[i].v]);
                const auto it = spair_at.find(im);
                require(it != spair_at.end(), "kernel: pair image is not a pair");
                const int j = it->second;
                const int base_i = nt + 2 * static_cast<int>(i);
                const int base_j = nt + 2 * j;
                if (g[spairs[i].u] == spairs[j].u) {
                    unite(base_i, base_j);
                    unite(base_i + 1, base_j + 1);
                } else {
                    unite(base_i, base_j + 1);
                    unite(base_i + 1, base_j);
                }
            }
        }
        Big result = 1;
        unsigned long free_orbits = 0;
        std::vector<int> rep(ntok, -1);
        for (int v = 0; v < nt; ++v) {
            const int r = find(v);
            if (rep[r] < 0) {
                rep[r] = v;
                ++free_orbits;
                if (cchild[v] >= 0) result *= qc[v];
            } else {
                require((cchild[v] >= 0) == (cchild[rep[r]] >= 0) &&
                            (cchild[v] < 0 ||
                             bundles[cchild[v]].code == bundles[cchild[rep[r]]].code),
                        "kernel: orbit mixes unequal hanging trees");
            }
        }
        for (std::size_t i = 0; i < spairs.size(); ++i) {
            const int ra = find(nt + 2 * static_cast<int>(i));
            const int rb = find(nt + 2 * static_cast<int>(i) + 1);
            const int orbit = std::min(ra, rb);
            if (rep[orbit] >= 0) continue;  // one factor per pair orbit
            rep[orbit] = static_cast<int>(i);
            if (ra == rb) {
                require(bundles[spairs[i].node].has_swap, "kernel: reversal of a rigid pair");
                result *= fswap[i];
            } else {
                result *= qs[i];
            }
        }
        return result * big_pow(kb, free_orbits);
    };

    Bundle& bd = bundles[id];
    const auto group_fix = automorphisms(build_colored(0), opt.aut_cap);
    const Big praw = destroyed_sum(group_fix, kernel, opt.lattice_cap, opt.jobs);
    bd.d_fix = exact_div(praw, Big(static_cast<unsigned long>(group_fix.size())));
    bd.aut = Big(static_cast<unsigned long>(group_fix.size()));
    for (int ch : nd.children) bd.aut *= bundles[ch].aut;

    if (pin_x >= 0) {
        const auto group_edge = automorphisms(build_colored(1), opt.aut_cap);
        require(group_edge.size() == group_fix.size() ||
                    group_edge.size() == 2 * group_fix.size(),
                "component: setwise group has unexpected order");
        if (group_edge.size() == 2 * group_fix.size()) {
            bd.has_swap = true;
            const Big eraw = destroyed_sum(group_edge, kernel, opt.lattice_cap, opt.jobs);
            const Big d_edge =
                exact_div(eraw, Big(static_cast<unsigned long>(group_edge.size())));
            bd.b = bd.d_fix - 2 * d_edge;
            require(bd.b >= 0, "component: negative swap-kept count");
        }
    }

    if (!is_root(id)) {
        bd.code = intern("t" + canonical_code(build_colored(0)));
        if (pin_x >= 0) bd.code_rev = intern("t" + canonical_code(build_colored(2)));
    }
}

void Eval::eval_node(int id) {
    switch (tree.nodes[id].type) {
        case NodeType::C: eval_c(id); break;
        case NodeType::S: eval_s(id); break;
        case NodeType::T: eval_t(id); break;
    }
}

CountResult eval_tree(const DecompTree& tree, int k, const CountOptions& opt) {
    Eval ev(tree, k, opt);
    for (int id : tree.order) ev.eval_node(id);
    const Bundle& rb = ev.bundles[tree.root];
    const TreeNode& rn = tree.nodes[tree.root];
    CountResult out;
    if (rn.type == NodeType::S && rb.has_swap) {
        out.D = exact_div(rb.d_fix - rb.b, Big(2));
        out.aut = rb.aut * 2;
    } else {
        out.D = rb.d_fix;
        out.aut = rb.aut;
    }
    out.L = out.D * out.aut;
    return out;
}

}  // namespace

CountResult count_labelings(const Graph& g, int k, const CountOptions& opt) {
    require(g.n >= 1, "count_labelings: empty graph");
    require(k >= 0, "count_labelings: negative k");
    if (k == 0) {
        CountResult r = count_labelings(g, 1, opt);
        return {Big(0), Big(0), r.aut};
    }
    auto comps = connected_components(g);
    if (comps.size() == 1) return eval_tree(build_tree(g), k, opt);

    std::map<std::string, std::vector<int>> classes;
    for (std::size_t i = 0; i < comps.size(); ++i)
        classes[canonical_code(multigraph_from(comps[i].graph))].push_back(static_cast<int>(i));
    CountResult out;
    out.D = 1;
    out.aut = 1;
    for (const auto& [code, members] : classes) {
        const CountResult r = eval_tree(build_tree(comps[members.front()].graph), k, opt);
        const auto m = static_cast<unsigned long>(members.size());
        out.D *= big_binom(r.D, m);
        out.aut *= big_factorial(m) * big_pow(r.aut, m);
    }
    out.L = out.D * out.aut;
    return out;
}

int distinguishing_number(const Graph& g, const CountOptions& opt) {
    require(g.n >= 1, "distinguishing_number: empty graph");
    auto positive = [&](int k) { return count_labelings(g, k, opt).D > 0; };
    if (positive(1)) return 1;
    int lo = 1, hi = 2;
    while (!positive(hi)) {
        lo = hi;
        require(hi <= (1 << 28), "distinguishing_number: runaway search");
        hi *= 2;
    }
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        (positive(mid) ? hi : lo) = mid;
    }
    return hi;
}

std::vector<Rat> distinguishing_polynomial(const Graph& g, const CountOptions& opt) {
    require(g.n >= 1, "distinguishing_polynomial: empty graph");
    const int n = g.n;
    std::vector<Rat> dd(n + 1);
    for (int k = 0; k <= n; ++k) dd[k] = Rat(count_labelings(g, k, opt).D);
    // Newton divided differences over the unit-spaced points 0..n
    for (int j = 1; j <= n; ++j)
        for (int i = n; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / Rat(j);
    std::vector<Rat> coeff(n + 1, Rat(0));
    std::vector<Rat> basis{Rat(1)};  // product (x - 0)..(x - (j-1))
    for (int j = 0; j <= n; ++j) {
        for (std::size_t d = 0; d < basis.size(); ++d) coeff[d] += dd[j] * basis[d];
        if (j < n) {
            basis.push_back(Rat(0));
            for (std::size_t d = basis.size() - 1; d >= 1; --d)
                basis[d] = basis[d - 1] - Rat(j) * basis[d];
            basis[0] = -Rat(j) * basis[0];
        }
    }
    for (auto& c : coeff) c.canonicalize();
    return coeff;
}

}  // namespace dist
