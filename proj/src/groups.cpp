#include "dist/groups.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <numeric>
#include <queue>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "dist/errors.hpp"

namespace dist {

namespace {

struct PermHash {
    std::size_t operator()(const Permutation& p) const {
        std::size_t h = 1469598103934665603ull;
        for (int v : p) {
            h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

using PermSet = std::unordered_set<Permutation, PermHash>;

std::vector<int> distinct_prime_factors(int t) {
    std::vector<int> out;
    for (int p = 2; static_cast<long long>(p) * p <= t; ++p) {
        if (t % p == 0) {
            out.push_back(p);
            while (t % p == 0) t /= p;
        }
    }
    if (t > 1) out.push_back(t);
    return out;
}

Permutation perm_power(const Permutation& p, int e) {
    Permutation r(p.size());
    std::iota(r.begin(), r.end(), 0);
    for (int i = 0; i < e; ++i) r = perm_compose(p, r);
    return r;
}

bool commute(const Permutation& a, const Permutation& b) {
    const int n = static_cast<int>(a.size());
    for (int i = 0; i < n; ++i)
        if (a[b[i]] != b[a[i]]) return false;
    return true;
}

// pstar: one generator per minimal subgroup of the abelian part
// <pi> u <pi>z (z may be empty), i.e. pi^(t/p) per prime plus every
// involution of that part.
void fill_pstar(GroupClass& cls, const Permutation& pi, int t, const Permutation* z) {
    PermSet seen;
    auto add = [&](const Permutation& p) {
        if (seen.insert(p).second) cls.pstar.push_back(p);
    };
    for (int p : distinct_prime_factors(t)) add(perm_power(pi, t / p));
    if (t % 2 == 0) add(perm_power(pi, t / 2));
    if (z != nullptr) {
        add(*z);
        if (t % 2 == 0) add(perm_compose(perm_power(pi, t / 2), *z));
    }
}

std::vector<Permutation> powers_of(const Permutation& pi, int t) {
    std::vector<Permutation> out;
    out.reserve(t);
    Permutation cur(pi.size());
    std::iota(cur.begin(), cur.end(), 0);
    for (int i = 0; i < t; ++i) {
        out.push_back(cur);
        cur = perm_compose(pi, cur);
    }
    return out;
}

}  // namespace

bool perm_is_identity(const Permutation& p) {
    for (int i = 0; i < static_cast<int>(p.size()); ++i)
        if (p[i] != i) return false;
    return true;
}

Permutation perm_compose(const Permutation& a, const Permutation& b) {
    require(a.size() == b.size(), "compose: size mismatch");
    Permutation c(a.size());
    for (std::size_t i = 0; i < b.size(); ++i) c[i] = a[b[i]];
    return c;
}

Permutation perm_inverse(const Permutation& p) {
    Permutation q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[p[i]] = static_cast<int>(i);
    return q;
}

int perm_order(const Permutation& p) {
    // lcm of cycle lengths
    const int n = static_cast<int>(p.size());
    std::vector<char> seen(n, 0);
    long long ord = 1;
    for (int i = 0; i < n; ++i) {
        if (seen[i]) continue;
        long long len = 0;
        for (int j = i; !seen[j]; j = p[j]) {
            seen[j] = 1;
            ++len;
        }
        ord = ord / std::gcd(ord, len) * len;
        require(ord <= (1ll << 62), "perm_order: overflow");
    }
    return static_cast<int>(ord);
}

std::vector<std::vector<int>> orbits_of(const std::vector<Permutation>& gens, int n) {
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& g : gens) {
        require(static_cast<int>(g.size()) == n, "orbits_of: size mismatch");
        for (int i = 0; i < n; ++i) {
            int a = find(i), b = find(g[i]);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::vector<std::vector<int>> by_root(n);
    for (int i = 0; i < n; ++i) by_root[find(i)].push_back(i);
    std::vector<std::vector<int>> out;
    for (auto& o : by_root)
        if (!o.empty()) out.push_back(std::move(o));
    return out;
}

const char* group_kind_name(GroupKind k) {
    switch (k) {
        case GroupKind::TRIVIAL: return "trivial";
        case GroupKind::CYCLIC: return "cyclic";
        case GroupKind::CYCLIC_X_Z2: return "cyclic_x_z2";
        case GroupKind::DIHEDRAL: return "dihedral";
        case GroupKind::DIHEDRAL_X_Z2: return "dihedral_x_z2";
        case GroupKind::LATTICE: return "lattice";
    }
    return "?";
}

GroupClass classify_group(const std::vector<Permutation>& group) {
    GroupClass out;
    const int g = static_cast<int>(group.size());
    if (g <= 1) return out;

    std::vector<int> order(g);
    for (int i = 0; i < g; ++i) order[i] = perm_order(group[i]);
    std::vector<int> involutions;
    for (int i = 0; i < g; ++i)
        if (order[i] == 2) involutions.push_back(i);
    const int ninv = static_cast<int>(involutions.size());

    auto candidates_of_order = [&](int t) {
        std::vector<int> out2;
        for (int i = 0; i < g; ++i)
            if (order[i] == t) out2.push_back(i);
        return out2;
    };

    for (int i = 0; i < g; ++i) {
        if (order[i] == g) {
            out.kind = GroupKind::CYCLIC;
            out.t = g;
            fill_pstar(out, group[i], g, nullptr);
            return out;
        }
    }

    // index-2 abelian part <pi> x <z>, no elements outside it
    if (ninv == 3 && g % 2 == 0) {
        const int t = g / 2;
        for (int pi_idx : candidates_of_order(t)) {
            const auto& pi = group[pi_idx];
            PermSet cyc;
            for (auto& p : powers_of(pi, t)) cyc.insert(std::move(p));
            for (int z_idx : involutions) {
                const auto& z = group[z_idx];
                if (cyc.count(z) || !commute(pi, z)) continue;
                out.kind = GroupKind::CYCLIC_X_Z2;
                out.t = t;
                fill_pstar(out, pi, t, &z);
                return out;
            }
        }
    }

    // cyclic index-2 part, everything outside it an involution
    if (g % 2 == 0 && ninv >= g / 2 && ninv <= g / 2 + 1) {
        const int t = g / 2;
        for (int pi_idx : candidates_of_order(t)) {
            const auto& pi = group[pi_idx];
            PermSet cyc;
            for (auto& p : powers_of(pi, t)) cyc.insert(std::move(p));
            std::vector<Permutation> outside;
            for (int z_idx : involutions)
                if (!cyc.count(group[z_idx])) outside.push_back(group[z_idx]);
            if (static_cast<int>(outside.size()) != t) continue;
            out.kind = GroupKind::DIHEDRAL;
            out.t = t;
            fill_pstar(out, pi, t, nullptr);
            out.reflections = std::move(outside);
            return out;
        }
    }

    // index-2 abelian part <pi> x <z> with the other half all involutions
    if (g % 4 == 0) {
        const int t = g / 4;
        for (int pi_idx : candidates_of_order(t)) {
            const auto& pi = group[pi_idx];
            PermSet cyc;
            for (auto& p : powers_of(pi, t)) cyc.insert(std::move(p));
            for (int z_idx : involutions) {
                const auto& z = group[z_idx];
                if (cyc.count(z) || !commute(pi, z)) continue;
                PermSet part = cyc;
                for (const auto& p : cyc) part.insert(perm_compose(p, z));
                require(static_cast<int>(part.size()) == 2 * t, "classify: part size");
                std::vector<Permutation> outside;
                bool ok = true;
                for (int i = 0; i < g && ok; ++i) {
                    if (part.count(group[i])) continue;
                    if (order[i] != 2)
                        ok = false;
                    else
                        outside.push_back(group[i]);
                }
                if (!ok || static_cast<int>(outside.size()) != 2 * t) continue;
                out.kind = GroupKind::DIHEDRAL_X_Z2;
                out.t = t;
                fill_pstar(out, pi, t, &z);
                out.reflections = std::move(outside);
                return out;
            }
        }
    }

    out.kind = GroupKind::LATTICE;
    out.t = 0;
    return out;
}

namespace {

// signed terms indexed 0..count-1, evaluated sequentially or on a small
// thread pool; terms must be independent
Big signed_term_sum(std::uint64_t count, const std::function<Big(std::uint64_t)>& term,
                    int jobs) {
    if (jobs <= 1 || count < 2) {
        Big total = 0;
        for (std::uint64_t i = 0; i < count; ++i) total += term(i);
        return total;
    }
    const int nthreads = static_cast<int>(std::min<std::uint64_t>(jobs, count));
    std::vector<Big> partial(nthreads, Big(0));
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(nthreads);
    for (int w = 0; w < nthreads; ++w) {
        threads.emplace_back([&, w] {
            for (;;) {
                const std::uint64_t i = next.fetch_add(1);
                if (i >= count) break;
                partial[w] += term(i);
            }
        });
    }
    for (auto& t : threads) t.join();
    Big total = 0;
    for (auto& p : partial) total += p;
    return total;
}

Big destroyed_sum_structured(const GroupClass& cls, const SubgroupKernel& kernel, int jobs) {
    const auto& P = cls.pstar;
    require(P.size() < 24, "structured engine: pstar too large");
    const std::uint64_t per = cls.reflections.size() + 1;
    const std::uint64_t count = (1ull << P.size()) * per;
    auto term = [&](std::uint64_t i) {
        const std::uint64_t mask = i / per;
        const std::uint64_t r = i % per;
        std::vector<Permutation> gens;
        for (std::size_t j = 0; j < P.size(); ++j)
            if (mask >> j & 1) gens.push_back(P[j]);
        bool neg = __builtin_popcountll(mask) & 1;
        if (r > 0) {
            gens.push_back(cls.reflections[r - 1]);
            neg = !neg;
        }
        Big v = kernel(gens);
        return neg ? Big(-v) : v;
    };
    return signed_term_sum(count, term, jobs);
}

}  // namespace

Big destroyed_sum(const std::vector<Permutation>& group, const SubgroupKernel& kernel,
                  std::uint64_t lattice_order_cap, int jobs) {
    GroupClass cls = classify_group(group);
    switch (cls.kind) {
        case GroupKind::TRIVIAL: return kernel({});
        case GroupKind::LATTICE:
            return destroyed_sum_lattice(group, kernel, lattice_order_cap, jobs);
        default: return destroyed_sum_structured(cls, kernel, jobs);
    }
}

Big destroyed_sum_full_pie(const std::vector<Permutation>& group, const SubgroupKernel& kernel) {
    std::vector<Permutation> nontrivial;
    for (const auto& p : group)
        if (!perm_is_identity(p)) nontrivial.push_back(p);
    require(nontrivial.size() <= 15, "full PIE: group larger than 16");
    Big total = 0;
    std::vector<Permutation> gens;
    for (std::uint32_t mask = 0; mask < (1u << nontrivial.size()); ++mask) {
        gens.clear();
        for (std::size_t i = 0; i < nontrivial.size(); ++i)
            if (mask >> i & 1) gens.push_back(nontrivial[i]);
        if (__builtin_popcount(mask) & 1)
            total -= kernel(gens);
        else
            total += kernel(gens);
    }
    return total;
}

namespace {

struct BitsHash {
    std::size_t operator()(const std::vector<std::uint64_t>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (auto w : v) {
            h ^= w;
            h *= 1099511628211ull;
        }
        return h;
    }
};

struct LatticeBuilder {
    int g = 0;
    int words = 0;
    int id_index = -1;
    std::vector<std::uint16_t> table;  // g*g multiplication table
    std::vector<int> inv;

    int mul(int a, int b) const { return table[static_cast<std::size_t>(a) * g + b]; }

    struct Sub {
        std::vector<std::uint64_t> bits;
        std::vector<int> elems;
        std::vector<int> gens;
    };
    std::unordered_map<std::vector<std::uint64_t>, int, BitsHash> known;
    std::vector<Sub> subs;

    bool bit(const std::vector<std::uint64_t>& b, int i) const {
        return b[i >> 6] >> (i & 63) & 1;
    }

    Sub closure(std::vector<int> gens) const {
        Sub s;
        s.bits.assign(words, 0);
        s.gens = std::move(gens);
        s.elems.push_back(id_index);
        s.bits[id_index >> 6] |= 1ull << (id_index & 63);
        for (std::size_t pos = 0; pos < s.elems.size(); ++pos) {
            for (int h : s.gens) {
                const int y = mul(s.elems[pos], h);
                if (!bit(s.bits, y)) {
                    s.bits[y >> 6] |= 1ull << (y & 63);
                    s.elems.push_back(y);
                }
            }
        }
        std::sort(s.elems.begin(), s.elems.end());
        return s;
    }

    Sub conjugate(const Sub& s, int h) const {
        Sub c;
        c.bits.assign(words, 0);
        const int hi = inv[h];
        for (int x : s.elems) {
            const int y = mul(mul(h, x), hi);
            c.elems.push_back(y);
            c.bits[y >> 6] |= 1ull << (y & 63);
        }
        std::sort(c.elems.begin(), c.elems.end());
        for (int x : s.gens) c.gens.push_back(mul(mul(h, x), hi));
        return c;
    }
};

}  // namespace

SubgroupLattice subgroup_lattice(const std::vector<Permutation>& group, std::uint64_t order_cap) {
    const int g = static_cast<int>(group.size());
    require(g >= 1, "subgroup_lattice: empty group");
    if (static_cast<std::uint64_t>(g) > order_cap)
        throw CapExceeded("subgroup lattice needs group order " + std::to_string(g) +
                          " but the cap is " + std::to_string(order_cap));
    require(g <= 65535, "subgroup_lattice: group too large for index table");

    LatticeBuilder lb;
    lb.g = g;
    lb.words = (g + 63) / 64;
    std::unordered_map<Permutation, int, PermHash> index;
    for (int i = 0; i < g; ++i) {
        require(index.emplace(group[i], i).second, "subgroup_lattice: duplicate element");
        if (perm_is_identity(group[i])) lb.id_index = i;
    }
    require(lb.id_index >= 0, "subgroup_lattice: identity missing");
    lb.table.resize(static_cast<std::size_t>(g) * g);
    for (int a = 0; a < g; ++a) {
        for (int b = 0; b < g; ++b) {
            auto it = index.find(perm_compose(group[a], group[b]));
            require(it != index.end(), "subgroup_lattice: group not closed");
            lb.table[static_cast<std::size_t>(a) * g + b] = static_cast<std::uint16_t>(it->second);
        }
    }
    lb.inv.resize(g);
    for (int a = 0; a < g; ++a) {
        auto it = index.find(perm_inverse(group[a]));
        require(it != index.end(), "subgroup_lattice: inverse missing");
        lb.inv[a] = it->second;
    }

    // extension atoms: the cyclic subgroups of prime-power order (every
    // subgroup is generated by its elements of prime-power order)
    std::vector<std::pair<std::vector<std::uint64_t>, int>> atoms;
    {
        std::unordered_set<std::vector<std::uint64_t>, BitsHash> atom_seen;
        for (int e = 0; e < g; ++e) {
            if (e == lb.id_index) continue;
            auto s = lb.closure({e});
            const int o = static_cast<int>(s.elems.size());
            if (distinct_prime_factors(o).size() != 1) continue;
            if (atom_seen.insert(s.bits).second) atoms.emplace_back(s.bits, e);
        }
    }

    // small generating set of the whole group, for spreading conjugates
    std::vector<int> group_gens;
    {
        auto span = lb.closure({});
        for (int e = 0; e < g; ++e) {
            if (lb.bit(span.bits, e)) continue;
            group_gens.push_back(e);
            span = lb.closure(group_gens);
        }
    }

    auto add_orbit = [&](LatticeBuilder::Sub first) -> bool {
        if (lb.known.count(first.bits)) return false;
        std::queue<int> bfs;
        lb.known.emplace(first.bits, static_cast<int>(lb.subs.size()));
        bfs.push(static_cast<int>(lb.subs.size()));
        lb.subs.push_back(std::move(first));
        while (!bfs.empty()) {
            const int cur = bfs.front();
            bfs.pop();
            for (int h : group_gens) {
                auto c = lb.conjugate(lb.subs[cur], h);
                if (lb.known.count(c.bits)) continue;
                lb.known.emplace(c.bits, static_cast<int>(lb.subs.size()));
                bfs.push(static_cast<int>(lb.subs.size()));
                lb.subs.push_back(std::move(c));
            }
        }
        return true;
    };

    // extending only one representative per conjugacy class reaches every
    // subgroup, because the atom set is closed under conjugation
    std::queue<int> work;
    add_orbit(lb.closure({}));
    work.push(0);
    while (!work.empty()) {
        const int rep = work.front();
        work.pop();
        for (const auto& [abits, agen] : atoms) {
            bool inside = true;
            for (int w = 0; w < lb.words && inside; ++w)
                inside = (abits[w] & ~lb.subs[rep].bits[w]) == 0;
            if (inside) continue;
            auto gens = lb.subs[rep].gens;
            gens.push_back(agen);
            const int before = static_cast<int>(lb.subs.size());
            if (add_orbit(lb.closure(std::move(gens)))) work.push(before);
        }
    }

    std::vector<int> order(lb.subs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (lb.subs[a].elems.size() != lb.subs[b].elems.size())
            return lb.subs[a].elems.size() < lb.subs[b].elems.size();
        return lb.subs[a].elems < lb.subs[b].elems;
    });

    SubgroupLattice out;
    out.subgroups.reserve(lb.subs.size());
    for (int i : order) out.subgroups.push_back(lb.subs[i].elems);
    require(out.subgroups.front().size() == 1, "subgroup_lattice: trivial subgroup misplaced");
    require(out.subgroups.back().size() == static_cast<std::size_t>(g),
            "subgroup_lattice: full group missing");

    const int ns = static_cast<int>(out.subgroups.size());
    std::vector<std::vector<std::uint64_t>> bits;
    bits.reserve(ns);
    for (int i : order) bits.push_back(lb.subs[i].bits);
    out.mu.assign(ns, 0);
    out.mu[0] = 1;
    for (int i = 1; i < ns; ++i) {
        long long acc = 0;
        for (int j = 0; j < i; ++j) {
            if (out.subgroups[j].size() >= out.subgroups[i].size()) continue;
            if (out.subgroups[i].size() % out.subgroups[j].size() != 0) continue;
            bool subset = true;
            for (int w = 0; w < lb.words && subset; ++w)
                subset = (bits[j][w] & ~bits[i][w]) == 0;
            if (subset) acc += out.mu[j];
        }
        out.mu[i] = -acc;
    }
    return out;
}

Big destroyed_sum_lattice(const std::vector<Permutation>& group, const SubgroupKernel& kernel,
                          std::uint64_t order_cap, int jobs) {
    SubgroupLattice lat = subgroup_lattice(group, order_cap);
    auto term = [&](std::uint64_t i) -> Big {
        if (lat.mu[i] == 0) return 0;
        std::vector<Permutation> elems;
        elems.reserve(lat.subgroups[i].size());
        for (int e : lat.subgroups[i]) elems.push_back(group[e]);
        return Big(static_cast<long>(lat.mu[i])) * kernel(elems);
    };
    return signed_term_sum(lat.subgroups.size(), term, jobs);
}

}  // namespace dist
