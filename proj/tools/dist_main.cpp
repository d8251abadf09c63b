#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dist/counting.hpp"
#include "dist/decomp_tree.hpp"
#include "dist/enumerate.hpp"
#include "dist/errors.hpp"
#include "dist/graph.hpp"
#include "dist/isomorphism.hpp"
#include "dist/oracle.hpp"
#include "dist/triconnect.hpp"
#include "json.hpp"

using json = nlohmann::ordered_json;
using namespace dist;

namespace {

int log_level() {
    static int level = [] {
        const char* v = std::getenv("DIST_LOG");
        if (!v) return 0;
        const std::string s(v);
        if (s == "debug") return 2;
        if (s == "info") return 1;
        return 0;
    }();
    return level;
}

void log_info(const std::string& m) {
    if (log_level() >= 1) std::cerr << "[dist] " << m << "\n";
}

void log_debug(const std::string& m) {
    if (log_level() >= 2) std::cerr << "[dist] " << m << "\n";
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start)
            .count();
    }
};

struct Common {
    std::string format = "edgelist";
    bool plain = false;
    std::uint64_t cap_aut = kDefaultAutCap;
    std::uint64_t cap_lattice = 1000;
    int jobs = 1;

    CountOptions opts() const {
        CountOptions o;
        o.aut_cap = cap_aut;
        o.lattice_cap = cap_lattice;
        o.jobs = jobs;
        return o;
    }
};

Graph read_graph(const std::string& path, const std::string& format) {
    std::string text;
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        text = buf.str();
    } else {
        std::ifstream in(path);
        if (!in) throw FormatError("cannot open '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    if (format == "graph6") {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.rfind(">>graph6<<", 0) == 0) line.erase(0, 10);
            if (!line.empty()) return parse_graph6(line);
        }
        throw FormatError("no graph6 line in '" + path + "'");
    }
    Graph g = parse_edgelist(text);
    if (g.n == 0) throw FormatError("no edges in '" + path + "'");
    return g;
}

json input_json(const std::string& path, const Common& c, const Graph& g) {
    json j;
    j["path"] = path;
    j["format"] = c.format;
    j["n"] = g.n;
    j["m"] = static_cast<int>(g.edges.size());
    return j;
}

void emit(const json& j, const std::vector<std::string>& plain_lines, const Common& c) {
    if (c.plain) {
        for (const auto& line : plain_lines) std::cout << line << "\n";
    } else {
        std::cout << j.dump(2) << "\n";
    }
}

std::string vertex_name(const Graph& g, int v) {
    if (static_cast<int>(g.names.size()) == g.n) return g.names[v];
    return std::to_string(v);
}

std::string cycle_notation(const Graph& g, const Permutation& p) {
    std::string s;
    std::vector<char> seen(p.size(), 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (seen[i] || p[i] == static_cast<int>(i)) continue;
        s += '(';
        int j = static_cast<int>(i);
        bool first = true;
        while (!seen[j]) {
            if (!first) s += ' ';
            s += vertex_name(g, j);
            seen[j] = 1;
            first = false;
            j = p[j];
        }
        s += ')';
    }
    return s.empty() ? "()" : s;
}

int cmd_compute(const std::string& path, int k, const Common& c) {
    Timer timer;
    const Graph g = read_graph(path, c.format);
    log_info("parsed n=" + std::to_string(g.n) + " m=" + std::to_string(g.edges.size()));
    const CountResult r = count_labelings(g, k, c.opts());
    json j;
    j["command"] = "compute";
    j["input"] = input_json(path, c, g);
    j["k"] = k;
    j["L"] = big_str(r.L);
    j["D"] = big_str(r.D);
    j["aut"] = big_str(r.aut);
    j["timing_ms"] = timer.ms();
    emit(j,
         {"L(G," + std::to_string(k) + ") = " + big_str(r.L),
          "D(G," + std::to_string(k) + ") = " + big_str(r.D), "|Aut(G)| = " + big_str(r.aut)},
         c);
    return 0;
}

int cmd_number(const std::string& path, const Common& c) {
    Timer timer;
    const Graph g = read_graph(path, c.format);
    const int d = distinguishing_number(g, c.opts());
    json j;
    j["command"] = "number";
    j["input"] = input_json(path, c, g);
    j["D_number"] = d;
    j["timing_ms"] = timer.ms();
    emit(j, {"D(G) = " + std::to_string(d)}, c);
    return 0;
}

int cmd_poly(const std::string& path, const Common& c) {
    Timer timer;
    const Graph g = read_graph(path, c.format);
    const std::vector<Rat> coeff = distinguishing_polynomial(g, c.opts());
    json j;
    j["command"] = "poly";
    j["input"] = input_json(path, c, g);
    std::vector<std::string> parts;
    for (const Rat& q : coeff) parts.push_back(q.get_str());
    j["coefficients"] = parts;
    j["timing_ms"] = timer.ms();
    std::string line = "D(G,k) =";
    for (int d = g.n; d >= 0; --d)
        if (coeff[d] != 0) line += " + (" + coeff[d].get_str() + ")k^" + std::to_string(d);
    emit(j, {line}, c);
    return 0;
}

int cmd_tree(const std::string& path, const Common& c) {
    Timer timer;
    const Graph g = read_graph(path, c.format);
    const DecompTree t = build_tree(g);
    json j;
    j["command"] = "tree";
    j["input"] = input_json(path, c, g);
    j["tree"] = json::parse(tree_to_json(t));
    j["timing_ms"] = timer.ms();
    std::vector<std::string> lines;
    lines.push_back("nodes: " + std::to_string(t.nodes.size()));
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        const TreeNode& nd = t.nodes[i];
        std::string line = std::to_string(i) + ": ";
        switch (nd.type) {
            case NodeType::C: line += "cut vertex " + vertex_name(g, nd.vertex); break;
            case NodeType::S:
                line += "pair {" + vertex_name(g, nd.x) + "," + vertex_name(g, nd.y) + "}";
                break;
            case NodeType::T:
                line += std::string(kind_name(nd.kind)) + " on " +
                        std::to_string(nd.comp.verts.size()) + " vertices";
                break;
        }
        if (static_cast<int>(i) == t.root) line += " (root)";
        lines.push_back(line);
    }
    emit(j, lines, c);
    return 0;
}

int cmd_aut(const std::string& path, const Common& c) {
    Timer timer;
    const Graph g = read_graph(path, c.format);
    json j;
    j["command"] = "aut";
    j["input"] = input_json(path, c, g);
    std::vector<std::string> lines;
    if (g.n <= 10) {
        const auto perms = oracle_automorphisms(g);
        j["mode"] = "full";
        j["order"] = std::to_string(perms.size());
        std::vector<std::string> cyc;
        for (const auto& p : perms) cyc.push_back(cycle_notation(g, p));
        j["automorphisms"] = cyc;
        lines.push_back("|Aut(G)| = " + std::to_string(perms.size()));
        for (const auto& s : cyc) lines.push_back(s);
    } else {
        const DecompTree t = build_tree(g);
        j["mode"] = "per-component";
        std::vector<json> comps;
        for (std::size_t i = 0; i < t.nodes.size(); ++i) {
            const TreeNode& nd = t.nodes[i];
            if (nd.type != NodeType::T) continue;
            const auto group =
                automorphisms(colored_from(nd.comp, boundary_pins(t, static_cast<int>(i))),
                              c.cap_aut);
            json cj;
            cj["node"] = static_cast<int>(i);
            cj["kind"] = kind_name(nd.kind);
            cj["vertices"] = static_cast<int>(nd.comp.verts.size());
            cj["order"] = std::to_string(group.size());
            comps.push_back(cj);
            lines.push_back("node " + std::to_string(i) + " (" + kind_name(nd.kind) +
                            "): order " + std::to_string(group.size()));
        }
        j["components"] = comps;
    }
    j["timing_ms"] = timer.ms();
    emit(j, lines, c);
    return 0;
}

// branch-set search for an h-minor; blocks must be nonempty, connected,
// and joined by an edge for every edge of h. Symmetry classes let us
// force each class's blocks to fill in order.
bool minor_assign(const Graph& g, const std::vector<std::vector<int>>& gadj, const Graph& h,
                  const std::vector<int>& klass, std::vector<int>& assign, int v) {
    const int hn = h.n;
    std::vector<int> filled(hn, 0);
    int empty = 0;
    for (int u = 0; u < v; ++u)
        if (assign[u] >= 0) ++filled[assign[u]];
    for (int b = 0; b < hn; ++b)
        if (!filled[b]) ++empty;
    if (g.n - v < empty) return false;
    if (v == g.n) {
        for (int b = 0; b < hn; ++b) {
            // connectivity of block b
            int start = -1, size = 0;
            for (int u = 0; u < g.n; ++u)
                if (assign[u] == b) {
                    start = u;
                    ++size;
                }
            std::vector<char> seen(g.n, 0);
            std::vector<int> stack{start};
            seen[start] = 1;
            int cnt = 1;
            while (!stack.empty()) {
                const int x = stack.back();
                stack.pop_back();
                for (int y : gadj[x])
                    if (assign[y] == b && !seen[y]) {
                        seen[y] = 1;
                        ++cnt;
                        stack.push_back(y);
                    }
            }
            if (cnt != size) return false;
        }
        for (const auto& e : h.edges) {
            bool found = false;
            for (const auto& ge : g.edges) {
                const int a = assign[ge.first], b = assign[ge.second];
                if ((a == e.first && b == e.second) || (a == e.second && b == e.first)) {
                    found = true;
                    break;
                }
            }
            if (!found) return false;
        }
        return true;
    }
    for (int b = -1; b < hn; ++b) {
        if (b >= 0 && !filled[b]) {
            // only the first empty block of its symmetry class may open
            bool first_empty = true;
            for (int b2 = 0; b2 < b; ++b2)
                if (klass[b2] == klass[b] && !filled[b2]) first_empty = false;
            if (!first_empty) continue;
        }
        assign[v] = b;
        if (minor_assign(g, gadj, h, klass, assign, v + 1)) return true;
    }
    assign[v] = -1;
    return false;
}

bool has_minor(const Graph& g, const Graph& h, const std::vector<int>& klass) {
    if (g.n < h.n) return false;
    const auto gadj = adjacency(g);
    std::vector<int> assign(g.n, -1);
    return minor_assign(g, gadj, h, klass, assign, 0);
}

bool is_planar(const Graph& g) {
    const int n = g.n;
    const int m = static_cast<int>(g.edges.size());
    if (n >= 3 && m > 3 * n - 6) return false;
    if (m < 9) return true;  // fewer edges than either forbidden minor
    const Graph k5 = make_complete(5);
    Graph k33(6);
    for (int a = 0; a < 3; ++a)
        for (int b = 3; b < 6; ++b) k33.add_edge(a, b);
    return !has_minor(g, k5, {0, 0, 0, 0, 0}) && !has_minor(g, k33, {0, 0, 0, 1, 1, 1});
}

bool family_keeps(const std::string& family, const Graph& g) {
    if (family == "all") return true;
    const int n = g.n;
    const int m = static_cast<int>(g.edges.size());
    if (family == "trees") return m == n - 1;
    if (family == "cycles") {
        if (n < 3 || m != n) return false;
        const auto adj = adjacency(g);
        for (const auto& nb : adj)
            if (nb.size() != 2) return false;
        return true;
    }
    return is_planar(g);
}

int cmd_verify(int max_n, int max_k, const std::string& family, int samples,
               std::uint64_t seed, const Common& c) {
    Timer timer;
    require(max_n >= 1 && max_n <= 8, "verify: max_n must be in 1..8");
    require(max_k >= 1 && max_k <= 6, "verify: max_k must be in 1..6");
    double worst = 1;
    for (int i = 0; i < max_n; ++i) worst *= max_k;
    require(worst <= 1e7, "verify: k^n exceeds the oracle labeling budget");

    std::mt19937_64 rng(seed);
    int graphs = 0, comparisons = 0;
    std::vector<json> mismatches;
    auto check_one = [&](const Graph& g) {
        ++graphs;
        for (int k = 1; k <= max_k; ++k) {
            const OracleResult want = oracle_counts(g, k);
            const CountResult got = count_labelings(g, k, c.opts());
            ++comparisons;
            auto note = [&](const char* field, const Big& w, const Big& have) {
                if (w == have) return;
                json mj;
                mj["graph6"] = to_graph6(g);
                mj["k"] = k;
                mj["field"] = field;
                mj["expected"] = big_str(w);
                mj["got"] = big_str(have);
                if (mismatches.size() < 10) mismatches.push_back(mj);
            };
            note("L", want.L, got.L);
            note("D", want.D, got.D);
            note("aut", want.aut_order, got.aut);
        }
    };

    for (int n = 1; n <= std::min(max_n, 6); ++n)
        for (const Graph& g : all_connected_graphs(n))
            if (family_keeps(family, g)) check_one(g);
    for (int n = 7; n <= max_n; ++n) {
        int kept = 0, tries = 0;
        while (kept < samples && tries < samples * 200) {
            ++tries;
            const Graph g = sample_connected_graph(n, rng);
            if (!family_keeps(family, g)) continue;
            ++kept;
            check_one(g);
        }
        log_info("n=" + std::to_string(n) + ": sampled " + std::to_string(kept));
    }

    json j;
    j["command"] = "verify";
    j["family"] = family;
    j["max_n"] = max_n;
    j["max_k"] = max_k;
    j["graphs_checked"] = graphs;
    j["comparisons"] = comparisons;
    j["mismatches"] = mismatches;
    j["timing_ms"] = timer.ms();
    emit(j,
         {"checked " + std::to_string(graphs) + " graphs, " + std::to_string(comparisons) +
              " comparisons, " + std::to_string(mismatches.size()) + " mismatches"},
         c);
    return mismatches.empty() ? 0 : 4;
}

Graph bench_graph(const std::string& family, int n) {
    if (family == "wheels") return make_wheel(std::max(4, n));
    if (family == "pendant-cycles") {
        // cycle of length n/2 with a pendant vertex on every cycle vertex
        const int m = std::max(3, n / 2);
        Graph g(2 * m);
        for (int i = 0; i < m; ++i) {
            g.add_edge(i, (i + 1) % m);
            g.add_edge(i, m + i);
        }
        return g;
    }
    if (family == "detour-cycles") return make_cycle_with_detours(std::max(3, n / 3));
    // chains: four-cycle blocks in series sharing cut vertices
    const int blocks = std::max(1, (n - 1) / 3);
    Graph g(3 * blocks + 1);
    for (int i = 0; i < blocks; ++i) {
        const int left = 3 * i, right = 3 * i + 3;
        g.add_edge(left, 3 * i + 1);
        g.add_edge(3 * i + 1, right);
        g.add_edge(left, 3 * i + 2);
        g.add_edge(3 * i + 2, right);
    }
    return g;
}

int cmd_bench(const std::string& family, int n, int k, const Common& c) {
    Timer total;
    const Graph g = bench_graph(family, n);
    log_info("bench " + family + ": n=" + std::to_string(g.n));
    Timer timer;
    const CountResult r = count_labelings(g, k, c.opts());
    const double ms = timer.ms();
    json j;
    j["command"] = "bench";
    j["family"] = family;
    j["n"] = g.n;
    j["m"] = static_cast<int>(g.edges.size());
    j["k"] = k;
    j["D_digits"] = static_cast<int>(big_str(r.D).size());
    j["aut"] = big_str(r.aut);
    j["count_ms"] = ms;
    j["timing_ms"] = total.ms();
    emit(j,
         {family + " n=" + std::to_string(g.n) + " k=" + std::to_string(k) + ": " +
              std::to_string(ms) + " ms, D has " + std::to_string(big_str(r.D).size()) +
              " digits"},
         c);
    return 0;
}

json error_json(const std::string& type, const std::string& message) {
    json j;
    j["error"] = {{"type", type}, {"message", message}};
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"distinguishing labeling counter"};
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    app.add_option("--format", common.format, "input format")
        ->check(CLI::IsMember({"edgelist", "graph6"}))
        ->capture_default_str();
    app.add_flag("--plain", common.plain, "human readable output instead of JSON");
    app.add_option("--cap-aut", common.cap_aut, "abort if an automorphism group exceeds this")
        ->capture_default_str();
    app.add_option("--cap-lattice", common.cap_lattice,
                   "abort if a subgroup lattice base group exceeds this")
        ->capture_default_str();
    app.add_option("--jobs", common.jobs, "worker threads for the counting engines")
        ->check(CLI::Range(1, 256))
        ->capture_default_str();

    std::string file;
    int k = 2;
    auto* compute = app.add_subcommand("compute", "L(G,k), D(G,k) and |Aut(G)|");
    compute->add_option("--k", k, "number of labels")->required();
    compute->add_option("file", file, "graph file, - for stdin")->required();

    auto* number = app.add_subcommand("number", "distinguishing number D(G)");
    number->add_option("file", file)->required();

    auto* poly = app.add_subcommand("poly", "distinguishing polynomial coefficients");
    poly->add_option("file", file)->required();

    auto* tree = app.add_subcommand("tree", "decomposition tree as JSON");
    tree->add_option("file", file)->required();

    auto* aut = app.add_subcommand("aut", "automorphisms, full or per component");
    aut->add_option("file", file)->required();

    int max_n = 6, max_k = 3, samples = 200;
    std::uint64_t seed = 1;
    std::string family = "all";
    auto* verify = app.add_subcommand("verify", "pipeline vs brute force sweep");
    verify->add_option("--max-n", max_n, "largest vertex count")->capture_default_str();
    verify->add_option("--max-k", max_k, "largest label count")->capture_default_str();
    verify->add_option("--family", family, "graph family")
        ->check(CLI::IsMember({"all", "planar", "trees", "cycles"}))
        ->capture_default_str();
    verify->add_option("--samples", samples, "graphs sampled per n beyond 6")
        ->capture_default_str();
    verify->add_option("--seed", seed, "sampling seed")->capture_default_str();

    std::string bfamily = "chains";
    int bn = 100, bk = 10;
    auto* bench = app.add_subcommand("bench", "time one generated instance");
    bench->add_option("--family", bfamily, "generator family")
        ->check(CLI::IsMember({"chains", "wheels", "pendant-cycles", "detour-cycles"}))
        ->capture_default_str();
    bench->add_option("--n", bn, "target vertex count")->capture_default_str();
    bench->add_option("--k", bk, "number of labels")->capture_default_str();
    bench->add_option("--seed", seed, "unused, kept for symmetry")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(compute)) return cmd_compute(file, k, common);
        if (app.got_subcommand(number)) return cmd_number(file, common);
        if (app.got_subcommand(poly)) return cmd_poly(file, common);
        if (app.got_subcommand(tree)) return cmd_tree(file, common);
        if (app.got_subcommand(aut)) return cmd_aut(file, common);
        if (app.got_subcommand(verify))
            return cmd_verify(max_n, max_k, family, samples, seed, common);
        if (app.got_subcommand(bench)) return cmd_bench(bfamily, bn, bk, common);
    } catch (const FormatError& e) {
        std::cout << error_json("parse", e.what()).dump(2) << "\n";
        return 2;
    } catch (const CapExceeded& e) {
        std::cout << error_json("cap", e.what()).dump(2) << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cout << error_json("invariant", e.what()).dump(2) << "\n";
        return 3;
    }
    return 1;
}
