#include "acsp/constructions.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>

namespace acsp {

// ---------------------------------------------------------------- graphs

OrientedGraph::OrientedGraph(std::vector<std::string> vertices, std::vector<std::pair<int, int>> arcs)
    : vertices_(std::move(vertices)), arcs_(std::move(arcs)), incident_(vertices_.size()) {
    const int n = num_vertices();
    std::set<std::string> names(vertices_.begin(), vertices_.end());
    if (names.size() != vertices_.size()) throw DomainError("duplicate vertex name");
    std::set<std::pair<int, int>> pairs;
    for (std::size_t e = 0; e < arcs_.size(); ++e) {
        auto [u, v] = arcs_[e];
        if (u < 0 || v < 0 || u >= n || v >= n) throw DomainError("arc endpoint out of range");
        if (u == v) throw DomainError("self-loop at " + vertices_[static_cast<std::size_t>(u)]);
        if (!pairs.insert(std::minmax(u, v)).second)
            throw DomainError("second arc between " + vertices_[static_cast<std::size_t>(u)] + " and " +
                              vertices_[static_cast<std::size_t>(v)]);
        incident_[static_cast<std::size_t>(u)].push_back(static_cast<int>(e));
        incident_[static_cast<std::size_t>(v)].push_back(static_cast<int>(e));
    }
}

OrientedGraph OrientedGraph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
    std::vector<std::pair<int, int>> arcs;
    for (auto [u, v] : edges) arcs.push_back(std::minmax(u, v));
    return OrientedGraph(std::move(names), std::move(arcs));
}

OrientedGraph OrientedGraph::complete(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return from_edges(n, edges);
}

OrientedGraph OrientedGraph::petersen() {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < 5; ++i) {
        edges.emplace_back(i, (i + 1) % 5);
        edges.emplace_back(i, i + 5);
        edges.emplace_back(5 + i, 5 + (i + 2) % 5);
    }
    return from_edges(10, edges);
}

OrientedGraph OrientedGraph::heawood() {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < 14; ++i) {
        edges.emplace_back(i, (i + 1) % 14);
        if (i % 2 == 0) edges.emplace_back(i, (i + 5) % 14);
    }
    return from_edges(14, edges);
}

OrientedGraph OrientedGraph::path(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return from_edges(n, edges);
}

int OrientedGraph::other_end(int edge, int v) const {
    auto [a, b] = arcs_[static_cast<std::size_t>(edge)];
    if (a == v) return b;
    if (b == v) return a;
    throw ContractError("vertex is not an endpoint of the edge");
}

std::optional<int> OrientedGraph::vertex(const std::string& name) const {
    auto it = std::find(vertices_.begin(), vertices_.end(), name);
    if (it == vertices_.end()) return std::nullopt;
    return static_cast<int>(it - vertices_.begin());
}

namespace {

// Biconnected components as edge lists, over the edges with alive[e] set.
std::vector<std::vector<int>> edge_blocks(const OrientedGraph& g, const std::vector<char>& alive) {
    const int n = g.num_vertices();
    std::vector<int> disc(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
    std::vector<int> stack;
    std::vector<std::vector<int>> blocks;
    int clock = 0;
    std::function<void(int, int)> dfs = [&](int v, int parent_edge) {
        disc[static_cast<std::size_t>(v)] = low[static_cast<std::size_t>(v)] = clock++;
        for (int e : g.incident(v)) {
            if (!alive[static_cast<std::size_t>(e)] || e == parent_edge) continue;
            const int w = g.other_end(e, v);
            if (disc[static_cast<std::size_t>(w)] < 0) {
                stack.push_back(e);
                dfs(w, e);
                low[static_cast<std::size_t>(v)] = std::min(low[static_cast<std::size_t>(v)], low[static_cast<std::size_t>(w)]);
                if (low[static_cast<std::size_t>(w)] >= disc[static_cast<std::size_t>(v)]) {
                    std::vector<int> block;
                    while (true) {
                        const int top = stack.back();
                        stack.pop_back();
                        block.push_back(top);
                        if (top == e) break;
                    }
                    std::sort(block.begin(), block.end());
                    blocks.push_back(std::move(block));
                }
            } else if (disc[static_cast<std::size_t>(w)] < disc[static_cast<std::size_t>(v)]) {
                stack.push_back(e);
                low[static_cast<std::size_t>(v)] = std::min(low[static_cast<std::size_t>(v)], disc[static_cast<std::size_t>(w)]);
            }
        }
    };
    for (int v = 0; v < n; ++v)
        if (disc[static_cast<std::size_t>(v)] < 0) dfs(v, -1);
    return blocks;
}

int block_vertices(const OrientedGraph& g, const std::vector<int>& block) {
    std::set<int> vs;
    for (int e : block) {
        vs.insert(g.arcs()[static_cast<std::size_t>(e)].first);
        vs.insert(g.arcs()[static_cast<std::size_t>(e)].second);
    }
    return static_cast<int>(vs.size());
}

}  // namespace

bool check_2_connected(const OrientedGraph& g) {
    if (g.num_vertices() < 3) return false;
    auto blocks = edge_blocks(g, std::vector<char>(static_cast<std::size_t>(g.num_edges()), 1));
    return blocks.size() == 1 && block_vertices(g, blocks[0]) == g.num_vertices();
}

bool check_3_regular(const OrientedGraph& g) {
    for (int v = 0; v < g.num_vertices(); ++v)
        if (g.degree(v) != 3) return false;
    return true;
}

std::optional<ExpansionWitness> expansion_witness(const OrientedGraph& g, const std::vector<int>& edges) {
    std::vector<char> alive(static_cast<std::size_t>(g.num_edges()), 1);
    for (int e : edges) {
        if (e < 0 || e >= g.num_edges()) throw ContractError("edge index out of range");
        alive[static_cast<std::size_t>(e)] = 0;
    }
    const bool any_left = std::find(alive.begin(), alive.end(), 1) != alive.end();
    std::vector<int> keep;
    if (any_left) {
        int best = 0;
        for (auto& block : edge_blocks(g, alive)) {
            const int size = block_vertices(g, block);
            if (size >= 3 && size > best) {
                best = size;
                keep = std::move(block);
            }
        }
        if (keep.empty()) return std::nullopt;
    }
    ExpansionWitness w;
    for (int e = 0; e < g.num_edges(); ++e)
        if (!std::binary_search(keep.begin(), keep.end(), e)) w.edges.push_back(e);
    std::set<int> given(edges.begin(), edges.end());
    if (given.empty())
        w.ratio = w.edges.empty() ? 1.0 : std::numeric_limits<double>::infinity();
    else
        w.ratio = static_cast<double>(w.edges.size()) / static_cast<double>(given.size());
    return w;
}

// ---------------------------------------------------------------- Tseitin systems

namespace {

int signed_element(const FiniteGroup& group, int x, bool negate) { return negate ? group.inv(x) : x; }

void check_charge(const OrientedGraph& g, const FiniteGroup& group, const ChargeMap& charge) {
    if (!group.is_abelian()) throw ContractError("Tseitin systems need an Abelian group");
    if (static_cast<int>(charge.size()) != g.num_vertices()) throw ContractError("charge must cover every vertex");
    for (int c : charge)
        if (c < 0 || c >= group.order()) throw ContractError("charge is not a group element");
}

}  // namespace

CosetInstance tseitin_instance(const OrientedGraph& g, const FiniteGroup& group, const ChargeMap& charge,
                               const std::string& prefix) {
    check_charge(g, group, charge);
    std::vector<std::string> vars;
    for (auto [u, v] : g.arcs())
        vars.push_back(prefix + ":" + g.vertices()[static_cast<std::size_t>(u)] + ">" +
                       g.vertices()[static_cast<std::size_t>(v)]);
    std::vector<CosetConstraint> constraints;
    for (int v = 0; v < g.num_vertices(); ++v) {
        const auto& inc = g.incident(v);
        const int r = static_cast<int>(inc.size());
        if (r == 0) {
            if (charge[static_cast<std::size_t>(v)] != group.identity())
                throw DomainError("nonzero charge on isolated vertex " + g.vertices()[static_cast<std::size_t>(v)]);
            continue;
        }
        // incoming edges carry a minus sign
        std::vector<bool> minus;
        for (int e : inc) minus.push_back(g.arcs()[static_cast<std::size_t>(e)].second == v);
        std::vector<Tuple> gens;
        for (int j = 1; j < r; ++j)
            for (int a = 0; a < group.order(); ++a) {
                Tuple t(static_cast<std::size_t>(r), group.identity());
                t[0] = a;
                // s_0 a + s_j b = 0 with b = -s_j s_0 a
                t[static_cast<std::size_t>(j)] = signed_element(group, a, minus[0] == minus[static_cast<std::size_t>(j)]);
                gens.push_back(std::move(t));
            }
        CosetConstraint c;
        for (int e : inc) c.scope.push_back(vars[static_cast<std::size_t>(e)]);
        c.subgroup = subgroup_closure(group, gens, r);
        c.rep.assign(static_cast<std::size_t>(r), group.identity());
        c.rep[0] = signed_element(group, charge[static_cast<std::size_t>(v)], minus[0]);
        constraints.push_back(std::move(c));
    }
    return CosetInstance(group, std::move(vars), std::move(constraints));
}

bool check_cut_constraint(const OrientedGraph& g, const FiniteGroup& group, const ChargeMap& charge,
                          const EdgeAssignment& f, const std::vector<int>& cut) {
    check_charge(g, group, charge);
    std::vector<char> inside(static_cast<std::size_t>(g.num_vertices()), 0);
    for (int v : cut) {
        if (v < 0 || v >= g.num_vertices()) throw ContractError("vertex out of range");
        inside[static_cast<std::size_t>(v)] = 1;
    }
    int lhs = group.identity(), rhs = group.identity();
    for (int v = 0; v < g.num_vertices(); ++v)
        if (inside[static_cast<std::size_t>(v)]) rhs = group.mul(rhs, charge[static_cast<std::size_t>(v)]);
    for (int e = 0; e < g.num_edges(); ++e) {
        auto [u, v] = g.arcs()[static_cast<std::size_t>(e)];
        const bool out = inside[static_cast<std::size_t>(u)] && !inside[static_cast<std::size_t>(v)];
        const bool in = !inside[static_cast<std::size_t>(u)] && inside[static_cast<std::size_t>(v)];
        if (!out && !in) continue;
        auto it = f.find(e);
        if (it == f.end()) throw ContractError("edge " + std::to_string(e) + " on the cut is unassigned");
        lhs = group.mul(lhs, signed_element(group, it->second, in));
    }
    return lhs == rhs;
}

bool robustly_consistent(const OrientedGraph& g, const FiniteGroup& group, const ChargeMap& charge,
                         const EdgeAssignment& f, int level) {
    check_charge(g, group, charge);
    const int n = g.num_vertices();
    if (level > n) {
        std::cerr << "warning: consistency level " << level << " clamped to " << n << "\n";
        level = n;
    }
    for (const auto& [e, x] : f)
        if (e < 0 || e >= g.num_edges() || x < 0 || x >= group.order()) throw ContractError("bad edge assignment");
    std::vector<int> cut;
    std::vector<char> inside(static_cast<std::size_t>(n), 0);
    // boundary edges of the current cut, counted with multiplicity of endpoints inside
    std::function<bool(int)> extend = [&](int from) {
        if (!cut.empty()) {
            bool assigned = true;
            for (int v : cut) {
                for (int e : g.incident(v))
                    if (!inside[static_cast<std::size_t>(g.other_end(e, v))] && !f.count(e)) assigned = false;
            }
            if (assigned && !check_cut_constraint(g, group, charge, f, cut)) return false;
        }
        if (static_cast<int>(cut.size()) == level) return true;
        for (int v = from; v < n; ++v) {
            cut.push_back(v);
            inside[static_cast<std::size_t>(v)] = 1;
            const bool ok = extend(v + 1);
            inside[static_cast<std::size_t>(v)] = 0;
            cut.pop_back();
            if (!ok) return false;
        }
        return true;
    };
    return extend(0);
}

// ---------------------------------------------------------------- OR-constructions

namespace {

void require_disjoint(const RelStructure& a, const RelStructure& b, const std::vector<std::string>& extra_names,
                      const std::string& extra_symbol) {
    std::set<std::string> names;
    for (const auto* s : {&a, &b})
        for (const auto& x : s->universe())
            if (!names.insert(x).second) throw ContractError("universes overlap at " + x);
    for (const auto& x : extra_names)
        if (!names.insert(x).second) throw ContractError("element name " + x + " is reserved");
    std::set<std::string> symbols{extra_symbol};
    for (const auto* s : {&a, &b})
        for (const auto& sym : s->vocabulary().symbols())
            if (!symbols.insert(sym.name).second) throw ContractError("vocabularies overlap at " + sym.name);
}

std::vector<Tuple> shifted(const std::vector<Tuple>& rel, int offset) {
    auto out = rel;
    for (auto& t : out)
        for (int& x : t) x += offset;
    return out;
}

}  // namespace

RelStructure or_instance(const RelStructure& b1, const RelStructure& b2) {
    if (b1.size() == 0 || b2.size() == 0) throw ContractError("both parts of an OR instance must be nonempty");
    require_disjoint(b1, b2, {}, "S");
    std::vector<Symbol> symbols;
    std::vector<std::vector<Tuple>> rels;
    std::vector<std::string> universe = b1.universe();
    universe.insert(universe.end(), b2.universe().begin(), b2.universe().end());
    for (std::size_t s = 0; s < b1.vocabulary().size(); ++s) {
        symbols.push_back(b1.vocabulary()[s]);
        rels.push_back(b1.relation(s));
    }
    for (std::size_t s = 0; s < b2.vocabulary().size(); ++s) {
        symbols.push_back(b2.vocabulary()[s]);
        rels.push_back(shifted(b2.relation(s), b1.size()));
    }
    symbols.push_back({"S", 2});
    std::vector<Tuple> biclique;
    for (int x = 0; x < b1.size(); ++x)
        for (int y = 0; y < b2.size(); ++y) biclique.push_back({x, b1.size() + y});
    rels.push_back(std::move(biclique));
    return RelStructure(Vocabulary(std::move(symbols)), std::move(universe), std::move(rels));
}

RelStructure or_template(const RelStructure& a1, const RelStructure& a2, const std::vector<int>& w1,
                         const std::vector<int>& w2) {
    if (a1.size() == 0 || a2.size() == 0) throw ContractError("both parts of an OR template must be nonempty");
    require_disjoint(a1, a2, {"c1", "c2"}, "S");
    const int n1 = a1.size(), n2 = a2.size();
    const int c1 = n1 + n2, c2 = c1 + 1;
    auto check_w = [](const std::vector<int>& w, int n) {
        std::set<int> s(w.begin(), w.end());
        if (!s.empty() && (*s.begin() < 0 || *s.rbegin() >= n)) throw ContractError("W is not a subset of the part");
        return std::vector<int>(s.begin(), s.end());
    };
    const auto ws1 = check_w(w1, n1), ws2 = check_w(w2, n2);

    std::vector<std::string> universe = a1.universe();
    universe.insert(universe.end(), a2.universe().begin(), a2.universe().end());
    universe.push_back("c1");
    universe.push_back("c2");

    std::vector<Symbol> symbols;
    std::vector<std::vector<Tuple>> rels;
    auto add_part = [&](const RelStructure& a, int offset, const std::vector<int>& w, int c) {
        std::vector<int> pool;  // W shifted into the combined universe, then c
        for (int x : w) pool.push_back(x + offset);
        pool.push_back(c);
        for (std::size_t s = 0; s < a.vocabulary().size(); ++s) {
            const int r = a.vocabulary()[s].arity;
            auto rel = shifted(a.relation(s), offset);
            // every tuple over W + c containing c; the all-c tuple included
            Tuple idx(static_cast<std::size_t>(r), 0);
            while (true) {
                Tuple t;
                for (int i : idx) t.push_back(pool[static_cast<std::size_t>(i)]);
                if (std::find(t.begin(), t.end(), c) != t.end()) rel.push_back(std::move(t));
                int p = r - 1;
                while (p >= 0 && ++idx[static_cast<std::size_t>(p)] == static_cast<int>(pool.size()))
                    idx[static_cast<std::size_t>(p--)] = 0;
                if (p < 0) break;
            }
            symbols.push_back(a.vocabulary()[s]);
            rels.push_back(std::move(rel));
        }
    };
    add_part(a1, 0, ws1, c1);
    add_part(a2, n1, ws2, c2);

    std::vector<Tuple> s;
    for (int x = 0; x < n1; ++x) {
        for (int y : ws2) s.push_back({x, n1 + y});
        s.push_back({x, c2});
    }
    for (int y = 0; y < n2; ++y) {
        for (int x : ws1) s.push_back({x, n1 + y});
        s.push_back({c1, n1 + y});
    }
    symbols.push_back({"S", 2});
    rels.push_back(std::move(s));
    return RelStructure(Vocabulary(std::move(symbols)), std::move(universe), std::move(rels));
}

RelStructure ort(const RelStructure& a1, const RelStructure& a2) { return or_template(a1, a2, {}, {}); }

RelStructure ornpc(const RelStructure& a1, const RelStructure& a2) {
    std::vector<int> w1(static_cast<std::size_t>(a1.size())), w2(static_cast<std::size_t>(a2.size()));
    std::iota(w1.begin(), w1.end(), 0);
    std::iota(w2.begin(), w2.end(), 0);
    return or_template(a1, a2, w1, w2);
}

OpTable or_maltsev(const RelStructure& a1, const RelStructure& a2, const OpTable& f1, const OpTable& f2) {
    const int n1 = a1.size(), n2 = a2.size();
    if (f1.arity() != 3 || f2.arity() != 3 || f1.universe_size() != n1 || f2.universe_size() != n2)
        throw ContractError("or_maltsev needs ternary operations on the two parts");
    if (!check_maltsev(f1) || !check_maltsev(f2) || !is_polymorphism(f1, a1) || !is_polymorphism(f2, a2))
        throw ContractError("or_maltsev needs Maltsev polymorphisms of the parts");
    const int c1 = n1 + n2, c2 = c1 + 1;
    // part 1 or 2 of an element, 0 for the c's
    auto part = [&](int x) { return x < n1 ? 1 : x < c1 ? 2 : 0; };
    return OpTable::from_function(n1 + n2 + 2, 3, [&](std::span<const int> in) {
        const int x = in[0], y = in[1], z = in[2];
        for (int i = 1; i <= 2; ++i) {
            const int c = i == 1 ? c1 : c2;
            const int off = i == 1 ? 0 : n1;
            const OpTable& f = i == 1 ? f1 : f2;
            if (part(x) == i && part(y) == i && part(z) == i) return f(x - off, y - off, z - off) + off;
            auto in_part = [&](int v) { return part(v) == i || v == c; };
            if (in_part(x) && in_part(y) && in_part(z)) {
                const int cs = (x == c) + (y == c) + (z == c);
                if (cs == 1 || cs == 3) return c;
            }
        }
        for (int v : {x, y, z})
            if ((x == v) + (y == v) + (z == v) != 2) return v;
        return x;  // unreachable: some input occurs once or three times
    });
}

// ---------------------------------------------------------------- monotone 3-SAT

RelStructure empty_unit_structure(const std::string& symbol, const std::string& element) {
    return RelStructure(Vocabulary({{symbol, 3}}), {element}, {{}});
}

RelStructure monotone3sat_template() {
    return ornpc(empty_unit_structure("R1", "a1"), empty_unit_structure("R2", "a2"));
}

namespace {

bool clause_positive(const Clause& c) {
    const bool pos = c[0] > 0 && c[1] > 0 && c[2] > 0;
    const bool neg = c[0] < 0 && c[1] < 0 && c[2] < 0;
    if (!pos && !neg) throw ContractError("clause mixes positive and negative literals");
    return pos;
}

}  // namespace

RelStructure monotone3sat_to_ornpc(const Monotone3Cnf& cnf) {
    const int n = cnf.num_vars;
    if (n < 1) throw ContractError("formula needs a variable");
    std::vector<std::string> universe;
    for (int v = 1; v <= n; ++v) universe.push_back("x" + std::to_string(v));
    for (int v = 1; v <= n; ++v) universe.push_back("nx" + std::to_string(v));
    std::vector<std::vector<Tuple>> rels(3);
    for (const auto& c : cnf.clauses) {
        for (int lit : c)
            if (lit == 0 || std::abs(lit) > n) throw ContractError("literal out of range");
        if (clause_positive(c))
            rels[0].push_back({c[0] - 1, c[1] - 1, c[2] - 1});
        else
            rels[1].push_back({n - c[0] - 1, n - c[1] - 1, n - c[2] - 1});
    }
    for (int v = 0; v < n; ++v) rels[2].push_back({v, n + v});
    return RelStructure(Vocabulary({{"R1", 3}, {"R2", 3}, {"S", 2}}), std::move(universe), std::move(rels));
}

std::vector<int> monotone3sat_hom(const Monotone3Cnf& cnf, const std::vector<bool>& assignment) {
    if (static_cast<int>(assignment.size()) != cnf.num_vars) throw ContractError("assignment size mismatch");
    // template universe: a1 = 0, a2 = 1, c1 = 2, c2 = 3
    std::vector<int> out(static_cast<std::size_t>(2 * cnf.num_vars));
    for (int v = 0; v < cnf.num_vars; ++v) {
        out[static_cast<std::size_t>(v)] = assignment[static_cast<std::size_t>(v)] ? 2 : 0;
        out[static_cast<std::size_t>(cnf.num_vars + v)] = assignment[static_cast<std::size_t>(v)] ? 1 : 3;
    }
    return out;
}

CosetInstance minimal_no_instance(const FiniteGroup& group) {
    if (!group.is_abelian() || group.order() < 2) throw ContractError("need a nontrivial Abelian group");
    const int one = group.identity() == 0 ? 1 : 0;
    std::vector<Tuple> gens;
    for (int a = 0; a < group.order(); ++a) {
        gens.push_back({a, group.inv(a), group.identity()});
        gens.push_back({a, group.identity(), group.inv(a)});
    }
    auto kernel = subgroup_closure(group, gens, 3);
    const Tuple zero(3, group.identity());
    const Tuple unit{one, group.identity(), group.identity()};
    return CosetInstance(group, {"x1", "x2", "x3"},
                         {{{"x1", "x2", "x3"}, kernel, unit}, {{"x1", "x2", "x3"}, kernel, zero}});
}

// ---------------------------------------------------------------- random graphs

OrientedGraph random_3regular_2connected(int n, std::uint64_t seed) {
    if (n < 4 || n % 2 != 0) throw ContractError("3-regular graphs need an even number of at least 4 vertices");
    std::mt19937_64 rng(seed);
    std::vector<int> points;
    for (int v = 0; v < n; ++v)
        for (int k = 0; k < 3; ++k) points.push_back(v);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        std::shuffle(points.begin(), points.end(), rng);
        std::set<std::pair<int, int>> edges;
        bool simple = true;
        for (std::size_t i = 0; simple && i < points.size(); i += 2) {
            auto e = std::minmax(points[i], points[i + 1]);
            simple = e.first != e.second && edges.insert(e).second;
        }
        if (!simple) continue;
        auto g = OrientedGraph::from_edges(n, {edges.begin(), edges.end()});
        if (check_2_connected(g)) return g;
    }
    throw ResourceError("no 3-regular 2-connected graph found");
}

// ---------------------------------------------------------------- Tseitin OR instances

TseitinOr tseitin_or(const OrientedGraph& g, const ChargeMap& charge_z2, const ChargeMap& charge_z3, OrKind kind) {
    if (!check_3_regular(g)) throw ContractError("Tseitin OR instances need a 3-regular graph");
    const auto z2 = FiniteGroup::cyclic(2), z3 = FiniteGroup::cyclic(3);
    TseitinOr out;
    out.tmpl1 = coset_template(z2, 3, "a", "P");
    out.tmpl2 = coset_template(z3, 3, "b", "Q");
    out.inst1 = coset_instance_over(tseitin_instance(g, z2, charge_z2, "y"), out.tmpl1);
    out.inst2 = coset_instance_over(tseitin_instance(g, z3, charge_z3, "z"), out.tmpl2);
    out.tmpl = kind == OrKind::Tractable ? ort(out.tmpl1, out.tmpl2) : ornpc(out.tmpl1, out.tmpl2);
    out.instance = or_instance(out.inst1, out.inst2);
    return out;
}

TseitinOr tseitin_or_unsat(const OrientedGraph& g, OrKind kind) {
    ChargeMap charge(static_cast<std::size_t>(g.num_vertices()), 0);
    if (!charge.empty()) charge[0] = 1;
    return tseitin_or(g, charge, charge, kind);
}

}  // namespace acsp
