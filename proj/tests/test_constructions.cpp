#include "acsp/constructions.hpp"
#include "coset_support.hpp"
#include "support.hpp"

#include "doctest.h"

#include <cmath>
#include <set>

using namespace acsp;
using namespace acsp::testing;

namespace {

int charge_sum(const FiniteGroup& g, const ChargeMap& charge) {
    int sum = g.identity();
    for (int c : charge) sum = g.mul(sum, c);
    return sum;
}

// Subgraph on the kept edges, over the vertices they touch.
OrientedGraph kept_subgraph(const OrientedGraph& g, const std::vector<int>& removed) {
    std::vector<std::pair<int, int>> edges;
    std::set<int> touched;
    for (int e = 0; e < g.num_edges(); ++e) {
        if (std::binary_search(removed.begin(), removed.end(), e)) continue;
        edges.push_back(g.arcs()[static_cast<std::size_t>(e)]);
        touched.insert(edges.back().first);
        touched.insert(edges.back().second);
    }
    std::vector<int> index(static_cast<std::size_t>(g.num_vertices()), -1);
    int n = 0;
    for (int v : touched) index[static_cast<std::size_t>(v)] = n++;
    for (auto& [u, v] : edges) {
        u = index[static_cast<std::size_t>(u)];
        v = index[static_cast<std::size_t>(v)];
    }
    return OrientedGraph::from_edges(n, edges);
}

// Random coset instance over g as a structure pair with prefixed names.
CosetStructures random_coset_pair(std::mt19937_64& rng, const FiniteGroup& g, const std::string& prefix) {
    auto inst = random_coset_instance(rng, g, 3, 2, 2, 1);
    auto s = coset_to_structures(inst);
    return {relabel(s.tmpl, prefix, prefix), relabel(s.inst, prefix, prefix)};
}

}  // namespace

TEST_CASE("graph predicates on named graphs") {
    for (const auto& g : {OrientedGraph::complete(4), OrientedGraph::petersen(), OrientedGraph::heawood()}) {
        CHECK(check_2_connected(g));
        CHECK(check_3_regular(g));
        CHECK(g.num_edges() * 2 == 3 * g.num_vertices());
    }
    auto p3 = OrientedGraph::path(3);
    CHECK_FALSE(check_2_connected(p3));
    CHECK_FALSE(check_3_regular(p3));
    CHECK(check_2_connected(OrientedGraph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})));
    // two triangles sharing a vertex
    CHECK_FALSE(check_2_connected(OrientedGraph::from_edges(5, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 2}})));

    CHECK_THROWS_AS(OrientedGraph({"a", "b"}, {{0, 0}}), DomainError);
    CHECK_THROWS_AS(OrientedGraph({"a", "b"}, {{0, 1}, {1, 0}}), DomainError);
    CHECK_THROWS_AS(OrientedGraph({"a", "a"}, {}), DomainError);
}

TEST_CASE("expansion witnesses") {
    auto w = expansion_witness(OrientedGraph::complete(4), {});
    REQUIRE(w);
    CHECK(w->edges.empty());
    CHECK(w->ratio == 1.0);

    auto petersen = OrientedGraph::petersen();
    for (int e = 0; e < petersen.num_edges(); ++e) {
        auto one = expansion_witness(petersen, {e});
        REQUIRE(one);
        CHECK(one->edges.size() <= 3);
    }
    // every pair and triple of Petersen edges leaves a 2-connected core
    double worst = 0;
    for (int a = 0; a < 15; ++a)
        for (int b = a + 1; b < 15; ++b)
            for (int c = b + 1; c <= 15; ++c) {
                std::vector<int> x{a, b};
                if (c < 15) x.push_back(c);
                auto wit = expansion_witness(petersen, x);
                REQUIRE(wit);
                CHECK(std::includes(wit->edges.begin(), wit->edges.end(), x.begin(), x.end()));
                if (static_cast<int>(wit->edges.size()) < petersen.num_edges())
                    CHECK(check_2_connected(kept_subgraph(petersen, wit->edges)));
                worst = std::max(worst, wit->ratio);
            }
    CHECK(worst < 8.0);

    // no cycle left at all
    CHECK_FALSE(expansion_witness(OrientedGraph::from_edges(4, {{0, 1}, {2, 3}}), {}));
    CHECK_FALSE(expansion_witness(OrientedGraph::path(5), {0}));
    // everything removed is the empty core
    auto all = expansion_witness(OrientedGraph::path(3), {0, 1});
    REQUIRE(all);
    CHECK(all->ratio == 1.0);
    // two disjoint triangles: one is kept, the other joins X-hat
    auto tri = expansion_witness(OrientedGraph::from_edges(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}}), {});
    REQUIRE(tri);
    CHECK(tri->edges.size() == 3);
    CHECK(std::isinf(tri->ratio));
}

TEST_CASE("Tseitin solvability is the total charge on K4") {
    auto k4 = OrientedGraph::complete(4);
    auto z2 = FiniteGroup::cyclic(2);
    for (int mask = 0; mask < 16; ++mask) {
        ChargeMap charge;
        for (int v = 0; v < 4; ++v) charge.push_back((mask >> v) & 1);
        auto inst = tseitin_instance(k4, z2, charge);
        CHECK(inst.variables().size() == 6);
        CHECK(coset_satisfiable(inst) == (charge_sum(z2, charge) == 0));
    }
    auto z3 = FiniteGroup::cyclic(3);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> elem(0, 2);
    for (int round = 0; round < 20; ++round) {
        ChargeMap charge;
        for (int v = 0; v < 4; ++v) charge.push_back(elem(rng));
        auto inst = tseitin_instance(k4, z3, charge);
        CHECK(coset_satisfiable(inst) == (charge_sum(z3, charge) == 0));
        CHECK(brute_force_coset(inst).has_value() == (charge_sum(z3, charge) == 0));
    }
    auto unsat = tseitin_instance(k4, z3, {1, 0, 0, 0});
    CHECK(unsat.variables().size() == 6);
    CHECK(unsat.constraints().size() == 4);
    for (const auto& c : unsat.constraints()) {
        CHECK(c.arity() == 3);
        CHECK(c.subgroup.size() == 9);
    }
    CHECK(unsat.variables()[0] == "y:v0>v1");
    CHECK_FALSE(coset_satisfiable(unsat));
}

TEST_CASE("Tseitin solvability on mixed graphs and groups") {
    std::mt19937_64 rng(7);
    const std::vector<FiniteGroup> groups{FiniteGroup::cyclic(2), FiniteGroup::cyclic(4),
                                          FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2))};
    const std::vector<OrientedGraph> graphs{
        OrientedGraph::path(4), OrientedGraph::from_edges(4, {{0, 1}, {1, 2}, {2, 0}, {0, 3}}),
        OrientedGraph({"p", "q", "r"}, {{1, 0}, {2, 1}, {0, 2}}), OrientedGraph::complete(4)};
    for (const auto& g : groups) {
        std::uniform_int_distribution<int> elem(0, g.order() - 1);
        for (const auto& graph : graphs)
            for (int round = 0; round < 6; ++round) {
                ChargeMap charge;
                for (int v = 0; v < graph.num_vertices(); ++v) charge.push_back(elem(rng));
                auto inst = tseitin_instance(graph, g, charge);
                auto sol = brute_force_coset(inst);
                CHECK(sol.has_value() == (charge_sum(g, charge) == g.identity()));
                if (sol) {
                    EdgeAssignment f;
                    for (int e = 0; e < graph.num_edges(); ++e) f[e] = (*sol)[static_cast<std::size_t>(e)];
                    CHECK(robustly_consistent(graph, g, charge, f, graph.num_vertices()));
                }
            }
    }
    CHECK_THROWS_AS(tseitin_instance(OrientedGraph::complete(4), FiniteGroup::symmetric(3), {0, 0, 0, 0}),
                    ContractError);
    CHECK_THROWS_AS(tseitin_instance(OrientedGraph::complete(4), FiniteGroup::cyclic(2), {0, 0}), ContractError);
    // an isolated vertex has no constraint and must carry no charge
    OrientedGraph lonely({"a", "b", "c"}, {{0, 1}});
    CHECK(tseitin_instance(lonely, FiniteGroup::cyclic(2), {1, 1, 0}).constraints().size() == 2);
    CHECK_THROWS_AS(tseitin_instance(lonely, FiniteGroup::cyclic(2), {0, 0, 1}), DomainError);
}

TEST_CASE("cut constraints and robust consistency") {
    auto k4 = OrientedGraph::complete(4);
    auto z2 = FiniteGroup::cyclic(2);
    const ChargeMap unsat{1, 0, 0, 0};
    CHECK(robustly_consistent(k4, z2, unsat, {}, 3));
    // vertex v0 sees edges 0, 1, 2; all zero violates its charge
    EdgeAssignment zero{{0, 0}, {1, 0}, {2, 0}};
    CHECK_FALSE(check_cut_constraint(k4, z2, unsat, zero, {0}));
    CHECK_FALSE(robustly_consistent(k4, z2, unsat, zero, 1));
    CHECK_THROWS_AS(check_cut_constraint(k4, z2, unsat, zero, {1}), ContractError);
    for (int e = 0; e < 6; ++e)
        for (int x = 0; x < 2; ++x) CHECK(robustly_consistent(k4, z2, unsat, {{e, x}}, 1));
    // a total assignment of an unsatisfiable system fails the cut W = V
    EdgeAssignment total;
    for (int e = 0; e < 6; ++e) total[e] = 0;
    CHECK(check_cut_constraint(k4, z2, {0, 0, 0, 0}, total, {0, 1, 2, 3}));
    CHECK_FALSE(check_cut_constraint(k4, z2, unsat, total, {0, 1, 2, 3}));
    CHECK(robustly_consistent(k4, z2, {0, 0, 0, 0}, total, 9));  // clamped
}

TEST_CASE("every small edge set of Petersen carries a robustly consistent assignment") {
    auto g = OrientedGraph::petersen();
    auto z2 = FiniteGroup::cyclic(2);
    ChargeMap charge(10, 0);
    charge[0] = 1;
    const int level = robust_level(g);
    CHECK(level == 3);
    int sets = 0;
    for (int mask = 0; mask < (1 << 15); ++mask) {
        if (__builtin_popcount(static_cast<unsigned>(mask)) > 3) continue;
        std::vector<int> x;
        for (int e = 0; e < 15; ++e)
            if ((mask >> e) & 1) x.push_back(e);
        bool found = false;
        for (int bits = 0; bits < (1 << x.size()) && !found; ++bits) {
            EdgeAssignment f;
            for (std::size_t i = 0; i < x.size(); ++i) f[x[i]] = (bits >> i) & 1;
            found = robustly_consistent(g, z2, charge, f, level);
        }
        CHECK(found);
        ++sets;
    }
    CHECK(sets == 576);
}

TEST_CASE("OR template shapes") {
    auto t2 = coset_template(FiniteGroup::cyclic(2), 3, "a", "P");
    auto t3 = coset_template(FiniteGroup::cyclic(3), 3, "b", "Q");
    auto tract = ort(t2, t3);
    CHECK(tract.size() == 7);
    CHECK(tract.universe()[5] == "c1");
    CHECK(tract.vocabulary().size() == 51 + 184 + 1);
    const auto s = *tract.vocabulary().find("S");
    CHECK(tract.relation(s).size() == 5);
    for (std::size_t r = 0; r < 51; ++r) {
        CHECK(tract.relation(r).size() == t2.relation(r).size() + 1);
        CHECK(tract.contains(r, {5, 5, 5}));
    }
    auto hard = ornpc(t2, t3);
    CHECK(hard.relation(s).size() == 11);
    // a relation of the Z3 side: its own tuples, plus the 4^3 - 3^3 tuples over {b, c2} with c2
    CHECK(hard.relation(51).size() == t3.relation(0).size() + 64 - 27);

    CHECK_THROWS_AS(ort(t2, t2), ContractError);
    CHECK_THROWS_AS(or_template(t2, t3, {2}, {}), ContractError);
}

TEST_CASE("OR Maltsev operation on the seven-element template") {
    auto z2 = FiniteGroup::cyclic(2), z3 = FiniteGroup::cyclic(3);
    auto t2 = coset_template(z2, 3, "a", "P");
    auto t3 = coset_template(z3, 3, "b", "Q");
    auto f2 = group_maltsev(z2), f3 = group_maltsev(z3);
    CHECK(is_polymorphism(f2, t2));
    CHECK(is_polymorphism(f3, t3));
    auto m = or_maltsev(t2, t3, f2, f3);
    CHECK(check_maltsev(m));
    CHECK(is_polymorphism(m, ort(t2, t3)));

    const int c1 = 5, c2 = 6;
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y)
            for (int z = 0; z < 3; ++z) CHECK(m(x + 2, y + 2, z + 2) == f3(x, y, z) + 2);
    CHECK(m(c1, c1, 1) == 1);
    CHECK(m(c1, 0, 1) == c1);
    CHECK(m(c1, c1, c1) == c1);
    CHECK(m(0, c2, 3) == 0);
    CHECK(m(c2, 4, 4) == c2);

    auto first = OpTable::from_function(2, 3, [](std::span<const int> x) { return x[0]; });
    CHECK_THROWS_AS(or_maltsev(t2, t3, first, f3), ContractError);
}

TEST_CASE("OR Maltsev operation on random coset parts") {
    std::mt19937_64 rng(11);
    const std::vector<FiniteGroup> groups{FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::symmetric(3)};
    for (int round = 0; round < 10; ++round) {
        const auto& g1 = groups[static_cast<std::size_t>(round % 3)];
        const auto& g2 = groups[static_cast<std::size_t>((round + 1) % 3)];
        auto p1 = random_coset_pair(rng, g1, "l");
        auto p2 = random_coset_pair(rng, g2, "r");
        auto m = or_maltsev(p1.tmpl, p2.tmpl, group_maltsev(g1), group_maltsev(g2));
        CHECK(check_maltsev(m));
        CHECK(is_polymorphism(m, ort(p1.tmpl, p2.tmpl)));
    }
}

TEST_CASE("OR instances are satisfiable exactly when a side is") {
    std::mt19937_64 rng(13);
    auto z2 = FiniteGroup::cyclic(2), z3 = FiniteGroup::cyclic(3);
    int mixed = 0;
    for (int round = 0; round < 30; ++round) {
        // both sides share their template across the round
        auto i1 = random_coset_instance(rng, z2, 3, 3, 2, 1);
        auto i2 = random_coset_instance(rng, z3, 3, 3, 2, 1);
        auto s1 = coset_to_structures(i1), s2 = coset_to_structures(i2);
        auto a1 = relabel(s1.tmpl, "a", "P"), b1 = relabel(s1.inst, "y", "P");
        auto a2 = relabel(s2.tmpl, "b", "Q"), b2 = relabel(s2.inst, "z", "Q");
        const bool sat1 = oracle_decide(a1, b1).satisfiable, sat2 = oracle_decide(a2, b2).satisfiable;
        mixed += sat1 != sat2;
        auto b = or_instance(b1, b2);
        CHECK(b.size() == b1.size() + b2.size());
        CHECK(b.relation(*b.vocabulary().find("S")).size() == static_cast<std::size_t>(b1.size() * b2.size()));
        CHECK(oracle_decide(ort(a1, a2), b).satisfiable == (sat1 || sat2));
        CHECK(oracle_decide(ornpc(a1, a2), b).satisfiable == (sat1 || sat2));
    }
    CHECK(mixed > 3);
}

TEST_CASE("Tseitin OR instances over K4") {
    auto k4 = OrientedGraph::complete(4);
    auto unsat = tseitin_or_unsat(k4, OrKind::Tractable);
    CHECK(unsat.instance.size() == 12);
    CHECK(unsat.tmpl.size() == 7);
    CHECK(unsat.instance.vocabulary().size() == 51 + 184 + 1);
    CHECK_FALSE(oracle_decide(unsat.tmpl, unsat.instance).satisfiable);
    auto hard = tseitin_or_unsat(k4, OrKind::Intractable);
    CHECK_FALSE(oracle_decide(hard.tmpl, hard.instance).satisfiable);

    auto half = tseitin_or(k4, {0, 0, 0, 0}, {1, 0, 0, 0}, OrKind::Tractable);
    auto res = oracle_decide(half.tmpl, half.instance);
    REQUIRE(res.satisfiable);
    CHECK(is_homomorphism(PartialHom{iota_domain(12), res.witness}, half.instance, half.tmpl));
    CHECK_THROWS_AS(tseitin_or_unsat(OrientedGraph::path(4), OrKind::Tractable), ContractError);
}

TEST_CASE("partial homomorphisms of both sides combine in the intractable template") {
    std::mt19937_64 rng(19);
    auto k4 = OrientedGraph::complete(4);
    auto tor = tseitin_or_unsat(k4, OrKind::Intractable);
    const int n1 = tor.inst1.size();
    std::bernoulli_distribution coin(0.5);
    int checked = 0;
    for (int round = 0; round < 40; ++round) {
        std::vector<int> x1, x2;
        for (int v = 0; v < n1; ++v)
            if (coin(rng)) x1.push_back(v);
        for (int v = 0; v < tor.inst2.size(); ++v)
            if (coin(rng)) x2.push_back(v);
        auto h1 = enumerate_partial_homs(tor.tmpl1, tor.inst1, x1);
        auto h2 = enumerate_partial_homs(tor.tmpl2, tor.inst2, x2);
        if (h1.empty() || h2.empty()) continue;
        const auto& f1 = h1[static_cast<std::size_t>(rng() % h1.size())];
        const auto& f2 = h2[static_cast<std::size_t>(rng() % h2.size())];
        PartialHom f;
        f.domain = x1;
        f.values = f1.values;
        for (std::size_t i = 0; i < x2.size(); ++i) {
            f.domain.push_back(x2[i] + n1);
            f.values.push_back(f2.values[i] + tor.tmpl1.size());
        }
        CHECK(is_homomorphism(f, tor.instance, tor.tmpl));
        // the tractable template does not allow this once both sides are used
        if (!x1.empty() && !x2.empty()) CHECK_FALSE(is_homomorphism(f, tor.instance, ort(tor.tmpl1, tor.tmpl2)));
        ++checked;
    }
    CHECK(checked > 20);
}

TEST_CASE("monotone 3-SAT reduction") {
    auto tmpl = monotone3sat_template();
    CHECK(tmpl.universe() == std::vector<std::string>{"a1", "a2", "c1", "c2"});
    CHECK(tmpl.relation(2).size() == 3);

    Monotone3Cnf one{3, {{1, 2, 3}}};
    auto inst = monotone3sat_to_ornpc(one);
    CHECK(inst.size() == 6);
    CHECK(oracle_decide(tmpl, inst).satisfiable);
    Monotone3Cnf contradiction{1, {{1, 1, 1}, {-1, -1, -1}}};
    CHECK_FALSE(oracle_decide(tmpl, monotone3sat_to_ornpc(contradiction)).satisfiable);
    CHECK_THROWS_AS(monotone3sat_to_ornpc(Monotone3Cnf{3, {{1, -2, 3}}}), ContractError);

    std::mt19937_64 rng(23);
    int sat_count = 0;
    for (int round = 0; round < 30; ++round) {
        const int n = 2 + round % 4;
        std::uniform_int_distribution<int> var(1, n), clauses(1, 8);
        Monotone3Cnf cnf{n, {}};
        for (int c = clauses(rng); c > 0; --c) {
            const int sign = rng() % 2 ? 1 : -1;
            cnf.clauses.push_back({sign * var(rng), sign * var(rng), sign * var(rng)});
        }
        bool sat = false;
        for (int mask = 0; mask < (1 << n); ++mask) {
            std::vector<bool> a;
            for (int v = 0; v < n; ++v) a.push_back((mask >> v) & 1);
            bool ok = true;
            for (const auto& c : cnf.clauses) {
                bool clause = false;
                for (int lit : c) clause = clause || (a[static_cast<std::size_t>(std::abs(lit) - 1)] == (lit > 0));
                ok = ok && clause;
            }
            auto b = monotone3sat_to_ornpc(cnf);
            const bool hom = is_homomorphism(PartialHom{iota_domain(b.size()), monotone3sat_hom(cnf, a)}, b, tmpl);
            CHECK(hom == ok);
            sat = sat || ok;
        }
        sat_count += sat;
        CHECK(oracle_decide(tmpl, monotone3sat_to_ornpc(cnf)).satisfiable == sat);
    }
    CHECK(sat_count > 5);
    CHECK(sat_count < 30);
}

TEST_CASE("minimal no-instances over Z2 and Z3") {
    for (int p : {2, 3}) {
        auto inst = minimal_no_instance(FiniteGroup::cyclic(p));
        CHECK(inst.variables().size() == 3);
        CHECK(inst.constraints().size() == 2);
        auto s = coset_to_structures(inst);
        CHECK_FALSE(oracle_decide(s.tmpl, s.inst).satisfiable);
        for (int drop = 0; drop < 3; ++drop) {
            std::vector<int> keep;
            for (int v = 0; v < 3; ++v)
                if (v != drop) keep.push_back(v);
            auto sub = induced_substructure(s.inst, keep);
            for (const auto& rel : sub.relations()) CHECK(rel.empty());
            CHECK(oracle_decide(s.tmpl, sub).satisfiable);
        }
    }
    CHECK_THROWS_AS(minimal_no_instance(FiniteGroup::symmetric(3)), ContractError);
}

TEST_CASE("random 3-regular 2-connected graphs") {
    CHECK(random_3regular_2connected(4, 1) == OrientedGraph::complete(4));
    for (int n : {6, 8, 10, 12, 14, 20})
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            auto g = random_3regular_2connected(n, seed);
            CHECK(check_3_regular(g));
            CHECK(check_2_connected(g));
            CHECK(g.num_edges() == 3 * n / 2);
            CHECK(g == random_3regular_2connected(n, seed));
        }
    CHECK_THROWS_AS(random_3regular_2connected(7, 0), ContractError);
    CHECK_THROWS_AS(random_3regular_2connected(2, 0), ContractError);
}
