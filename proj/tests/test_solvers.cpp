#include "acsp/constructions.hpp"
#include "acsp/solvers.hpp"
#include "coset_support.hpp"
#include "support.hpp"

#include "doctest.h"

#include <functional>

using namespace acsp;
using namespace acsp::testing;

namespace {

using Decide = std::function<Verdict(const RelStructure&, const RelStructure&)>;

struct NamedSolver {
    std::string name;
    Decide run;
};

std::vector<NamedSolver> all_solvers() {
    return {
        {"aip1", [](auto& a, auto& b) { return aip_decide(a, b, 1); }},
        {"aip2", [](auto& a, auto& b) { return aip_decide(a, b, 2); }},
        {"zaffine1", [](auto& a, auto& b) { return zaffine_decide(a, b, 1); }},
        {"zaffine2", [](auto& a, auto& b) { return zaffine_decide(a, b, 2); }},
        {"zaffine3", [](auto& a, auto& b) { return zaffine_decide(a, b, 3); }},
        {"blpaip", [](auto& a, auto& b) { return blpaip_decide(a, b); }},
        {"bak2", [](auto& a, auto& b) { return bak_decide(a, b, 2); }},
        {"clap", [](auto& a, auto& b) { return clap_decide(a, b); }},
        {"clap_prime", [](auto& a, auto& b) { return clap_prime_decide(a, b); }},
        {"cohomology2", [](auto& a, auto& b) { return cohomological_decide(a, b, 2); }},
    };
}

// Random instance with `tuples` tuples spread over the symbols of `vocab`.
RelStructure random_over(std::mt19937_64& rng, const Vocabulary& vocab, int n, int tuples, const std::string& prefix) {
    std::vector<std::vector<Tuple>> rels(vocab.size());
    std::uniform_int_distribution<std::size_t> sym(0, vocab.size() - 1);
    std::uniform_int_distribution<int> elem(0, n - 1);
    for (int t = 0; t < tuples; ++t) {
        const auto s = sym(rng);
        Tuple tup;
        for (int p = 0; p < vocab[s].arity; ++p) tup.push_back(elem(rng));
        rels[s].push_back(tup);
    }
    return RelStructure(vocab, names(prefix, n), rels);
}

struct Pair {
    RelStructure tmpl, inst;
};

std::vector<Pair> random_pairs(std::uint64_t seed, int count, bool want_satisfiable) {
    std::mt19937_64 rng(seed);
    std::vector<Pair> out;
    std::uniform_int_distribution<int> size(2, 8), tuples(1, 8);
    while (static_cast<int>(out.size()) < count) {
        auto tmpl = random_structure(rng, 3, 0.5, "a");
        auto inst = random_instance(rng, size(rng), tuples(rng));
        if (oracle_decide(tmpl, inst).satisfiable == want_satisfiable) out.push_back({tmpl, inst});
    }
    return out;
}

RelStructure structure_of(const CosetInstance& c, RelStructure* tmpl) {
    auto s = coset_to_structures(c);
    *tmpl = s.tmpl;
    return s.inst;
}

bool verdict_bool(const Verdict& v) {
    REQUIRE(v.answer != Answer::Unknown);
    return v.answer == Answer::Accept;
}

}  // namespace

TEST_CASE("answers print by name") {
    CHECK(to_string(Answer::Accept) == "Accept");
    CHECK(to_string(Answer::Reject) == "Reject");
    CHECK(to_string(Answer::Unknown) == "Unknown");
}

TEST_CASE("every solver accepts satisfiable instances with valid certificates") {
    const auto pairs = random_pairs(101, 25, true);
    for (const auto& solver : all_solvers()) {
        CAPTURE(solver.name);
        for (const auto& [tmpl, inst] : pairs) {
            const Verdict v = solver.run(tmpl, inst);
            CHECK(v.answer == Answer::Accept);
            CHECK(check_certificate(v, tmpl, inst));
            CHECK(v.stats.systems_solved > 0);
        }
    }
}

TEST_CASE("certificates on unsatisfiable instances and solver dominance") {
    const auto pairs = random_pairs(202, 25, false);
    for (const auto& [tmpl, inst] : pairs) {
        for (const auto& solver : all_solvers()) {
            CAPTURE(solver.name);
            CHECK(check_certificate(solver.run(tmpl, inst), tmpl, inst));
        }
        std::vector<bool> zaffine;
        for (int k = 1; k <= 3; ++k) {
            const Verdict z = zaffine_decide(tmpl, inst, k);
            zaffine.push_back(verdict_bool(z));
            const Verdict c = cohomological_decide(tmpl, inst, k);
            if (!zaffine.back()) CHECK(c.answer == Answer::Reject);
            if (c.answer == Answer::Reject) CHECK(std::holds_alternative<EmptySetCertificate>(c.certificate));
        }
        CHECK((!zaffine[1] || zaffine[0]));
        CHECK((!zaffine[2] || zaffine[1]));
    }
}

TEST_CASE("z-affine consistency rejects through an empty family") {
    const auto k3 = clique(3), k2 = clique(2);
    const Verdict v = zaffine_decide(k2, k3, 3);
    CHECK(v.answer == Answer::Reject);
    REQUIRE(std::holds_alternative<EmptySetCertificate>(v.certificate));
    CHECK(std::get<EmptySetCertificate>(v.certificate).set.size() <= 3);
    CHECK(cohomological_decide(k2, k3, 3).answer == Answer::Reject);
    CHECK(zaffine_decide(k2, clique(2), 2).answer == Answer::Accept);
}

TEST_CASE("BA^k rejects when the BLP is infeasible") {
    Vocabulary vocab({{"U", 1}});
    RelStructure tmpl(vocab, {"a", "b"}, {{}});
    RelStructure inst(vocab, {"x"}, {{{0}}});
    for (int k = 1; k <= 2; ++k) {
        const Verdict v = bak_decide(tmpl, inst, k);
        CHECK(v.answer == Answer::Reject);
        REQUIRE(std::holds_alternative<InfeasibleCertificate>(v.certificate));
    }
}

TEST_CASE("AIP on Abelian coset instances matches the oracle") {
    SUBCASE("x + y = 1, y = 2 over Z3") {
        const auto z3 = FiniteGroup::cyclic(3);
        CosetConstraint sum{{"x", "y"}, subgroup_closure(z3, {{1, 2}}, 2), {1, 0}};
        CosetConstraint unit{{"y"}, {{0}}, {2}};
        CosetInstance c(z3, {"x", "y"}, {sum, unit});
        RelStructure tmpl;
        const auto inst = structure_of(c, &tmpl);
        const Verdict v = aip_decide(tmpl, inst, 1);
        CHECK(v.answer == Answer::Accept);
        CHECK(oracle_decide(tmpl, inst).satisfiable);
        CHECK(check_certificate(v, tmpl, inst));
    }
    SUBCASE("x = 1, x = 2 over Z3") {
        const auto z3 = FiniteGroup::cyclic(3);
        CosetInstance c(z3, {"x"}, {{{"x"}, {{0}}, {1}}, {{"x"}, {{0}}, {2}}});
        RelStructure tmpl;
        const auto inst = structure_of(c, &tmpl);
        CHECK(aip_decide(tmpl, inst, 1).answer == Answer::Reject);
    }
    SUBCASE("random instances over small Abelian groups") {
        std::mt19937_64 rng(303);
        const std::vector<FiniteGroup> groups{FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::cyclic(4),
                                              FiniteGroup::direct_product(FiniteGroup::cyclic(2),
                                                                          FiniteGroup::cyclic(2))};
        int rejects = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const auto& g = groups[static_cast<std::size_t>(trial % 4)];
            const auto c = random_coset_instance(rng, g, 4, 4, 3);
            RelStructure tmpl;
            const auto inst = structure_of(c, &tmpl);
            const bool expected = brute_force_coset(c).has_value();
            const Verdict v = aip_decide(tmpl, inst, 1);
            CHECK(verdict_bool(v) == expected);
            CHECK(check_certificate(v, tmpl, inst));
            rejects += expected ? 0 : 1;
        }
        CHECK(rejects > 10);
    }
}

TEST_CASE("AIP on coset instances over the non-Abelian group of order 27") {
    std::mt19937_64 rng(404);
    const auto g = FiniteGroup::semidirect_z9_z3();
    int rejects = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto c = random_coset_instance(rng, g, 4, 3, 2);
        RelStructure tmpl;
        const auto inst = structure_of(c, &tmpl);
        const bool expected = brute_force_coset(c).has_value();
        CHECK(verdict_bool(aip_decide(tmpl, inst, 1)) == expected);
        rejects += expected ? 0 : 1;
    }
    CHECK(rejects > 5);
}

TEST_CASE("CLAP image sets do not depend on the scan order") {
    std::mt19937_64 rng(505);
    for (int trial = 0; trial < 12; ++trial) {
        const auto tmpl = random_structure(rng, 3, 0.5, "a");
        const auto inst = random_instance(rng, 5, 6);
        const auto reference = clap_image_sets(tmpl, inst);
        for (std::uint64_t seed = 1; seed <= 3; ++seed)
            CHECK(clap_image_sets(tmpl, inst, {.shuffle_seed = seed}) == reference);
        CHECK(clap_decide(tmpl, inst, {.shuffle_seed = 9}).answer == clap_decide(tmpl, inst).answer);
    }
}

TEST_CASE("CLAP rejects when an image set empties") {
    // E(x, x) has no image in an irreflexive template, so the pruning loop kills every candidate.
    const auto inst = graph(1, {{0, 0}}, false);
    for (const auto& decide : {clap_decide, clap_prime_decide}) {
        const Verdict v = decide(clique(3), inst, {});
        CHECK(v.answer == Answer::Reject);
        CHECK(std::holds_alternative<InfeasibleCertificate>(v.certificate));
    }
    const auto sets = clap_image_sets(clique(3), inst);
    REQUIRE(sets.size() == 1);
    CHECK(sets.begin()->second.empty());
}

TEST_CASE("CLAP without constraint tuples runs BA^1 once") {
    Vocabulary vocab({{"E", 2}});
    RelStructure inst(vocab, {"x", "y"}, {{}});
    const Verdict v = clap_decide(clique(2), inst);
    CHECK(v.answer == Answer::Accept);
    CHECK(v.stats.systems_solved == 2);
    CHECK(clap_prime_decide(clique(2), inst).answer == Answer::Accept);
}

TEST_CASE("CLAP' acceptance carries over to CLAP on the padded instance") {
    std::mt19937_64 rng(606);
    int accepted = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto tmpl = random_structure(rng, 3, 0.5, "a");
        const auto inst = random_instance(rng, 5, 6);
        const auto padded = pad_for_clap(tmpl, inst);
        CHECK(padded.size() >= inst.size());
        if (clap_prime_decide(tmpl, inst).answer != Answer::Accept) continue;
        ++accepted;
        CHECK(clap_decide(tmpl, padded).answer == Answer::Accept);
    }
    CHECK(accepted > 0);
}

TEST_CASE("padding adds one fresh tuple") {
    const auto inst = graph(3, {{0, 1}});
    const auto padded = pad_for_clap(clique(3), inst);
    CHECK(padded.size() == 5);
    CHECK(padded.universe()[3] == "pad0");
    CHECK(padded.relation(0).size() == inst.relation(0).size() + 1);
    CHECK(padded.contains(0, {3, 4}));
    Vocabulary vocab({{"E", 2}});
    RelStructure empty_tmpl(vocab, {"a"}, {{}});
    CHECK(pad_for_clap(empty_tmpl, inst) == inst);
}

TEST_CASE("budget exhaustion gives Unknown") {
    const auto pairs = random_pairs(707, 3, true);
    for (const auto& [tmpl, inst] : pairs) {
        const Verdict v = cohomological_decide(tmpl, inst, 2, {.budget = {.max_systems = 1}});
        CHECK(v.answer == Answer::Unknown);
        CHECK(std::holds_alternative<std::monostate>(v.certificate));
        CHECK(v.stats.systems_solved == 1);
        CHECK(clap_decide(tmpl, inst, {.budget = {.max_systems = 0}}).answer == Answer::Unknown);
    }
}

TEST_CASE("eager and batched cohomological removal agree") {
    for (bool satisfiable : {true, false}) {
        for (const auto& [tmpl, inst] : random_pairs(808 + satisfiable, 10, satisfiable)) {
            const Verdict batched = cohomological_decide(tmpl, inst, 2);
            const Verdict eager = cohomological_decide(tmpl, inst, 2, {.eager = true});
            CHECK(batched.answer == eager.answer);
            CHECK(eager.stats.rounds >= batched.stats.rounds);
        }
    }
}

TEST_CASE("tampered certificates fail the checker") {
    const auto tmpl = clique(3);
    const auto inst = graph(3, {{0, 1}, {1, 2}});
    Verdict v = aip_decide(tmpl, inst, 1);
    REQUIRE(v.answer == Answer::Accept);
    auto& sol = std::get<SolutionCertificate>(v.certificate);
    sol.values[0] += 1;
    CHECK_FALSE(check_certificate(v, tmpl, inst));

    Verdict hom{Answer::Accept, HomCertificate{{0, 0, 1}}, {}};
    CHECK_FALSE(check_certificate(hom, tmpl, inst));
    hom.certificate = HomCertificate{{0, 1, 0}};
    CHECK(check_certificate(hom, tmpl, inst));
    hom.certificate = HomCertificate{{0, 1}};
    CHECK_FALSE(check_certificate(hom, tmpl, inst));
}

TEST_CASE("oracle verdicts") {
    const Verdict yes = oracle_verdict(clique(3), graph(3, {{0, 1}, {1, 2}}));
    CHECK(yes.answer == Answer::Accept);
    CHECK(check_certificate(yes, clique(3), graph(3, {{0, 1}, {1, 2}})));
    CHECK(oracle_verdict(clique(2), clique(3)).answer == Answer::Reject);
}

TEST_CASE("exact OR algorithm") {
    std::mt19937_64 rng(909);
    auto part = [&](const std::string& elem, const std::string& sym) {
        return relabel(random_structure(rng, 2, 0.5, "a"), elem, sym);
    };

    SUBCASE("proper OR instances") {
        for (int trial = 0; trial < 30; ++trial) {
            const auto a1 = part("p", "P"), a2 = part("q", "Q");
            const auto tmpl = ort(a1, a2);
            const auto b1 = relabel(random_instance(rng, 3, 3), "s", "P");
            const auto b2 = relabel(random_instance(rng, 3, 3), "t", "Q");
            const auto inst = or_instance(b1, b2);
            const bool expected = oracle_decide(a1, b1).satisfiable || oracle_decide(a2, b2).satisfiable;
            const Verdict v = solve_ort_exact(a1, a2, inst);
            CHECK(verdict_bool(v) == expected);
            CHECK(verdict_bool(v) == oracle_decide(tmpl, inst).satisfiable);
            CHECK(check_certificate(v, tmpl, inst));
        }
    }
    SUBCASE("arbitrary instances over the OR vocabulary") {
        int accepted = 0;
        for (int trial = 0; trial < 60; ++trial) {
            const auto a1 = part("p", "P"), a2 = part("q", "Q");
            const auto tmpl = ort(a1, a2);
            const auto inst = random_over(rng, tmpl.vocabulary(), 6, 5, "b");
            const Verdict v = solve_ort_exact(a1, a2, inst);
            CHECK(verdict_bool(v) == oracle_decide(tmpl, inst).satisfiable);
            CHECK(check_certificate(v, tmpl, inst));
            accepted += v.answer == Answer::Accept;
        }
        CHECK(accepted > 5);
        CHECK(accepted < 55);
    }
    SUBCASE("an element in tuples of both parts") {
        Vocabulary v1({{"P", 1}}), v2({{"Q", 1}});
        RelStructure a1(v1, {"p"}, {{{0}}}), a2(v2, {"q"}, {{{0}}});
        Vocabulary vocab({{"P", 1}, {"Q", 1}, {"S", 2}});
        RelStructure inst(vocab, {"x"}, {{{0}}, {{0}}, {}});
        CHECK(solve_ort_exact(a1, a2, inst).answer == Answer::Reject);
        CHECK_FALSE(oracle_decide(ort(a1, a2), inst).satisfiable);
    }
    SUBCASE("one unsatisfiable S-component sinks the instance") {
        Vocabulary v1({{"P", 2}}), v2({{"Q", 2}});
        RelStructure a1(v1, {"p0", "p1"}, {{{0, 1}, {1, 0}}});
        RelStructure a2(v2, {"q0", "q1"}, {{{0, 1}, {1, 0}}});
        const auto tri = [](const std::string& s) {
            return RelStructure(Vocabulary({{s, 2}}), names(s, 3), {{{0, 1}, {1, 2}, {2, 0}}});
        };
        const auto edge = [](const std::string& s) {
            return RelStructure(Vocabulary({{s, 2}}), names(s, 2), {{{0, 1}}});
        };
        const auto bad = or_instance(relabel(tri("P"), "x", ""), relabel(tri("Q"), "y", ""));
        const auto good = or_instance(relabel(edge("P"), "u", ""), relabel(tri("Q"), "w", ""));
        CHECK(solve_ort_exact(a1, a2, good).answer == Answer::Accept);
        CHECK(solve_ort_exact(a1, a2, bad).answer == Answer::Reject);
        // disjoint union of both
        std::vector<std::string> universe = bad.universe();
        universe.insert(universe.end(), good.universe().begin(), good.universe().end());
        std::vector<std::vector<Tuple>> rels = bad.relations();
        for (std::size_t s = 0; s < rels.size(); ++s)
            for (auto t : good.relation(s)) {
                for (int& x : t) x += bad.size();
                rels[s].push_back(t);
            }
        RelStructure both(bad.vocabulary(), universe, rels);
        CHECK(solve_ort_exact(a1, a2, both).answer == Answer::Reject);
        CHECK_FALSE(oracle_decide(ort(a1, a2), both).satisfiable);
    }
    SUBCASE("foreign symbols") {
        Vocabulary v1({{"P", 1}}), v2({{"Q", 1}});
        RelStructure a1(v1, {"p"}, {{}}), a2(v2, {"q"}, {{}});
        RelStructure inst(Vocabulary({{"R", 1}}), {"x"}, {{}});
        CHECK_THROWS_AS(solve_ort_exact(a1, a2, inst), ContractError);
    }
}

TEST_CASE("solvers on the K4 Tseitin OR instances") {
    const auto g = OrientedGraph::complete(4);
    const auto unsat = tseitin_or_unsat(g, OrKind::Tractable);
    CHECK(aip_decide(unsat.tmpl, unsat.instance, 1).answer == Answer::Accept);
    const Verdict exact = solve_ort_exact(unsat.tmpl1, unsat.tmpl2, unsat.instance);
    CHECK(exact.answer == Answer::Reject);

    ChargeMap zero(4, 0), one(4, 0);
    one[0] = 1;
    const auto half = tseitin_or(g, zero, one, OrKind::Tractable);
    const Verdict ok = solve_ort_exact(half.tmpl1, half.tmpl2, half.instance);
    CHECK(ok.answer == Answer::Accept);
    CHECK(check_certificate(ok, half.tmpl, half.instance));
    const Verdict z = zaffine_decide(half.tmpl, half.instance, 1);
    CHECK(z.answer == Answer::Accept);
    CHECK(check_certificate(z, half.tmpl, half.instance));
}
