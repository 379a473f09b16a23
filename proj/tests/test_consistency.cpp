#include "acsp/consistency.hpp"
#include "support.hpp"

#include "doctest.h"

#include <map>
#include <set>

using namespace acsp;
using namespace acsp::testing;

namespace {

using Family = std::map<ElementSet, std::set<Tuple>>;

Tuple restrict_values(const ElementSet& x, const Tuple& f, const ElementSet& y) {
    Tuple out;
    for (int e : y) {
        for (std::size_t p = 0; p < x.size(); ++p)
            if (x[p] == e) out.push_back(f[p]);
    }
    return out;
}

// Naive greatest fixpoint: every pair Y subset X, re-scanned until stable.
Family naive_consistency(const RelStructure& tmpl, const RelStructure& inst, int k) {
    Family fam;
    for (const auto& x : subsets_up_to(inst.size(), k)) {
        fam[x];
        for (const auto& h : enumerate_partial_homs(tmpl, inst, x)) fam[x].insert(h.values);
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& [x, maps] : fam) {
            for (auto it = maps.begin(); it != maps.end();) {
                bool ok = true;
                for (const auto& [y, sub] : fam) {
                    if (y.size() >= x.size() || !std::includes(x.begin(), x.end(), y.begin(), y.end())) continue;
                    if (!sub.count(restrict_values(x, *it, y))) ok = false;
                }
                for (const auto& [z, sup] : fam) {
                    if (!ok) break;
                    if (z.size() <= x.size() || !std::includes(z.begin(), z.end(), x.begin(), x.end())) continue;
                    bool extends = false;
                    for (const auto& g : sup)
                        if (restrict_values(z, g, x) == *it) extends = true;
                    if (!extends) ok = false;
                }
                if (ok) {
                    ++it;
                } else {
                    it = maps.erase(it);
                    changed = true;
                }
            }
        }
    }
    return fam;
}

Family as_family(const KappaMap& kappa) {
    Family fam;
    for (std::size_t i = 0; i < kappa.num_sets(); ++i)
        fam[kappa.set(i)] = std::set<Tuple>(kappa.maps(i).begin(), kappa.maps(i).end());
    return fam;
}

}  // namespace

TEST_CASE("odd cycle against an edge: width 3 rejects, width 2 does not") {
    auto k3 = clique(3), k2 = clique(2);
    CHECK_FALSE(oracle_decide(k2, k3).satisfiable);
    CHECK_FALSE(kappa_all_nonempty(k_consistency(k2, k3, 3)));
    CHECK(kappa_all_nonempty(k_consistency(k2, k3, 2)));
}

TEST_CASE("empty instance keeps only the empty map") {
    RelStructure inst(Vocabulary({{"E", 2}}), {}, {{}});
    auto kappa = k_consistency(clique(2), inst, 2);
    REQUIRE(kappa.num_sets() == 1);
    CHECK(kappa.maps(0).size() == 1);
    CHECK(kappa_all_nonempty(kappa));
}

TEST_CASE("k-consistency matches a naive fixpoint") {
    std::mt19937_64 rng(17);
    for (int round = 0; round < 60; ++round) {
        RelStructure tmpl = random_structure(rng, 2 + round % 2, 0.5, "a");
        RelStructure inst = random_instance(rng, 3 + round % 3, 3 + round % 4);
        const int k = 1 + round % 3;
        CHECK(as_family(k_consistency(tmpl, inst, k)) == naive_consistency(tmpl, inst, k));
    }
}

TEST_CASE("restrictions of a witness survive") {
    std::mt19937_64 rng(29);
    int satisfiable = 0;
    for (int round = 0; round < 60; ++round) {
        RelStructure tmpl = random_structure(rng, 3, 0.45, "a");
        RelStructure inst = random_instance(rng, 5, 5);
        std::vector<int> w;
        if (!brute_force_hom(tmpl, inst, &w)) continue;
        ++satisfiable;
        for (int k = 1; k <= 3; ++k) {
            auto kappa = k_consistency(tmpl, inst, k);
            CHECK(kappa_all_nonempty(kappa));
            for (std::size_t i = 0; i < kappa.num_sets(); ++i)
                CHECK(kappa.contains(i, restrict_values(iota_domain(inst.size()), w, kappa.set(i))));
        }
    }
    CHECK(satisfiable > 10);
}

TEST_CASE("removal order does not change the fixpoint") {
    std::mt19937_64 rng(41);
    for (int round = 0; round < 5; ++round) {
        RelStructure tmpl = random_structure(rng, 3, 0.4, "a");
        RelStructure inst = random_instance(rng, 6, 7);
        auto reference = k_consistency(tmpl, inst, 2);
        for (std::uint64_t seed = 0; seed < 50; ++seed)
            CHECK(k_consistency(tmpl, inst, 2, {.shuffle_seed = seed}) == reference);
    }
}

TEST_CASE("fixpoint is idempotent and contained in its seed") {
    std::mt19937_64 rng(43);
    for (int round = 0; round < 20; ++round) {
        RelStructure tmpl = random_structure(rng, 3, 0.4, "a");
        RelStructure inst = random_instance(rng, 5, 6);
        auto all = KappaMap::all_homs(tmpl, inst, 2);
        auto once = k_consistency(tmpl, inst, 2);
        CHECK(k_consistency(tmpl, inst, 2, once) == once);
        for (std::size_t i = 0; i < once.num_sets(); ++i)
            for (const auto& f : once.maps(i)) CHECK(all.contains(i, f));

        // a thinner seed yields a thinner fixpoint
        KappaMap thin = all;
        if (thin.maps(1).size() > 1) {
            auto maps = thin.maps(1);
            maps.pop_back();
            thin.set_maps(1, maps);
            auto out = k_consistency(tmpl, inst, 2, thin);
            for (std::size_t i = 0; i < out.num_sets(); ++i)
                for (const auto& f : out.maps(i)) CHECK(once.contains(i, f));
        }
    }
}

TEST_CASE("seed must list homomorphisms on the right subsets") {
    auto k2 = clique(2);
    auto inst = clique(2);
    KappaMap bad = KappaMap::all_homs(k2, inst, 2);
    bad.set_maps(*bad.index_of({0, 1}), {{0, 0}});
    CHECK_THROWS_AS(k_consistency(k2, inst, 2, bad), ContractError);
    CHECK_THROWS_AS(k_consistency(k2, inst, 1, KappaMap::all_homs(k2, inst, 2)), ContractError);
    CHECK_THROWS_AS(k_consistency(k2, inst, 0), ContractError);
}
