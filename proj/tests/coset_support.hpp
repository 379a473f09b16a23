// Random coset instances and an exhaustive reference solver.
#pragma once

#include "acsp/groups.hpp"
#include "acsp/structure.hpp"

#include <random>

namespace acsp::testing {

inline CosetInstance random_coset_instance(std::mt19937_64& rng, const FiniteGroup& g, int vars, int constraints,
                                           int max_arity, int max_gens = 2) {
    std::vector<std::string> names;
    for (int i = 0; i < vars; ++i) names.push_back("x" + std::to_string(i));
    std::uniform_int_distribution<int> elem(0, g.order() - 1), var(0, vars - 1), arity(1, max_arity),
        ngens(0, max_gens);
    std::vector<CosetConstraint> cs;
    for (int c = 0; c < constraints; ++c) {
        const int r = arity(rng);
        CosetConstraint con;
        for (int j = 0; j < r; ++j) con.scope.push_back(names[static_cast<std::size_t>(var(rng))]);
        std::vector<Tuple> gens(static_cast<std::size_t>(ngens(rng)));
        for (auto& t : gens)
            for (int j = 0; j < r; ++j) t.push_back(elem(rng));
        con.subgroup = subgroup_closure(g, gens, r);
        for (int j = 0; j < r; ++j) con.rep.push_back(elem(rng));
        cs.push_back(std::move(con));
    }
    return CosetInstance(g, names, cs);
}

// Every assignment Gamma^vars, in lexicographic order.
inline std::optional<std::vector<int>> brute_force_coset(const CosetInstance& inst) {
    const int n = static_cast<int>(inst.variables().size());
    const int m = inst.group().order();
    std::vector<int> vals(static_cast<std::size_t>(n), 0);
    while (true) {
        if (inst.satisfied_by(vals)) return vals;
        int i = n - 1;
        while (i >= 0 && ++vals[static_cast<std::size_t>(i)] == m) vals[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) return std::nullopt;
    }
}

// Structure with the single relation rel over the group universe.
inline RelStructure single_relation(const FiniteGroup& g, const std::vector<Tuple>& rel) {
    return RelStructure(Vocabulary({{"R", static_cast<int>(rel.front().size())}}), g.names(), {rel});
}

// x y^-1 z
inline OpTable group_maltsev(const FiniteGroup& g) {
    return OpTable::from_function(g.order(), 3, [&](std::span<const int> a) {
        return g.mul(g.mul(a[0], g.inv(a[1])), a[2]);
    });
}

inline std::vector<Tuple> random_coset(std::mt19937_64& rng, const FiniteGroup& g, int r, int gens) {
    std::uniform_int_distribution<int> elem(0, g.order() - 1);
    std::vector<Tuple> gs(static_cast<std::size_t>(gens));
    for (auto& t : gs)
        for (int j = 0; j < r; ++j) t.push_back(elem(rng));
    Tuple rep;
    for (int j = 0; j < r; ++j) rep.push_back(elem(rng));
    return right_coset(g, subgroup_closure(g, gs, r), rep);
}

inline bool coset_satisfiable(const CosetInstance& inst) {
    auto s = coset_to_structures(inst);
    return oracle_decide(s.tmpl, s.inst).satisfiable;
}

}  // namespace acsp::testing
