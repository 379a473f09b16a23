// Small structures and brute-force references shared by the unit tests.
#pragma once

#include "acsp/structure.hpp"

#include <random>
#include <string>
#include <utility>
#include <vector>

namespace acsp::testing {

inline std::vector<std::string> names(const std::string& prefix, int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

inline RelStructure graph(int n, const std::vector<std::pair<int, int>>& edges, bool symmetric = true) {
    std::vector<Tuple> e;
    for (auto [a, b] : edges) {
        e.push_back({a, b});
        if (symmetric) e.push_back({b, a});
    }
    return RelStructure(Vocabulary({{"E", 2}}), names("v", n), {e});
}

inline RelStructure clique(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.push_back({i, j});
    return graph(n, e);
}

// Vocabulary {U/1, E/2, T/3}; each possible tuple present with probability density.
inline RelStructure random_structure(std::mt19937_64& rng, int n, double density, const std::string& prefix) {
    Vocabulary vocab({{"U", 1}, {"E", 2}, {"T", 3}});
    std::bernoulli_distribution coin(density);
    std::vector<std::vector<Tuple>> rels(3);
    for (int a = 0; a < n; ++a) {
        if (coin(rng)) rels[0].push_back({a});
        for (int b = 0; b < n; ++b) {
            if (coin(rng)) rels[1].push_back({a, b});
            for (int c = 0; c < n; ++c)
                if (coin(rng)) rels[2].push_back({a, b, c});
        }
    }
    return RelStructure(vocab, names(prefix, n), rels);
}

// Instance over the same vocabulary with a handful of tuples.
inline RelStructure random_instance(std::mt19937_64& rng, int n, int tuples) {
    Vocabulary vocab({{"U", 1}, {"E", 2}, {"T", 3}});
    std::vector<std::vector<Tuple>> rels(3);
    std::uniform_int_distribution<int> sym(0, 2), elem(0, n - 1);
    for (int t = 0; t < tuples; ++t) {
        int s = sym(rng);
        Tuple tup;
        for (int p = 0; p <= s; ++p) tup.push_back(elem(rng));
        rels[static_cast<std::size_t>(s)].push_back(tup);
    }
    return RelStructure(vocab, names("b", n), rels);
}

// Same structure with every element and symbol name prefixed.
inline RelStructure relabel(const RelStructure& s, const std::string& element_prefix, const std::string& symbol_prefix) {
    std::vector<Symbol> symbols;
    for (const auto& sym : s.vocabulary().symbols()) symbols.push_back({symbol_prefix + sym.name, sym.arity});
    std::vector<std::string> universe;
    for (const auto& x : s.universe()) universe.push_back(element_prefix + x);
    return RelStructure(Vocabulary(symbols), universe, s.relations());
}

inline std::vector<int> iota_domain(int n) {
    std::vector<int> dom(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) dom[static_cast<std::size_t>(i)] = i;
    return dom;
}

// Every total map instance -> template, checked one by one.
inline bool brute_force_hom(const RelStructure& tmpl, const RelStructure& inst, std::vector<int>* witness = nullptr) {
    const int n = inst.size(), m = tmpl.size();
    std::vector<int> vals(static_cast<std::size_t>(n), 0);
    const auto dom = iota_domain(n);
    if (n == 0) return true;
    if (m == 0) return false;
    while (true) {
        if (is_homomorphism(PartialHom{dom, vals}, inst, tmpl)) {
            if (witness) *witness = vals;
            return true;
        }
        int i = n - 1;
        while (i >= 0 && ++vals[static_cast<std::size_t>(i)] == m) vals[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) return false;
    }
}

}  // namespace acsp::testing
