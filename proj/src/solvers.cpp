#include "acsp/solvers.hpp"

#include "acsp/consistency.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <numeric>
#include <random>
#include <set>

namespace acsp {

std::string to_string(Answer a) {
    switch (a) {
        case Answer::Accept: return "Accept";
        case Answer::Reject: return "Reject";
        case Answer::Unknown: return "Unknown";
    }
    return "Unknown";
}

namespace {

struct BudgetExceeded {};

class Tracker {
public:
    Tracker(SolverStats& stats, SolverBudget budget) : stats_(stats), budget_(budget) {}
    // Call before each system solve.
    void solve() {
        if (budget_.max_systems && stats_.systems_solved >= *budget_.max_systems) throw BudgetExceeded{};
        ++stats_.systems_solved;
    }
    void round() { ++stats_.rounds; }

private:
    SolverStats& stats_;
    SolverBudget budget_;
};

Verdict run(SolverBudget budget, const std::function<Verdict(Tracker&)>& body) {
    const auto start = std::chrono::steady_clock::now();
    SolverStats stats;
    Tracker tracker(stats, budget);
    Verdict v;
    try {
        v = body(tracker);
    } catch (const BudgetExceeded&) {
        v = Verdict{};
    }
    v.stats = stats;
    v.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return v;
}

Verdict accept(LabeledSystem sys, Assignment values, bool integral = true) {
    return {Answer::Accept, SolutionCertificate{std::move(sys), std::move(values), integral}, {}};
}
Verdict reject(std::string reason) { return {Answer::Reject, InfeasibleCertificate{std::move(reason)}, {}}; }
Verdict reject_empty(ElementSet x) { return {Answer::Reject, EmptySetCertificate{std::move(x)}, {}}; }

std::optional<ElementSet> first_empty(const KappaMap& kappa) {
    for (std::size_t i = 0; i < kappa.num_sets(); ++i)
        if (kappa.maps(i).empty()) return kappa.set(i);
    return std::nullopt;
}

// BA^k on a prepared IP^k system whose pins are already in place.
Verdict bak_core(LabeledSystem sys, Tracker& t) {
    sys.system.set_all_nonneg();
    t.solve();
    auto interior = relative_interior_point(sys.system);
    if (!interior) return reject("BLP infeasible");
    for (int v = 0; v < sys.num_vars(); ++v)
        if ((*interior)[static_cast<std::size_t>(v)] == 0) sys.system.pin(v, 0);
    sys.system.clear_nonneg();
    t.solve();
    auto sol = solve_integral(sys.system);
    if (!sol) return reject("AIP infeasible on the BLP support");
    return accept(std::move(sys), std::move(*sol));
}

}  // namespace

bool check_certificate(const Verdict& v, const RelStructure& tmpl, const RelStructure& inst) {
    if (const auto* hom = std::get_if<HomCertificate>(&v.certificate)) {
        if (static_cast<int>(hom->map.size()) != inst.size()) return false;
        std::vector<int> dom(static_cast<std::size_t>(inst.size()));
        std::iota(dom.begin(), dom.end(), 0);
        for (int x : hom->map)
            if (x < 0 || x >= tmpl.size()) return false;
        return is_homomorphism(PartialHom{dom, hom->map}, inst, tmpl);
    }
    if (const auto* sol = std::get_if<SolutionCertificate>(&v.certificate)) {
        if (!check_solution(sol->system.system, sol->values)) return false;
        if (sol->integral)
            for (const auto& x : sol->values)
                if (!is_integer(x)) return false;
        return check_subset_marginals(sol->system, sol->values);
    }
    return true;
}

Verdict oracle_verdict(const RelStructure& tmpl, const RelStructure& inst) {
    return run({}, [&](Tracker& t) {
        t.solve();
        auto res = oracle_decide(tmpl, inst);
        if (!res.satisfiable) return reject("no homomorphism");
        return Verdict{Answer::Accept, HomCertificate{res.witness}, {}};
    });
}

Verdict aip_decide(const RelStructure& tmpl, const RelStructure& inst, int k, SolverBudget budget) {
    if (k < 1) throw ContractError("k must be positive");
    return run(budget, [&](Tracker& t) {
        LabeledSystem sys = build_ipk(tmpl, inst, k);
        t.solve();
        auto sol = solve_integral(sys.system);
        if (!sol) return reject("AIP infeasible");
        return accept(std::move(sys), std::move(*sol));
    });
}

Verdict zaffine_decide(const RelStructure& tmpl, const RelStructure& inst, int k, SolverBudget budget) {
    if (k < 1) throw ContractError("k must be positive");
    return run(budget, [&](Tracker& t) {
        t.round();
        KappaMap kappa = k_consistency(tmpl, inst, k);
        if (auto x = first_empty(kappa)) return reject_empty(*x);
        LabeledSystem sys = build_zaffine(tmpl, inst, k, kappa, {.one_point_marginals = true});
        t.solve();
        auto sol = solve_integral(sys.system);
        if (!sol) return reject("Z-affine system infeasible");
        return accept(std::move(sys), std::move(*sol));
    });
}

Verdict bak_decide(const RelStructure& tmpl, const RelStructure& inst, int k, SolverBudget budget) {
    if (k < 1) throw ContractError("k must be positive");
    return run(budget, [&](Tracker& t) { return bak_core(build_ipk(tmpl, inst, k), t); });
}

// ---------------------------------------------------------------- CLAP

namespace {

struct Candidate {
    int symbol;
    Tuple b;
    Tuple a;
    int var;
};

struct ClapState {
    LabeledSystem blp;
    std::vector<Candidate> candidates;  // every (R, b, a) with a in R^A, lexicographic
    std::vector<char> alive;
    bool no_tuples = true;
};

ClapState clap_init(const RelStructure& tmpl, const RelStructure& inst) {
    ClapState st{build_ipk(tmpl, inst, 1), {}, {}, true};
    const auto& vocab = inst.vocabulary();
    for (std::size_t s = 0; s < vocab.size(); ++s)
        for (const auto& b : inst.relation(s)) {
            st.no_tuples = false;
            for (const auto& a : tmpl.relation(s)) {
                auto var = st.blp.find(VarKey::mu(static_cast<int>(s), b, a));
                st.candidates.push_back({static_cast<int>(s), b, a, *var});
            }
        }
    st.alive.assign(st.candidates.size(), 1);
    return st;
}

LinSystem with_zero_pins(const ClapState& st) {
    LinSystem sys = st.blp.system;
    for (std::size_t i = 0; i < st.candidates.size(); ++i)
        if (!st.alive[i]) sys.pin(st.candidates[i].var, 0);
    return sys;
}

void clap_prune(ClapState& st, const ClapOptions& opts, Tracker& t) {
    std::vector<std::size_t> order(st.candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(opts.shuffle_seed.value_or(0));
    bool changed = true;
    while (changed) {
        changed = false;
        t.round();
        if (opts.shuffle_seed) std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t i : order) {
            if (!st.alive[i]) continue;
            LinSystem sys = with_zero_pins(st);
            sys.pin(st.candidates[i].var, 1);
            sys.set_all_nonneg();
            t.solve();
            if (!lp_feasible(sys)) {
                st.alive[i] = 0;
                changed = true;
            }
        }
    }
}

ImageSets image_sets(const ClapState& st, const RelStructure& inst) {
    ImageSets out;
    for (std::size_t s = 0; s < inst.vocabulary().size(); ++s)
        for (const auto& b : inst.relation(s)) out[{static_cast<int>(s), b}];
    for (std::size_t i = 0; i < st.candidates.size(); ++i)
        if (st.alive[i]) out[{st.candidates[i].symbol, st.candidates[i].b}].push_back(st.candidates[i].a);
    return out;
}

std::optional<Verdict> clap_empty_image(const ClapState& st, const RelStructure& inst) {
    for (const auto& [key, images] : image_sets(st, inst))
        if (images.empty())
            return reject("no candidate image left for a tuple of " + inst.vocabulary()[static_cast<std::size_t>(key.first)].name);
    return std::nullopt;
}

LabeledSystem pinned_blp(const ClapState& st) {
    LabeledSystem sys = st.blp;
    sys.system = with_zero_pins(st);
    return sys;
}

}  // namespace

ImageSets clap_image_sets(const RelStructure& tmpl, const RelStructure& inst, ClapOptions opts) {
    ClapState st = clap_init(tmpl, inst);
    SolverStats stats;
    Tracker t(stats, {});
    clap_prune(st, opts, t);
    return image_sets(st, inst);
}

Verdict clap_decide(const RelStructure& tmpl, const RelStructure& inst, ClapOptions opts) {
    return run(opts.budget, [&](Tracker& t) {
        ClapState st = clap_init(tmpl, inst);
        if (st.no_tuples) return bak_core(st.blp, t);
        clap_prune(st, opts, t);
        if (auto r = clap_empty_image(st, inst)) return *r;
        for (std::size_t i = 0; i < st.candidates.size(); ++i) {
            if (!st.alive[i]) continue;
            LabeledSystem sys = pinned_blp(st);
            sys.system.pin(st.candidates[i].var, 1);
            Verdict v = bak_core(std::move(sys), t);
            if (v.answer == Answer::Accept) return v;
        }
        return reject("BA^1 rejects every fixed image");
    });
}

Verdict clap_prime_decide(const RelStructure& tmpl, const RelStructure& inst, ClapOptions opts) {
    return run(opts.budget, [&](Tracker& t) {
        ClapState st = clap_init(tmpl, inst);
        if (st.no_tuples) return bak_core(st.blp, t);
        clap_prune(st, opts, t);
        if (auto r = clap_empty_image(st, inst)) return *r;
        return bak_core(pinned_blp(st), t);
    });
}

RelStructure pad_for_clap(const RelStructure& tmpl, const RelStructure& inst) {
    const auto& vocab = tmpl.vocabulary();
    for (std::size_t s = 0; s < vocab.size(); ++s) {
        if (tmpl.relation(s).empty()) continue;
        const int r = vocab[s].arity;
        std::set<std::string> taken(inst.universe().begin(), inst.universe().end());
        std::vector<std::string> universe = inst.universe();
        Tuple tuple;
        for (int i = 0, id = 0; i < r; ++i) {
            std::string name;
            do name = "pad" + std::to_string(id++);
            while (taken.count(name));
            tuple.push_back(static_cast<int>(universe.size()));
            universe.push_back(name);
        }
        auto rels = inst.relations();
        rels[s].push_back(tuple);
        return RelStructure(inst.vocabulary(), std::move(universe), std::move(rels));
    }
    return inst;
}

// ---------------------------------------------------------------- cohomology

Verdict cohomological_decide(const RelStructure& tmpl, const RelStructure& inst, int k, CohomologyOptions opts) {
    if (k < 1) throw ContractError("k must be positive");
    return run(opts.budget, [&](Tracker& t) {
        KappaMap family = KappaMap::all_homs(tmpl, inst, k);
        while (true) {
            t.round();
            family = k_consistency(tmpl, inst, k, family);
            if (auto x = first_empty(family)) return reject_empty(*x);
            LabeledSystem sys = build_zaffine(tmpl, inst, k, family, {.one_point_marginals = true});
            t.solve();
            auto lattice = IntegerLattice::solve(sys.system);
            if (!lattice) return reject_empty({});  // every pinned check fails, so H(empty) empties
            std::vector<std::pair<std::size_t, Tuple>> failed;
            for (std::size_t i = 0; i < family.num_sets() && (failed.empty() || !opts.eager); ++i) {
                const auto& x = family.set(i);
                const auto& maps = family.maps(i);
                std::vector<int> vars;
                for (const auto& f : maps) vars.push_back(*sys.find(VarKey::lhom(x, f)));
                for (std::size_t j = 0; j < maps.size(); ++j) {
                    std::vector<std::pair<int, BigInt>> fixes;
                    for (std::size_t l = 0; l < maps.size(); ++l) fixes.emplace_back(vars[l], l == j ? 1 : 0);
                    t.solve();
                    if (!lattice->feasible_with(fixes)) {
                        failed.emplace_back(i, maps[j]);
                        if (opts.eager) break;
                    }
                }
            }
            if (failed.empty()) return accept(std::move(sys), lattice->particular());
            for (const auto& [i, f] : failed) {
                auto maps = family.maps(i);
                maps.erase(std::find(maps.begin(), maps.end(), f));
                family.set_maps(i, std::move(maps));
            }
        }
    });
}

// ---------------------------------------------------------------- exact OR algorithm

namespace {

struct UnionFind {
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    }
    void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
    std::vector<int> parent;
};

}  // namespace

Verdict solve_ort_exact(const RelStructure& a1, const RelStructure& a2, const RelStructure& inst) {
    // symbol of inst -> (part, symbol in that part); part 0 is S
    const auto& vocab = inst.vocabulary();
    std::vector<std::pair<int, std::size_t>> origin;
    for (const auto& sym : vocab.symbols()) {
        if (auto s = a1.vocabulary().find(sym.name); s && a1.vocabulary()[*s].arity == sym.arity)
            origin.emplace_back(1, *s);
        else if (auto s2 = a2.vocabulary().find(sym.name); s2 && a2.vocabulary()[*s2].arity == sym.arity)
            origin.emplace_back(2, *s2);
        else if (sym.name == "S" && sym.arity == 2)
            origin.emplace_back(0, 0);
        else
            throw ContractError("symbol " + sym.name + " is not in the OR vocabulary");
    }
    return run({}, [&](Tracker& t) {
        const int n = inst.size();
        const int c1 = a1.size() + a2.size(), c2 = c1 + 1;
        std::vector<int> side(static_cast<std::size_t>(n), 0);
        auto mark = [&](int x, int part) {
            int& s = side[static_cast<std::size_t>(x)];
            if (s != 0 && s != part) return false;
            s = part;
            return true;
        };
        UnionFind comp(n);
        for (std::size_t s = 0; s < vocab.size(); ++s) {
            const int part = origin[s].first;
            for (const auto& tup : inst.relation(s)) {
                if (part == 0) {
                    if (!mark(tup[0], 1) || !mark(tup[1], 2))
                        return reject("element " + inst.universe()[static_cast<std::size_t>(tup[0])] + " or " +
                                      inst.universe()[static_cast<std::size_t>(tup[1])] + " lies in both parts");
                    continue;
                }
                for (int x : tup)
                    if (!mark(x, part))
                        return reject("element " + inst.universe()[static_cast<std::size_t>(x)] + " lies in both parts");
                for (int x : tup) comp.unite(x, tup[0]);
            }
        }
        // S joins part components into S-components
        UnionFind scomp(n);
        for (int x = 0; x < n; ++x) scomp.unite(x, comp.find(x));
        for (std::size_t s = 0; s < vocab.size(); ++s)
            if (origin[s].first == 0)
                for (const auto& tup : inst.relation(s)) scomp.unite(tup[0], tup[1]);

        std::map<int, std::array<std::vector<int>, 2>> components;
        for (int x = 0; x < n; ++x)
            if (side[static_cast<std::size_t>(x)] != 0)
                components[scomp.find(x)][static_cast<std::size_t>(side[static_cast<std::size_t>(x)] - 1)].push_back(x);

        std::vector<int> witness(static_cast<std::size_t>(n), c1);
        for (const auto& [root, parts] : components) {
            bool solved = false;
            for (int i = 1; i <= 2 && !solved; ++i) {
                const RelStructure& part = i == 1 ? a1 : a2;
                const auto& elems = parts[static_cast<std::size_t>(i - 1)];
                // the part-i substructure over part-i symbols only
                std::vector<int> local(static_cast<std::size_t>(n), -1);
                std::vector<std::string> names;
                for (int x : elems) {
                    local[static_cast<std::size_t>(x)] = static_cast<int>(names.size());
                    names.push_back(inst.universe()[static_cast<std::size_t>(x)]);
                }
                std::vector<std::vector<Tuple>> rels(part.vocabulary().size());
                for (std::size_t s = 0; s < vocab.size(); ++s) {
                    if (origin[s].first != i) continue;
                    for (const auto& tup : inst.relation(s)) {
                        if (local[static_cast<std::size_t>(tup[0])] < 0) continue;
                        Tuple lt;
                        for (int x : tup) lt.push_back(local[static_cast<std::size_t>(x)]);
                        rels[origin[s].second].push_back(std::move(lt));
                    }
                }
                t.solve();
                auto res = oracle_decide(part, RelStructure(part.vocabulary(), names, std::move(rels)));
                if (!res.satisfiable) continue;
                solved = true;
                const int offset = i == 1 ? 0 : a1.size();
                for (std::size_t j = 0; j < elems.size(); ++j)
                    witness[static_cast<std::size_t>(elems[j])] = res.witness[j] + offset;
                for (int x : parts[static_cast<std::size_t>(2 - i)]) witness[static_cast<std::size_t>(x)] = i == 1 ? c2 : c1;
            }
            if (!solved) return reject("an S-component is unsatisfiable on both sides");
        }
        return Verdict{Answer::Accept, HomCertificate{witness}, {}};
    });
}

}  // namespace acsp
