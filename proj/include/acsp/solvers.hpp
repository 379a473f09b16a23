// Decision procedures built on the relaxations: AIP, Z-affine k-consistency,
// BA^k, CLAP, CLAP', cohomological k-consistency, and the exact algorithm for
// tractable OR templates.
#pragma once

#include "acsp/relaxations.hpp"
#include "acsp/structure.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace acsp {

enum class Answer { Accept, Reject, Unknown };
std::string to_string(Answer a);

struct SolverStats {
    std::int64_t systems_solved = 0;
    std::int64_t rounds = 0;
    double seconds = 0;
};

// Exceeding max_systems yields Answer::Unknown.
struct SolverBudget {
    std::optional<std::int64_t> max_systems;
};

struct HomCertificate {
    std::vector<int> map;  // template element per instance element
};
// A solution of `system` (equations and pins; integrality per the solver).
struct SolutionCertificate {
    LabeledSystem system;
    Assignment values;
    bool integral = true;
};
struct EmptySetCertificate {
    ElementSet set;
};
struct InfeasibleCertificate {
    std::string reason;
};
using Certificate =
    std::variant<std::monostate, HomCertificate, SolutionCertificate, EmptySetCertificate, InfeasibleCertificate>;

struct Verdict {
    Answer answer = Answer::Unknown;
    Certificate certificate;
    SolverStats stats;
};

// Hom certificates must be homomorphisms; solution certificates must solve
// their system exactly, be integral where the system is an integer reading,
// and satisfy the subset marginal identity. Other certificates pass.
bool check_certificate(const Verdict& v, const RelStructure& tmpl, const RelStructure& inst);

Verdict oracle_verdict(const RelStructure& tmpl, const RelStructure& inst);

// Integer solvability of IP^k without sign constraints.
Verdict aip_decide(const RelStructure& tmpl, const RelStructure& inst, int k, SolverBudget budget = {});
// k-consistency, then integer solvability over the surviving family.
Verdict zaffine_decide(const RelStructure& tmpl, const RelStructure& inst, int k, SolverBudget budget = {});
// Relative interior point of BLP^k, zero its empty support in AIP^k, solve over Z.
Verdict bak_decide(const RelStructure& tmpl, const RelStructure& inst, int k, SolverBudget budget = {});
inline Verdict blpaip_decide(const RelStructure& tmpl, const RelStructure& inst, SolverBudget budget = {}) {
    return bak_decide(tmpl, inst, 1, budget);
}

struct ClapOptions {
    // Scan the candidate images in a seeded random order.
    std::optional<std::uint64_t> shuffle_seed;
    SolverBudget budget;
};
// Candidate image sets per (symbol, instance tuple) after the BLP pruning loop.
using ImageSets = std::map<std::pair<int, Tuple>, std::vector<Tuple>>;
ImageSets clap_image_sets(const RelStructure& tmpl, const RelStructure& inst, ClapOptions opts = {});

// With no constraint tuples at all the per-tuple loop is empty; both CLAP
// variants then run BA^1 once without extra pins.
Verdict clap_decide(const RelStructure& tmpl, const RelStructure& inst, ClapOptions opts = {});
Verdict clap_prime_decide(const RelStructure& tmpl, const RelStructure& inst, ClapOptions opts = {});
// Disjoint union with r fresh elements forming one tuple of the first
// relation that is nonempty in the template (arity r). Unchanged when every
// template relation is empty.
RelStructure pad_for_clap(const RelStructure& tmpl, const RelStructure& inst);

struct CohomologyOptions {
    // Remove a failing map at once and rebuild, instead of batching per round.
    bool eager = false;
    SolverBudget budget;
};
Verdict cohomological_decide(const RelStructure& tmpl, const RelStructure& inst, int k,
                             CohomologyOptions opts = {});

// Exact decision for instances over the vocabulary of ort(a1, a2): part-1 and
// part-2 vertices, their components, and the components of the S-graph.
Verdict solve_ort_exact(const RelStructure& a1, const RelStructure& a2, const RelStructure& inst);

}  // namespace acsp
