// Finite groups, subgroups and cosets of their direct powers, and coset
// constraint problems with their structure and Z_p-equation encodings.
#pragma once

#include "acsp/linalg.hpp"
#include "acsp/structure.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace acsp {

// Elements are indices 0..order-1. Small groups keep a multiplication table;
// symmetric groups multiply permutations on demand.
class FiniteGroup {
public:
    // Checks closure, associativity, identity and inverses.
    FiniteGroup(std::vector<std::string> names, std::vector<std::vector<int>> table);

    static FiniteGroup cyclic(int n);
    // Permutations of {1..d} in one-line notation, ordered lexicographically;
    // the product a*b applies a first, then b.
    static FiniteGroup symmetric(int d);
    // Z9 x Z3 with (a,b)(c,d) = (a + 4^b c, b + d); the generator of Z3 acts by a -> 4a.
    static FiniteGroup semidirect_z9_z3();
    static FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h);

    int order() const { return static_cast<int>(names_.size()); }
    int identity() const { return identity_; }
    int mul(int a, int b) const;
    int inv(int a) const;
    int pow(int a, long long e) const;
    int element_order(int a) const;
    bool is_abelian() const;

    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(int a) const { return names_[static_cast<std::size_t>(a)]; }
    std::optional<int> element(const std::string& name) const;
    // Full table; ResourceError for permutation groups above the table limit.
    std::vector<std::vector<int>> table() const;

    friend bool operator==(const FiniteGroup& a, const FiniteGroup& b);

private:
    FiniteGroup() = default;
    void index_names();
    int rank(const std::vector<int>& perm) const;

    std::vector<std::string> names_;
    std::vector<std::vector<int>> table_;  // empty for permutation groups
    std::vector<std::vector<int>> perms_;  // one-line images, 0-based
    std::vector<int> inverse_;
    std::unordered_map<std::string, int> index_;
    int identity_ = 0;
};

inline constexpr int kMaxTableOrder = 2048;
inline constexpr int kMaxSymmetricDegree = 8;

// Componentwise operations on Gamma^r.
Tuple tuple_mul(const FiniteGroup& g, const Tuple& a, const Tuple& b);
Tuple tuple_inv(const FiniteGroup& g, const Tuple& a);

// Smallest subgroup of Gamma^r containing gens, sorted.
std::vector<Tuple> subgroup_closure(const FiniteGroup& g, const std::vector<Tuple>& gens, int r);
bool is_subgroup(const FiniteGroup& g, const std::vector<Tuple>& set, int r);
// Greedy generating set: scans the sorted subgroup and keeps what is not yet generated.
std::vector<Tuple> generating_set(const FiniteGroup& g, const std::vector<Tuple>& subgroup);
// The right coset {d * rep : d in subgroup}, sorted.
std::vector<Tuple> right_coset(const FiniteGroup& g, const std::vector<Tuple>& subgroup, const Tuple& rep);
// Every subgroup of Gamma^r; ResourceError when |Gamma|^r exceeds the limit.
std::vector<std::vector<Tuple>> all_subgroups(const FiniteGroup& g, int r);
inline constexpr int kMaxPowerOrder = 256;

int commutator(const FiniteGroup& g, int a, int b);
std::vector<int> commutator_subgroup(const FiniteGroup& g);
bool is_2_nilpotent(const FiniteGroup& g);
// Least common multiple of the element orders.
int group_exponent(const FiniteGroup& g, const std::vector<int>& elements);
// x + y = x y [x,y]^((m-1)/2), m the exponent of the commutator subgroup.
// Requires a 2-nilpotent group of odd order.
FiniteGroup baer_reduct(const FiniteGroup& g);

struct CosetConstraint {
    std::vector<std::string> scope;
    std::vector<Tuple> subgroup;  // sorted, a subgroup of Gamma^r
    Tuple rep;

    int arity() const { return static_cast<int>(scope.size()); }
    friend bool operator==(const CosetConstraint&, const CosetConstraint&) = default;
};

class CosetInstance {
public:
    // Validates scopes, arities and the subgroup property of every constraint.
    CosetInstance(FiniteGroup group, std::vector<std::string> variables, std::vector<CosetConstraint> constraints);

    const FiniteGroup& group() const { return group_; }
    const std::vector<std::string>& variables() const { return variables_; }
    const std::vector<CosetConstraint>& constraints() const { return constraints_; }
    int variable_index(const std::string& name) const;
    std::vector<int> scope_indices(std::size_t constraint) const;
    std::vector<Tuple> coset(std::size_t constraint) const;

    // Group element per variable.
    bool satisfied_by(const std::vector<int>& assignment) const;

    friend bool operator==(const CosetInstance& a, const CosetInstance& b) {
        return a.group_ == b.group_ && a.variables_ == b.variables_ && a.constraints_ == b.constraints_;
    }

private:
    FiniteGroup group_;
    std::vector<std::string> variables_;
    std::vector<CosetConstraint> constraints_;
};

struct CosetStructures {
    RelStructure tmpl;
    RelStructure inst;
};

// One symbol per distinct coset occurring in the instance, in order of first
// occurrence; the template universe is the group.
CosetStructures coset_to_structures(const CosetInstance& inst, const std::string& symbol_prefix = "C");

// The template with every coset of every subgroup of Gamma^r as a relation,
// sorted; element names and symbols carry the given prefixes.
RelStructure coset_template(const FiniteGroup& g, int r, const std::string& element_prefix = "",
                            const std::string& symbol_prefix = "C");
// The instance over a template whose universe is the group (by index) and
// which has a relation equal to each occurring coset.
RelStructure coset_instance_over(const CosetInstance& inst, const RelStructure& tmpl);

// Linear system over Z_p: variables 0..n-1 are the instance variables in the
// additive coordinates of the group, later ones are fresh generator weights.
struct ModularSystem {
    int modulus = 2;
    int instance_vars = 0;
    LinSystem system;  // integer coefficients, read modulo `modulus`
    std::vector<int> to_additive;    // group element -> residue
    std::vector<int> from_additive;  // residue -> group element
};
ModularSystem coset_to_equations(const CosetInstance& inst);
// Residues per variable, or nullopt when the system is inconsistent mod p.
std::optional<std::vector<int>> solve_mod_prime(const ModularSystem& sys);

}  // namespace acsp
