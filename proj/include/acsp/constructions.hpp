// Graphs with orientations, Tseitin systems, homomorphism OR-constructions
// and the monotone 3-SAT reduction.
#pragma once

#include "acsp/groups.hpp"
#include "acsp/structure.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace acsp {

// Arcs double as the edge list: edge e is the unordered pair of arcs()[e].
class OrientedGraph {
public:
    OrientedGraph() = default;
    // Rejects self-loops, unknown endpoints and a second arc on the same pair.
    OrientedGraph(std::vector<std::string> vertices, std::vector<std::pair<int, int>> arcs);

    // Vertices v0..v(n-1), each edge oriented from the smaller index.
    static OrientedGraph from_edges(int n, const std::vector<std::pair<int, int>>& edges);
    static OrientedGraph complete(int n);
    static OrientedGraph petersen();
    static OrientedGraph heawood();
    static OrientedGraph path(int n);

    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    int num_edges() const { return static_cast<int>(arcs_.size()); }
    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::vector<std::pair<int, int>>& arcs() const { return arcs_; }
    // Incident edge indices in increasing order.
    const std::vector<int>& incident(int v) const { return incident_[static_cast<std::size_t>(v)]; }
    int degree(int v) const { return static_cast<int>(incident(v).size()); }
    int other_end(int edge, int v) const;
    std::optional<int> vertex(const std::string& name) const;

    friend bool operator==(const OrientedGraph& a, const OrientedGraph& b) {
        return a.vertices_ == b.vertices_ && a.arcs_ == b.arcs_;
    }

private:
    std::vector<std::string> vertices_;
    std::vector<std::pair<int, int>> arcs_;
    std::vector<std::vector<int>> incident_;
};

// At least three vertices, connected, no cut vertex.
bool check_2_connected(const OrientedGraph& g);
bool check_3_regular(const OrientedGraph& g);

struct ExpansionWitness {
    std::vector<int> edges;  // X-hat, sorted, contains X
    double ratio = 1.0;      // |X-hat| / |X|; infinite when X is empty and X-hat is not
};
// Keeps the largest block (at least three vertices) of the graph without X
// and adds every other edge to X. nullopt when edges remain but none lies on
// a cycle.
std::optional<ExpansionWitness> expansion_witness(const OrientedGraph& g, const std::vector<int>& edges);

// Charge per vertex, as group elements.
using ChargeMap = std::vector<int>;

// One variable "<prefix>:<u>><v>" per arc, in arc order, and per vertex of
// positive degree the coset of solutions of
//   sum over outgoing y_e - sum over incoming y_e = charge(v)
// over the incident edges in index order.
CosetInstance tseitin_instance(const OrientedGraph& g, const FiniteGroup& group, const ChargeMap& charge,
                               const std::string& prefix = "y");

// Group element per assigned edge.
using EdgeAssignment = std::map<int, int>;

// The cut constraint C(W); ContractError when an edge leaving or entering W
// is unassigned.
bool check_cut_constraint(const OrientedGraph& g, const FiniteGroup& group, const ChargeMap& charge,
                          const EdgeAssignment& f, const std::vector<int>& cut);
// C(W) for every W with 1 <= |W| <= level whose boundary is assigned. A level
// above |V| is clamped with a warning on stderr.
bool robustly_consistent(const OrientedGraph& g, const FiniteGroup& group, const ChargeMap& charge,
                         const EdgeAssignment& f, int level);
// The level n/3 used for robust consistency.
inline int robust_level(const OrientedGraph& g) { return g.num_vertices() / 3; }

// Universe B1 then B2; relations of B1, then of B2, then S = B1 x B2.
RelStructure or_instance(const RelStructure& b1, const RelStructure& b2);

// Universe A1, A2, c1, c2. A relation R of A_i becomes
//   R^{A_i} + (c_i,..,c_i) + tuples over W_i and c_i that contain c_i and some element of W_i,
// and S = A1 x (W2 + c2)  +  (W1 + c1) x A2.
RelStructure or_template(const RelStructure& a1, const RelStructure& a2, const std::vector<int>& w1,
                         const std::vector<int>& w2);
RelStructure ort(const RelStructure& a1, const RelStructure& a2);
RelStructure ornpc(const RelStructure& a1, const RelStructure& a2);

// Ternary operation on the universe of ort(a1, a2) built from Maltsev
// polymorphisms f1, f2 of the parts.
OpTable or_maltsev(const RelStructure& a1, const RelStructure& a2, const OpTable& f1, const OpTable& f2);

// Literals are +v or -v for variables 1..num_vars.
using Clause = std::array<int, 3>;
struct Monotone3Cnf {
    int num_vars = 0;
    std::vector<Clause> clauses;
};
// One-element structure with an empty ternary relation of the given name.
RelStructure empty_unit_structure(const std::string& symbol, const std::string& element);
// ornpc of the unit structures over R1 and R2: universe a1, a2, c1, c2.
RelStructure monotone3sat_template();
// Universe x1..xn then nx1..nxn; positive clauses on R1, negative clauses on
// R2 over the negated copies, S(xi, nxi).
RelStructure monotone3sat_to_ornpc(const Monotone3Cnf& cnf);
// The homomorphism induced by a truth assignment (index v-1 for variable v).
std::vector<int> monotone3sat_hom(const Monotone3Cnf& cnf, const std::vector<bool>& assignment);

// x1 + x2 + x3 = 1 and x1 + x2 + x3 = 0 over an Abelian group, with 1 the
// first non-identity element.
CosetInstance minimal_no_instance(const FiniteGroup& group);

// Pairing model with rejection; vertices v0.., edges sorted and oriented
// from the smaller index.
OrientedGraph random_3regular_2connected(int n, std::uint64_t seed);

enum class OrKind { Tractable, Intractable };

// OR-construction of a Z2 and a Z3 Tseitin system on the same 3-regular
// graph, over the full ternary coset templates.
struct TseitinOr {
    RelStructure tmpl1, tmpl2;  // ternary coset templates over Z2 and Z3
    RelStructure inst1, inst2;  // Tseitin systems, variables y:.. and z:..
    RelStructure tmpl;
    RelStructure instance;
};
TseitinOr tseitin_or(const OrientedGraph& g, const ChargeMap& charge_z2, const ChargeMap& charge_z3, OrKind kind);
// Charge 1 on the first vertex for both systems, so both sides are unsatisfiable.
TseitinOr tseitin_or_unsat(const OrientedGraph& g, OrKind kind);

}  // namespace acsp
