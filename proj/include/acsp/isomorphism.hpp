// Colored structures, CFI graphs of coset instances, the isomorphism
// OR-construction and the encoding of bounded color class isomorphism as a
// coset instance over Sym(d).
#pragma once

#include "acsp/groups.hpp"
#include "acsp/structure.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace acsp {

struct ColoredStructure {
    RelStructure base;
    std::vector<std::string> color;  // per element

    ColoredStructure() = default;
    // ContractError unless there is one color per element.
    ColoredStructure(RelStructure base, std::vector<std::string> color);

    int size() const { return base.size(); }
    // Elements per color, in element order; colors sorted by name.
    std::map<std::string, std::vector<int>> classes() const;
    int max_class_size() const;

    friend bool operator==(const ColoredStructure&, const ColoredStructure&) = default;
};

// Per color of a color set, a permutation of positions within the class.
using ClassPerm = std::vector<std::vector<int>>;

// Vertices "x@g" per variable and group element, "C<i>@g1,..,gr" per
// constraint and coset tuple; edge relations E1..Er joining coordinate i
// in both directions. The second structure uses the subgroups in place of
// the cosets and shares all colors.
std::pair<ColoredStructure, ColoredStructure> cfi_pair(const CosetInstance& inst);

struct IsoResult {
    bool isomorphic = false;
    std::vector<int> witness;  // element of b per element of a
};
// Color-preserving isomorphism by backtracking.
IsoResult iso_oracle(const ColoredStructure& a, const ColoredStructure& b);
bool is_isomorphism(const ColoredStructure& a, const ColoredStructure& b, const std::vector<int>& map);

// Reserved relation symbols of the sequence encoding.
std::string seq_entry_symbol(int entry);  // all pairs inside entry i (1-based)
inline const std::string kSeqOrderSymbol = "seq_order";  // entry i before entry j

// Colors of entry i become "<i>:<color>". ContractError on an empty list,
// on reserved symbol names, or on a symbol used with two arities.
ColoredStructure seq_encode(const std::vector<ColoredStructure>& entries);

// Disjoint unions of the sequence encodings over even and odd parity vectors.
// Elements of the component with parity vector a are prefixed "a1..aj|".
std::pair<ColoredStructure, ColoredStructure> or_iso(
    const std::vector<std::pair<ColoredStructure, ColoredStructure>>& pairs);

inline constexpr int kMaxClassSize = 8;

// Colors of `colors` in the given order; elements of a class in element order.
// ResourceError for a class above kMaxClassSize.
std::vector<ClassPerm> class_automorphisms(const ColoredStructure& a, const std::vector<std::string>& colors);
// Lexicographically first isomorphism of a[colors] onto b[colors].
std::optional<ClassPerm> class_isomorphism(const ColoredStructure& a, const ColoredStructure& b,
                                           const std::vector<std::string>& colors);

// One variable "y:<color>" per color (sorted) restricted to Sym(class size),
// and for every color set of size at most r the coset Aut(a[C]) phi_C.
// Mismatched colors, class sizes or a missing phi_C yield two contradictory
// singleton constraints. d defaults to the largest class size, and at least 2.
CosetInstance iso_encode(const ColoredStructure& a, const ColoredStructure& b, int r, std::optional<int> d = {});

}  // namespace acsp
