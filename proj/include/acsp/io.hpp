// Line-oriented text formats. `#` starts a comment; blank lines are ignored.
//
//   cspv1 structure            cspv1 group           cspv1 coset
//   elements a b c             elements e g          group z2 | <path>
//   rel E 2                    table                 vars x y z
//   a b                        e g                   constraint 2 scope x y rep 1 0
//   end                        g e                   1 1          (generators)
//   color a red   (colored)    end                   end
//
// Graphs: one `v <name>` line per vertex and one `a <u> <v>` line per arc.
#pragma once

#include "acsp/constructions.hpp"
#include "acsp/groups.hpp"
#include "acsp/isomorphism.hpp"
#include "acsp/structure.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

namespace acsp {

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, int line);
    int line;
};

RelStructure read_structure(std::istream& in);
void write_structure(std::ostream& out, const RelStructure& s);

ColoredStructure read_colored(std::istream& in);
void write_colored(std::ostream& out, const ColoredStructure& s);

FiniteGroup read_group(std::istream& in);
void write_group(std::ostream& out, const FiniteGroup& g);

// z<n>, sym<d>, z9z3, and products joined by 'x' such as z2xz2.
std::optional<FiniteGroup> builtin_group(const std::string& id);

// A group reference that is not a builtin id is a path relative to base_dir.
CosetInstance read_coset(std::istream& in, const std::filesystem::path& base_dir = ".");
void write_coset(std::ostream& out, const CosetInstance& inst, const std::string& group_ref);

OrientedGraph read_graph(std::istream& in);
void write_graph(std::ostream& out, const OrientedGraph& g);

// File wrappers; an unreadable file is a ParseError at line 0.
RelStructure load_structure(const std::filesystem::path& path);
ColoredStructure load_colored(const std::filesystem::path& path);
FiniteGroup load_group(const std::filesystem::path& path);
CosetInstance load_coset(const std::filesystem::path& path);
OrientedGraph load_graph(const std::filesystem::path& path);

}  // namespace acsp
