#include "acsp/io.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <regex>
#include <sstream>

namespace acsp {

ParseError::ParseError(const std::string& what, int line_no)
    : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}

namespace {

using Tokens = std::vector<std::string>;

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next line with at least one token.
    std::optional<Tokens> next() {
        std::string text;
        while (std::getline(in_, text)) {
            ++line_;
            if (auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
            std::istringstream words(text);
            Tokens tokens;
            for (std::string w; words >> w;) tokens.push_back(w);
            if (!tokens.empty()) return tokens;
        }
        return std::nullopt;
    }

    Tokens expect() {
        auto t = next();
        if (!t) fail("unexpected end of file");
        return *t;
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_); }

    int to_int(const std::string& s) const {
        try {
            std::size_t used = 0;
            const int v = std::stoi(s, &used);
            if (used == s.size()) return v;
        } catch (const std::exception&) {
        }
        fail("expected an integer, got '" + s + "'");
    }

    void header(const std::string& kind) {
        const auto t = expect();
        if (t.size() != 2 || t[0] != "cspv1" || t[1] != kind) fail("expected header 'cspv1 " + kind + "'");
    }

private:
    std::istream& in_;
    int line_ = 0;
};

void check_token(const std::string& s) {
    if (s.empty() || s.find_first_of(" \t\r\n#") != std::string::npos)
        throw DomainError("name '" + s + "' cannot be written as a token");
}

void write_tokens(std::ostream& out, const std::string& head, const std::vector<std::string>& items) {
    out << head;
    for (const auto& s : items) {
        check_token(s);
        out << ' ' << s;
    }
    out << '\n';
}

struct StructureText {
    RelStructure base;
    std::vector<std::pair<std::string, std::string>> colors;  // element, color
};

StructureText parse_structure(std::istream& in, bool colored) {
    LineReader r(in);
    r.header("structure");
    auto t = r.expect();
    if (t[0] != "elements") r.fail("expected 'elements'");
    std::vector<std::string> universe(t.begin() + 1, t.end());
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < universe.size(); ++i)
        if (!index.emplace(universe[i], static_cast<int>(i)).second) r.fail("duplicate element " + universe[i]);

    std::vector<Symbol> symbols;
    std::vector<std::vector<Tuple>> rels;
    StructureText out;
    while (auto line = r.next()) {
        const auto& w = *line;
        if (w[0] == "color") {
            if (!colored) r.fail("color line in an uncolored structure");
            if (w.size() != 3) r.fail("expected 'color <element> <name>'");
            if (!index.count(w[1])) r.fail("unknown element " + w[1]);
            out.colors.emplace_back(w[1], w[2]);
            continue;
        }
        if (w[0] != "rel" || w.size() != 3) r.fail("expected 'rel <name> <arity>'");
        const int arity = r.to_int(w[2]);
        if (arity < 1) r.fail("arity must be positive");
        for (const auto& s : symbols)
            if (s.name == w[1]) r.fail("duplicate relation " + w[1]);
        symbols.push_back({w[1], arity});
        rels.emplace_back();
        while (true) {
            auto row = r.expect();
            if (row.size() == 1 && row[0] == "end") break;
            if (static_cast<int>(row.size()) != arity) r.fail("tuple of wrong arity in " + w[1]);
            Tuple tuple;
            for (const auto& e : row) {
                auto it = index.find(e);
                if (it == index.end()) r.fail("unknown element " + e);
                tuple.push_back(it->second);
            }
            rels.back().push_back(std::move(tuple));
        }
    }
    try {
        out.base = RelStructure(Vocabulary(symbols), universe, rels);
    } catch (const std::logic_error& e) {
        r.fail(std::string("invalid structure: ") + e.what());
    }
    return out;
}

void print_structure(std::ostream& out, const RelStructure& s) {
    out << "cspv1 structure\n";
    write_tokens(out, "elements", s.universe());
    for (std::size_t i = 0; i < s.vocabulary().size(); ++i) {
        const auto& sym = s.vocabulary()[i];
        check_token(sym.name);
        out << "rel " << sym.name << ' ' << sym.arity << '\n';
        for (const auto& t : s.relation(i)) {
            for (std::size_t p = 0; p < t.size(); ++p)
                out << (p ? " " : "") << s.universe()[static_cast<std::size_t>(t[p])];
            out << '\n';
        }
        out << "end\n";
    }
}

template <class T, class Reader>
T load(const std::filesystem::path& path, Reader read) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string(), 0);
    return read(in);
}

}  // namespace

RelStructure read_structure(std::istream& in) { return parse_structure(in, false).base; }

void write_structure(std::ostream& out, const RelStructure& s) { print_structure(out, s); }

ColoredStructure read_colored(std::istream& in) {
    auto text = parse_structure(in, true);
    std::vector<std::optional<std::string>> color(static_cast<std::size_t>(text.base.size()));
    for (const auto& [e, c] : text.colors) {
        auto& slot = color[static_cast<std::size_t>(*text.base.element(e))];
        if (slot && *slot != c) throw ParseError("element " + e + " has two colors", 0);
        slot = c;
    }
    std::vector<std::string> colors;
    for (std::size_t i = 0; i < color.size(); ++i) {
        if (!color[i]) throw ParseError("element " + text.base.universe()[i] + " has no color", 0);
        colors.push_back(*color[i]);
    }
    return {std::move(text.base), std::move(colors)};
}

void write_colored(std::ostream& out, const ColoredStructure& s) {
    print_structure(out, s.base);
    for (int x = 0; x < s.size(); ++x) {
        check_token(s.color[static_cast<std::size_t>(x)]);
        out << "color " << s.base.universe()[static_cast<std::size_t>(x)] << ' ' << s.color[static_cast<std::size_t>(x)]
            << '\n';
    }
}

FiniteGroup read_group(std::istream& in) {
    LineReader r(in);
    r.header("group");
    auto t = r.expect();
    if (t[0] != "elements" || t.size() < 2) r.fail("expected 'elements' with at least one name");
    std::vector<std::string> names(t.begin() + 1, t.end());
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < names.size(); ++i)
        if (!index.emplace(names[i], static_cast<int>(i)).second) r.fail("duplicate element " + names[i]);
    if (r.expect() != Tokens{"table"}) r.fail("expected 'table'");
    std::vector<std::vector<int>> table;
    for (std::size_t row = 0; row < names.size(); ++row) {
        auto w = r.expect();
        if (w.size() != names.size()) r.fail("table row of wrong length");
        std::vector<int> entries;
        for (const auto& e : w) {
            auto it = index.find(e);
            if (it == index.end()) r.fail("unknown element " + e);
            entries.push_back(it->second);
        }
        table.push_back(std::move(entries));
    }
    if (r.expect() != Tokens{"end"}) r.fail("expected 'end'");
    try {
        return FiniteGroup(names, table);
    } catch (const std::logic_error& e) {
        throw ParseError(std::string("not a group: ") + e.what(), 0);
    }
}

void write_group(std::ostream& out, const FiniteGroup& g) {
    out << "cspv1 group\n";
    write_tokens(out, "elements", g.names());
    out << "table\n";
    for (const auto& row : g.table()) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << g.name(row[i]);
        out << '\n';
    }
    out << "end\n";
}

std::optional<FiniteGroup> builtin_group(const std::string& id) {
    static const std::regex cyclic(R"(z([0-9]+))"), symmetric(R"(sym([0-9]+))");
    if (id == "z9z3") return FiniteGroup::semidirect_z9_z3();
    std::smatch m;
    if (std::regex_match(id, m, cyclic)) {
        const int n = std::stoi(m[1]);
        if (n < 1 || n > kMaxTableOrder) return std::nullopt;
        return FiniteGroup::cyclic(n);
    }
    if (std::regex_match(id, m, symmetric)) {
        const int d = std::stoi(m[1]);
        if (d < 1 || d > kMaxSymmetricDegree) return std::nullopt;
        return FiniteGroup::symmetric(d);
    }
    if (auto x = id.find('x'); x != std::string::npos) {
        auto left = builtin_group(id.substr(0, x));
        auto right = builtin_group(id.substr(x + 1));
        if (left && right) return FiniteGroup::direct_product(*left, *right);
    }
    return std::nullopt;
}

CosetInstance read_coset(std::istream& in, const std::filesystem::path& base_dir) {
    LineReader r(in);
    r.header("coset");
    auto t = r.expect();
    if (t[0] != "group" || t.size() != 2) r.fail("expected 'group <id or path>'");
    std::optional<FiniteGroup> group = builtin_group(t[1]);
    if (!group) {
        std::filesystem::path p(t[1]);
        group = load_group(p.is_absolute() ? p : base_dir / p);
    }
    t = r.expect();
    if (t[0] != "vars") r.fail("expected 'vars'");
    std::vector<std::string> vars(t.begin() + 1, t.end());

    auto element = [&](const std::string& name) {
        auto e = group->element(name);
        if (!e) r.fail("unknown group element " + name);
        return *e;
    };
    std::vector<CosetConstraint> constraints;
    while (auto line = r.next()) {
        const auto& w = *line;
        if (w[0] != "constraint" || w.size() < 3) r.fail("expected 'constraint <r> scope ... rep ...'");
        const int arity = r.to_int(w[1]);
        if (arity < 1) r.fail("arity must be positive");
        const auto a = static_cast<std::size_t>(arity);
        if (w.size() != 4 + 2 * a || w[2] != "scope" || w[3 + a] != "rep")
            r.fail("expected 'constraint <r> scope <r vars> rep <r elements>'");
        CosetConstraint c;
        c.scope.assign(w.begin() + 3, w.begin() + 3 + static_cast<long>(a));
        for (std::size_t i = 0; i < a; ++i) c.rep.push_back(element(w[4 + a + i]));
        std::vector<Tuple> gens;
        while (true) {
            auto row = r.expect();
            if (row.size() == 1 && row[0] == "end") break;
            if (row.size() != a) r.fail("generator of wrong arity");
            Tuple g;
            for (const auto& e : row) g.push_back(element(e));
            gens.push_back(std::move(g));
        }
        c.subgroup = subgroup_closure(*group, gens, arity);
        constraints.push_back(std::move(c));
    }
    try {
        return CosetInstance(*group, vars, constraints);
    } catch (const std::logic_error& e) {
        throw ParseError(std::string("invalid coset instance: ") + e.what(), 0);
    }
}

void write_coset(std::ostream& out, const CosetInstance& inst, const std::string& group_ref) {
    const auto& g = inst.group();
    check_token(group_ref);
    out << "cspv1 coset\ngroup " << group_ref << '\n';
    write_tokens(out, "vars", inst.variables());
    for (const auto& c : inst.constraints()) {
        out << "constraint " << c.arity() << " scope";
        for (const auto& v : c.scope) out << ' ' << v;
        out << " rep";
        for (int e : c.rep) out << ' ' << g.name(e);
        out << '\n';
        for (const auto& gen : generating_set(g, c.subgroup)) {
            for (std::size_t i = 0; i < gen.size(); ++i) out << (i ? " " : "") << g.name(gen[i]);
            out << '\n';
        }
        out << "end\n";
    }
}

OrientedGraph read_graph(std::istream& in) {
    LineReader r(in);
    std::vector<std::string> vertices;
    std::map<std::string, int> index;
    std::vector<std::pair<int, int>> arcs;
    while (auto line = r.next()) {
        const auto& w = *line;
        if (w[0] == "v" && w.size() == 2) {
            if (!index.emplace(w[1], static_cast<int>(vertices.size())).second) r.fail("duplicate vertex " + w[1]);
            vertices.push_back(w[1]);
        } else if (w[0] == "a" && w.size() == 3) {
            auto u = index.find(w[1]), v = index.find(w[2]);
            if (u == index.end() || v == index.end()) r.fail("arc with an undeclared vertex");
            arcs.emplace_back(u->second, v->second);
        } else {
            r.fail("expected 'v <name>' or 'a <u> <v>'");
        }
    }
    try {
        return OrientedGraph(vertices, arcs);
    } catch (const std::logic_error& e) {
        throw ParseError(std::string("invalid graph: ") + e.what(), 0);
    }
}

void write_graph(std::ostream& out, const OrientedGraph& g) {
    for (const auto& v : g.vertices()) {
        check_token(v);
        out << "v " << v << '\n';
    }
    for (auto [u, v] : g.arcs())
        out << "a " << g.vertices()[static_cast<std::size_t>(u)] << ' ' << g.vertices()[static_cast<std::size_t>(v)]
            << '\n';
}

RelStructure load_structure(const std::filesystem::path& path) {
    return load<RelStructure>(path, [](std::istream& in) { return read_structure(in); });
}
ColoredStructure load_colored(const std::filesystem::path& path) {
    return load<ColoredStructure>(path, [](std::istream& in) { return read_colored(in); });
}
FiniteGroup load_group(const std::filesystem::path& path) {
    return load<FiniteGroup>(path, [](std::istream& in) { return read_group(in); });
}
CosetInstance load_coset(const std::filesystem::path& path) {
    return load<CosetInstance>(path, [&](std::istream& in) { return read_coset(in, path.parent_path()); });
}
OrientedGraph load_graph(const std::filesystem::path& path) {
    return load<OrientedGraph>(path, [](std::istream& in) { return read_graph(in); });
}

}  // namespace acsp
