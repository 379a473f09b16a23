#include "acsp/isomorphism.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <set>

namespace acsp {

ColoredStructure::ColoredStructure(RelStructure b, std::vector<std::string> c) : base(std::move(b)), color(std::move(c)) {
    if (static_cast<int>(color.size()) != base.size()) throw ContractError("one color per element required");
}

std::map<std::string, std::vector<int>> ColoredStructure::classes() const {
    std::map<std::string, std::vector<int>> out;
    for (int x = 0; x < size(); ++x) out[color[static_cast<std::size_t>(x)]].push_back(x);
    return out;
}

int ColoredStructure::max_class_size() const {
    int best = 0;
    for (const auto& [c, members] : classes()) best = std::max(best, static_cast<int>(members.size()));
    return best;
}

// ---------------------------------------------------------------- CFI graphs

namespace {

ColoredStructure cfi_graph(const CosetInstance& inst, bool homogeneous) {
    const auto& g = inst.group();
    const auto& vars = inst.variables();
    int max_arity = 0;
    for (const auto& c : inst.constraints()) max_arity = std::max(max_arity, c.arity());
    std::vector<Symbol> symbols;
    for (int i = 1; i <= max_arity; ++i) symbols.push_back({"E" + std::to_string(i), 2});

    std::vector<std::string> universe, colors;
    for (const auto& x : vars)
        for (int a = 0; a < g.order(); ++a) {
            universe.push_back(x + "@" + g.name(a));
            colors.push_back("v:" + x);
        }
    auto var_vertex = [&](int var, int a) { return var * g.order() + a; };

    std::vector<std::vector<Tuple>> rels(symbols.size());
    for (std::size_t ci = 0; ci < inst.constraints().size(); ++ci) {
        const auto scope = inst.scope_indices(ci);
        const auto tuples = homogeneous ? inst.constraints()[ci].subgroup : inst.coset(ci);
        for (const auto& t : tuples) {
            std::string name = "C" + std::to_string(ci) + "(";
            for (std::size_t i = 0; i < t.size(); ++i) name += (i ? "," : "") + g.name(t[i]);
            const int vertex = static_cast<int>(universe.size());
            universe.push_back(name + ")");
            colors.push_back("c:" + std::to_string(ci));
            for (std::size_t i = 0; i < t.size(); ++i) {
                const int u = var_vertex(scope[i], t[i]);
                rels[i].push_back({u, vertex});
                rels[i].push_back({vertex, u});
            }
        }
    }
    return {RelStructure(Vocabulary(symbols), universe, rels), colors};
}

}  // namespace

std::pair<ColoredStructure, ColoredStructure> cfi_pair(const CosetInstance& inst) {
    return {cfi_graph(inst, false), cfi_graph(inst, true)};
}

// ---------------------------------------------------------------- isomorphism search

namespace {

// Symbol of b per symbol of a, matched by name and arity.
std::optional<std::vector<std::size_t>> match_symbols(const RelStructure& a, const RelStructure& b) {
    const auto& va = a.vocabulary();
    const auto& vb = b.vocabulary();
    if (va.size() != vb.size()) return std::nullopt;
    std::vector<std::size_t> out;
    for (const auto& sym : va.symbols()) {
        auto s = vb.find(sym.name);
        if (!s || vb[*s].arity != sym.arity) return std::nullopt;
        out.push_back(*s);
    }
    return out;
}

// (symbol, position) incidence counts, with b's symbols renamed to a's.
std::vector<std::vector<int>> signatures(const RelStructure& s, const std::vector<std::size_t>& to_a) {
    std::vector<std::size_t> offset(s.vocabulary().size() + 1, 0);
    std::vector<std::size_t> slot(s.vocabulary().size());
    for (std::size_t sym = 0; sym < s.vocabulary().size(); ++sym) slot[to_a[sym]] = sym;
    for (std::size_t i = 0; i < slot.size(); ++i)
        offset[i + 1] = offset[i] + static_cast<std::size_t>(s.vocabulary()[slot[i]].arity);
    std::vector<std::vector<int>> out(static_cast<std::size_t>(s.size()), std::vector<int>(offset.back(), 0));
    for (std::size_t sym = 0; sym < s.vocabulary().size(); ++sym)
        for (const auto& t : s.relation(sym))
            for (std::size_t p = 0; p < t.size(); ++p) ++out[static_cast<std::size_t>(t[p])][offset[to_a[sym]] + p];
    return out;
}

class IsoSearch {
public:
    using Visit = std::function<bool(const std::vector<int>&)>;  // false stops the search

    IsoSearch(const ColoredStructure& a, const ColoredStructure& b) : a_(a), b_(b) {}

    // Visits every isomorphism with a's elements assigned in `order`, images
    // tried in increasing order.
    void run(const std::vector<int>& order, const Visit& visit) {
        if (!prepare()) return;
        order_ = order;
        visit_ = &visit;
        fwd_.assign(static_cast<std::size_t>(a_.size()), -1);
        bwd_.assign(static_cast<std::size_t>(b_.size()), -1);
        extend(0);
    }

private:
    bool prepare() {
        if (a_.size() != b_.size()) return false;
        auto sym = match_symbols(a_.base, b_.base);
        if (!sym) return false;
        to_b_ = *sym;
        to_a_.assign(to_b_.size(), 0);
        for (std::size_t s = 0; s < to_b_.size(); ++s) {
            to_a_[to_b_[s]] = s;
            if (a_.base.relation(s).size() != b_.base.relation(to_b_[s]).size()) return false;
        }
        auto ca = a_.classes(), cb = b_.classes();
        if (ca.size() != cb.size()) return false;
        for (const auto& [c, members] : ca) {
            auto it = cb.find(c);
            if (it == cb.end() || it->second.size() != members.size()) return false;
        }
        std::vector<std::size_t> identity(to_b_.size());
        std::iota(identity.begin(), identity.end(), 0);
        sig_a_ = signatures(a_.base, identity);
        sig_b_ = signatures(b_.base, to_a_);
        candidates_.assign(static_cast<std::size_t>(a_.size()), {});
        for (const auto& [c, members] : ca)
            for (int x : members)
                for (int y : cb[c])
                    if (sig_a_[static_cast<std::size_t>(x)] == sig_b_[static_cast<std::size_t>(y)])
                        candidates_[static_cast<std::size_t>(x)].push_back(y);
        return true;
    }

    bool consistent(int x, int y) const {
        for (const auto& inc : a_.base.incidences(x)) {
            const auto& t = a_.base.relation(inc.symbol)[inc.tuple];
            Tuple image;
            for (int v : t) {
                const int w = fwd_[static_cast<std::size_t>(v)];
                if (w < 0) break;
                image.push_back(w);
            }
            if (image.size() == t.size() && !b_.base.contains(to_b_[inc.symbol], image)) return false;
        }
        for (const auto& inc : b_.base.incidences(y)) {
            const auto& t = b_.base.relation(inc.symbol)[inc.tuple];
            Tuple pre;
            for (int v : t) {
                const int w = bwd_[static_cast<std::size_t>(v)];
                if (w < 0) break;
                pre.push_back(w);
            }
            if (pre.size() == t.size() && !a_.base.contains(to_a_[inc.symbol], pre)) return false;
        }
        return true;
    }

    bool extend(std::size_t depth) {
        if (depth == order_.size()) return (*visit_)(fwd_);
        const int x = order_[depth];
        for (int y : candidates_[static_cast<std::size_t>(x)]) {
            if (bwd_[static_cast<std::size_t>(y)] >= 0) continue;
            fwd_[static_cast<std::size_t>(x)] = y;
            bwd_[static_cast<std::size_t>(y)] = x;
            const bool ok = consistent(x, y);
            if (ok && !extend(depth + 1)) return false;
            fwd_[static_cast<std::size_t>(x)] = -1;
            bwd_[static_cast<std::size_t>(y)] = -1;
        }
        return true;
    }

    const ColoredStructure& a_;
    const ColoredStructure& b_;
    std::vector<std::size_t> to_b_, to_a_;
    std::vector<std::vector<int>> sig_a_, sig_b_;
    std::vector<std::vector<int>> candidates_;
    std::vector<int> order_;
    const Visit* visit_ = nullptr;
    std::vector<int> fwd_, bwd_;
};

// Breadth-first over the Gaifman graph, each search started at the
// unvisited element of smallest color class.
std::vector<int> search_order(const ColoredStructure& a) {
    const int n = a.size();
    std::map<std::string, int> class_size;
    for (const auto& c : a.color) ++class_size[c];
    std::vector<int> by_class(static_cast<std::size_t>(n));
    std::iota(by_class.begin(), by_class.end(), 0);
    std::stable_sort(by_class.begin(), by_class.end(), [&](int x, int y) {
        return class_size[a.color[static_cast<std::size_t>(x)]] < class_size[a.color[static_cast<std::size_t>(y)]];
    });
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> order;
    for (int start : by_class) {
        if (seen[static_cast<std::size_t>(start)]) continue;
        seen[static_cast<std::size_t>(start)] = 1;
        std::size_t head = order.size();
        order.push_back(start);
        for (; head < order.size(); ++head) {
            for (const auto& inc : a.base.incidences(order[head]))
                for (int v : a.base.relation(inc.symbol)[inc.tuple])
                    if (!seen[static_cast<std::size_t>(v)]) {
                        seen[static_cast<std::size_t>(v)] = 1;
                        order.push_back(v);
                    }
        }
    }
    return order;
}

}  // namespace

IsoResult iso_oracle(const ColoredStructure& a, const ColoredStructure& b) {
    IsoResult result;
    IsoSearch search(a, b);
    search.run(search_order(a), [&](const std::vector<int>& map) {
        result.isomorphic = true;
        result.witness = map;
        return false;
    });
    return result;
}

bool is_isomorphism(const ColoredStructure& a, const ColoredStructure& b, const std::vector<int>& map) {
    if (a.size() != b.size() || static_cast<int>(map.size()) != a.size()) return false;
    auto sym = match_symbols(a.base, b.base);
    if (!sym) return false;
    std::vector<char> hit(static_cast<std::size_t>(b.size()), 0);
    for (int x = 0; x < a.size(); ++x) {
        const int y = map[static_cast<std::size_t>(x)];
        if (y < 0 || y >= b.size() || hit[static_cast<std::size_t>(y)]) return false;
        hit[static_cast<std::size_t>(y)] = 1;
        if (a.color[static_cast<std::size_t>(x)] != b.color[static_cast<std::size_t>(y)]) return false;
    }
    for (std::size_t s = 0; s < sym->size(); ++s) {
        if (a.base.relation(s).size() != b.base.relation((*sym)[s]).size()) return false;
        for (const auto& t : a.base.relation(s)) {
            Tuple image;
            for (int v : t) image.push_back(map[static_cast<std::size_t>(v)]);
            if (!b.base.contains((*sym)[s], image)) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------- OR-construction

std::string seq_entry_symbol(int entry) { return "seq_entry" + std::to_string(entry); }

namespace {

bool reserved(const std::string& name) { return name == kSeqOrderSymbol || name.rfind("seq_entry", 0) == 0; }

// Union of the vocabularies in order of first appearance, then the reserved symbols.
Vocabulary sequence_vocabulary(const std::vector<const ColoredStructure*>& structures, int entries) {
    std::vector<Symbol> symbols;
    std::map<std::string, int> arity;
    for (const auto* s : structures)
        for (const auto& sym : s->base.vocabulary().symbols()) {
            if (reserved(sym.name)) throw ContractError("symbol " + sym.name + " is reserved for sequence encodings");
            auto [it, fresh] = arity.emplace(sym.name, sym.arity);
            if (fresh)
                symbols.push_back(sym);
            else if (it->second != sym.arity)
                throw ContractError("symbol " + sym.name + " occurs with two arities");
        }
    for (int i = 1; i <= entries; ++i) symbols.push_back({seq_entry_symbol(i), 2});
    symbols.push_back({kSeqOrderSymbol, 2});
    return Vocabulary(symbols);
}

// Appends the sequence encoding of `entries` to the given universe and
// relations, prefixing element names.
void append_sequence(const std::vector<const ColoredStructure*>& entries, const Vocabulary& vocab,
                     const std::string& prefix, std::vector<std::string>& universe,
                     std::vector<std::string>& colors, std::vector<std::vector<Tuple>>& rels) {
    const std::size_t order_sym = *vocab.find(kSeqOrderSymbol);
    std::vector<std::pair<int, int>> spans;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = *entries[i];
        const int offset = static_cast<int>(universe.size());
        const std::string tag = std::to_string(i + 1);
        for (int x = 0; x < e.size(); ++x) {
            universe.push_back(prefix + tag + "/" + e.base.universe()[static_cast<std::size_t>(x)]);
            colors.push_back(tag + ":" + e.color[static_cast<std::size_t>(x)]);
        }
        for (std::size_t s = 0; s < e.base.vocabulary().size(); ++s) {
            const std::size_t target = *vocab.find(e.base.vocabulary()[s].name);
            for (auto t : e.base.relation(s)) {
                for (int& v : t) v += offset;
                rels[target].push_back(std::move(t));
            }
        }
        const std::size_t full = *vocab.find(seq_entry_symbol(static_cast<int>(i) + 1));
        for (int x = 0; x < e.size(); ++x)
            for (int y = 0; y < e.size(); ++y) rels[full].push_back({offset + x, offset + y});
        spans.emplace_back(offset, offset + e.size());
    }
    for (std::size_t i = 0; i < spans.size(); ++i)
        for (std::size_t j = i + 1; j < spans.size(); ++j)
            for (int x = spans[i].first; x < spans[i].second; ++x)
                for (int y = spans[j].first; y < spans[j].second; ++y) rels[order_sym].push_back({x, y});
}

}  // namespace

ColoredStructure seq_encode(const std::vector<ColoredStructure>& entries) {
    if (entries.empty()) throw ContractError("sequence encoding needs at least one structure");
    std::vector<const ColoredStructure*> ptrs;
    for (const auto& e : entries) ptrs.push_back(&e);
    const Vocabulary vocab = sequence_vocabulary(ptrs, static_cast<int>(entries.size()));
    std::vector<std::string> universe, colors;
    std::vector<std::vector<Tuple>> rels(vocab.size());
    append_sequence(ptrs, vocab, "", universe, colors, rels);
    return {RelStructure(vocab, universe, rels), colors};
}

std::pair<ColoredStructure, ColoredStructure> or_iso(
    const std::vector<std::pair<ColoredStructure, ColoredStructure>>& pairs) {
    if (pairs.empty()) throw ContractError("isomorphism OR needs at least one pair");
    const std::size_t j = pairs.size();
    std::vector<const ColoredStructure*> all;
    for (const auto& [b0, b1] : pairs) {
        all.push_back(&b0);
        all.push_back(&b1);
    }
    const Vocabulary vocab = sequence_vocabulary(all, static_cast<int>(j));
    std::array<std::vector<std::string>, 2> universe, colors;
    std::array<std::vector<std::vector<Tuple>>, 2> rels{std::vector<std::vector<Tuple>>(vocab.size()),
                                                       std::vector<std::vector<Tuple>>(vocab.size())};
    for (std::size_t mask = 0; mask < (std::size_t{1} << j); ++mask) {
        std::vector<const ColoredStructure*> entries;
        std::string tag;
        int parity = 0;
        for (std::size_t i = 0; i < j; ++i) {
            const int bit = static_cast<int>((mask >> (j - 1 - i)) & 1U);
            parity ^= bit;
            tag += static_cast<char>('0' + bit);
            entries.push_back(bit ? &pairs[i].second : &pairs[i].first);
        }
        const auto k = static_cast<std::size_t>(parity);
        append_sequence(entries, vocab, tag + "|", universe[k], colors[k], rels[k]);
    }
    return {ColoredStructure(RelStructure(vocab, universe[0], rels[0]), colors[0]),
            ColoredStructure(RelStructure(vocab, universe[1], rels[1]), colors[1])};
}

// ---------------------------------------------------------------- class permutations

namespace {

constexpr std::size_t kMaxEnumerated = 1'000'000;

struct Restricted {
    ColoredStructure sub;
    std::vector<std::vector<int>> members;  // per color, positions in sub
};

Restricted restrict_to_colors(const ColoredStructure& s, const std::vector<std::string>& colors) {
    const auto classes = s.classes();
    std::vector<int> elements;
    for (const auto& c : colors) {
        auto it = classes.find(c);
        if (it == classes.end()) continue;
        if (static_cast<int>(it->second.size()) > kMaxClassSize)
            throw ResourceError("color class " + c + " exceeds " + std::to_string(kMaxClassSize) + " elements");
        elements.insert(elements.end(), it->second.begin(), it->second.end());
    }
    std::sort(elements.begin(), elements.end());
    RelStructure base = induced_substructure(s.base, elements);
    std::vector<std::string> sub_colors;
    for (int x : elements) sub_colors.push_back(s.color[static_cast<std::size_t>(x)]);
    Restricted r{{std::move(base), std::move(sub_colors)}, {}};
    for (const auto& c : colors) {
        std::vector<int> pos;
        for (std::size_t i = 0; i < elements.size(); ++i)
            if (r.sub.color[i] == c) pos.push_back(static_cast<int>(i));
        r.members.push_back(std::move(pos));
    }
    return r;
}

std::vector<int> class_order(const Restricted& r) {
    std::vector<int> order;
    for (const auto& m : r.members) order.insert(order.end(), m.begin(), m.end());
    return order;
}

ClassPerm to_class_perm(const Restricted& ra, const Restricted& rb, const std::vector<int>& map) {
    ClassPerm out;
    for (std::size_t c = 0; c < ra.members.size(); ++c) {
        std::vector<int> perm;
        for (int x : ra.members[c]) {
            const auto& mb = rb.members[c];
            perm.push_back(static_cast<int>(std::find(mb.begin(), mb.end(), map[static_cast<std::size_t>(x)]) - mb.begin()));
        }
        out.push_back(std::move(perm));
    }
    return out;
}

}  // namespace

std::vector<ClassPerm> class_automorphisms(const ColoredStructure& a, const std::vector<std::string>& colors) {
    const Restricted r = restrict_to_colors(a, colors);
    std::vector<ClassPerm> out;
    IsoSearch search(r.sub, r.sub);
    search.run(class_order(r), [&](const std::vector<int>& map) {
        out.push_back(to_class_perm(r, r, map));
        if (out.size() > kMaxEnumerated) throw ResourceError("automorphism group too large to enumerate");
        return true;
    });
    return out;
}

std::optional<ClassPerm> class_isomorphism(const ColoredStructure& a, const ColoredStructure& b,
                                           const std::vector<std::string>& colors) {
    const Restricted ra = restrict_to_colors(a, colors);
    const Restricted rb = restrict_to_colors(b, colors);
    std::optional<ClassPerm> out;
    IsoSearch search(ra.sub, rb.sub);
    search.run(class_order(ra), [&](const std::vector<int>& map) {
        out = to_class_perm(ra, rb, map);
        return false;
    });
    return out;
}

// ---------------------------------------------------------------- Sym(d) encoding

namespace {

int perm_element(const FiniteGroup& sym, std::vector<int> perm, int d) {
    std::string name;
    for (int j = static_cast<int>(perm.size()); j < d; ++j) perm.push_back(j);
    for (int v : perm) name += static_cast<char>('1' + v);
    return *sym.element(name);
}

CosetInstance contradiction(const FiniteGroup& sym, std::vector<std::string> vars) {
    if (vars.empty()) vars.push_back("y:");
    const int id = sym.identity();
    const int other = id == 0 ? 1 : 0;
    std::vector<CosetConstraint> cs{{{vars.front()}, {{id}}, {id}}, {{vars.front()}, {{id}}, {other}}};
    return CosetInstance(sym, std::move(vars), std::move(cs));
}

}  // namespace

CosetInstance iso_encode(const ColoredStructure& a, const ColoredStructure& b, int r, std::optional<int> d) {
    if (r < 1) throw ContractError("arity must be positive");
    const auto ca = a.classes(), cb = b.classes();
    std::set<std::string> color_set;
    for (const auto& [c, m] : ca) color_set.insert(c);
    for (const auto& [c, m] : cb) color_set.insert(c);
    const std::vector<std::string> colors(color_set.begin(), color_set.end());
    const int largest = std::max({1, a.max_class_size(), b.max_class_size()});
    const int degree = d.value_or(largest);
    if (degree < largest) throw ContractError("d is below the largest color class");
    if (degree > kMaxClassSize) throw ResourceError("d exceeds " + std::to_string(kMaxClassSize));
    const FiniteGroup sym = FiniteGroup::symmetric(std::max(degree, 2));
    const int dd = std::max(degree, 2);

    std::vector<std::string> vars;
    for (const auto& c : colors) vars.push_back("y:" + c);

    bool matched = static_cast<bool>(match_symbols(a.base, b.base));
    std::map<std::string, int> size;
    for (const auto& c : colors) {
        auto ia = ca.find(c), ib = cb.find(c);
        if (ia == ca.end() || ib == cb.end() || ia->second.size() != ib->second.size()) matched = false;
        else size[c] = static_cast<int>(ia->second.size());
    }
    if (!matched) return contradiction(sym, vars);

    std::vector<CosetConstraint> constraints;
    for (const auto& c : colors) {
        const int len = size[c];
        if (len == dd) continue;  // the whole group
        std::vector<int> perm(static_cast<std::size_t>(len));
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<Tuple> subgroup;
        do subgroup.push_back({perm_element(sym, perm, dd)});
        while (std::next_permutation(perm.begin(), perm.end()));
        std::sort(subgroup.begin(), subgroup.end());
        constraints.push_back({{"y:" + c}, std::move(subgroup), {sym.identity()}});
    }

    // every color set of size 1..r, lexicographic by sorted color positions
    std::vector<int> chosen;
    std::function<bool(int)> visit = [&](int next) {
        if (!chosen.empty()) {
            std::vector<std::string> set;
            std::vector<std::string> scope;
            for (int i : chosen) {
                set.push_back(colors[static_cast<std::size_t>(i)]);
                scope.push_back(vars[static_cast<std::size_t>(i)]);
            }
            auto phi = class_isomorphism(a, b, set);
            if (!phi) return false;
            std::vector<Tuple> auts;
            for (const auto& psi : class_automorphisms(a, set)) {
                Tuple t;
                for (const auto& p : psi) t.push_back(perm_element(sym, p, dd));
                auts.push_back(std::move(t));
            }
            std::sort(auts.begin(), auts.end());
            Tuple rep;
            for (const auto& p : *phi) rep.push_back(perm_element(sym, p, dd));
            constraints.push_back({std::move(scope), std::move(auts), std::move(rep)});
        }
        if (static_cast<int>(chosen.size()) == r) return true;
        for (int i = next; i < static_cast<int>(colors.size()); ++i) {
            chosen.push_back(i);
            const bool ok = visit(i + 1);
            chosen.pop_back();
            if (!ok) return false;
        }
        return true;
    };
    if (!visit(0)) return contradiction(sym, vars);
    return CosetInstance(sym, std::move(vars), std::move(constraints));
}

}  // namespace acsp
