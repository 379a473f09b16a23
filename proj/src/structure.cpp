#include "acsp/structure.hpp"

#include <algorithm>
#include <numeric>

namespace acsp {

Vocabulary::Vocabulary(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    std::unordered_set<std::string> seen;
    for (const auto& s : symbols_) {
        if (s.arity < 1) throw ContractError("symbol '" + s.name + "' has arity < 1");
        if (!seen.insert(s.name).second) throw ContractError("duplicate symbol '" + s.name + "'");
    }
}

std::optional<std::size_t> Vocabulary::find(const std::string& name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i].name == name) return i;
    return std::nullopt;
}

int Vocabulary::max_arity() const {
    int m = 0;
    for (const auto& s : symbols_) m = std::max(m, s.arity);
    return m;
}

RelStructure::RelStructure(Vocabulary vocab, std::vector<std::string> universe,
                           std::vector<std::vector<Tuple>> relations)
    : vocab_(std::move(vocab)), universe_(std::move(universe)), relations_(std::move(relations)) {
    if (relations_.size() != vocab_.size()) throw ContractError("relation count differs from vocabulary size");
    for (std::size_t i = 0; i < universe_.size(); ++i)
        if (!names_.emplace(universe_[i], static_cast<int>(i)).second)
            throw ContractError("duplicate element name '" + universe_[i] + "'");
    const int n = size();
    lookup_.resize(relations_.size());
    incidence_.resize(universe_.size());
    for (std::size_t s = 0; s < relations_.size(); ++s) {
        auto& rel = relations_[s];
        for (const auto& t : rel) {
            if (static_cast<int>(t.size()) != vocab_[s].arity)
                throw ContractError("tuple of wrong arity in relation '" + vocab_[s].name + "'");
            for (int v : t)
                if (v < 0 || v >= n) throw ContractError("tuple entry out of range in '" + vocab_[s].name + "'");
        }
        std::sort(rel.begin(), rel.end());
        rel.erase(std::unique(rel.begin(), rel.end()), rel.end());
        lookup_[s] = std::unordered_set<Tuple, TupleHash>(rel.begin(), rel.end());
        for (std::size_t ti = 0; ti < rel.size(); ++ti) {
            const auto& t = rel[ti];
            for (std::size_t p = 0; p < t.size(); ++p) {
                if (std::find(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(p), t[p]) != t.begin() + static_cast<std::ptrdiff_t>(p))
                    continue;
                incidence_[t[p]].push_back({s, ti});
            }
        }
    }
}

std::optional<int> RelStructure::element(const std::string& name) const {
    auto it = names_.find(name);
    if (it == names_.end()) return std::nullopt;
    return it->second;
}

int RelStructure::element_or_throw(const std::string& name) const {
    auto e = element(name);
    if (!e) throw DomainError("unknown element '" + name + "'");
    return *e;
}

std::optional<int> PartialHom::at(int element) const {
    auto it = std::lower_bound(domain.begin(), domain.end(), element);
    if (it == domain.end() || *it != element) return std::nullopt;
    return values[static_cast<std::size_t>(it - domain.begin())];
}

PartialHom restrict_to(const PartialHom& f, std::span<const int> subset) {
    PartialHom g;
    g.domain.assign(subset.begin(), subset.end());
    g.values.reserve(subset.size());
    std::size_t j = 0;
    for (int x : subset) {
        while (j < f.domain.size() && f.domain[j] < x) ++j;
        if (j == f.domain.size() || f.domain[j] != x) throw ContractError("restriction outside domain");
        g.values.push_back(f.values[j]);
    }
    return g;
}

OpTable::OpTable(int universe_size, int arity, std::vector<int> table)
    : n_(universe_size), arity_(arity), table_(std::move(table)) {
    if (arity_ < 1) throw ContractError("operation arity must be positive");
    std::size_t expect = 1;
    for (int i = 0; i < arity_; ++i) expect *= static_cast<std::size_t>(n_);
    if (table_.size() != expect) throw ContractError("operation table has wrong size");
    for (int v : table_)
        if (v < 0 || v >= n_) throw ContractError("operation value out of range");
}

OpTable OpTable::from_function(int universe_size, int arity, const std::function<int(std::span<const int>)>& fn) {
    std::size_t total = 1;
    for (int i = 0; i < arity; ++i) total *= static_cast<std::size_t>(universe_size);
    std::vector<int> table(total);
    std::vector<int> args(static_cast<std::size_t>(arity), 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (int i = arity - 1; i >= 0; --i) {
            args[static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<std::size_t>(universe_size));
            rest /= static_cast<std::size_t>(universe_size);
        }
        table[idx] = fn(args);
    }
    return OpTable(universe_size, arity, std::move(table));
}

int OpTable::operator()(std::span<const int> args) const {
    std::size_t idx = 0;
    for (int a : args) idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(a);
    return table_[idx];
}

int OpTable::operator()(int x, int y, int z) const {
    const int a[3] = {x, y, z};
    return (*this)(std::span<const int>(a, 3));
}

RelStructure induced_substructure(const RelStructure& s, std::span<const int> elements) {
    std::vector<int> sorted(elements.begin(), elements.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> pos(static_cast<std::size_t>(s.size()), -1);
    std::vector<std::string> names;
    for (int e : sorted) {
        if (e < 0 || e >= s.size()) throw DomainError("element index out of range");
        pos[static_cast<std::size_t>(e)] = static_cast<int>(names.size());
        names.push_back(s.universe()[static_cast<std::size_t>(e)]);
    }
    std::vector<std::vector<Tuple>> rels(s.vocabulary().size());
    for (std::size_t r = 0; r < rels.size(); ++r) {
        for (const auto& t : s.relation(r)) {
            Tuple mapped;
            bool inside = true;
            for (int v : t) {
                if (pos[static_cast<std::size_t>(v)] < 0) {
                    inside = false;
                    break;
                }
                mapped.push_back(pos[static_cast<std::size_t>(v)]);
            }
            if (inside) rels[r].push_back(std::move(mapped));
        }
    }
    return RelStructure(s.vocabulary(), std::move(names), std::move(rels));
}

RelStructure induced_substructure(const RelStructure& s, const std::vector<std::string>& names) {
    std::vector<int> idx;
    for (const auto& n : names) idx.push_back(s.element_or_throw(n));
    return induced_substructure(s, idx);
}

namespace {

void require_same_vocabulary(const RelStructure& a, const RelStructure& b) {
    if (!(a.vocabulary() == b.vocabulary())) throw ContractError("vocabulary mismatch");
}

}  // namespace

bool is_homomorphism(const PartialHom& f, const RelStructure& instance, const RelStructure& tmpl) {
    require_same_vocabulary(instance, tmpl);
    if (f.domain.size() != f.values.size()) throw ContractError("malformed partial map");
    std::vector<int> image(static_cast<std::size_t>(instance.size()), -1);
    for (std::size_t i = 0; i < f.domain.size(); ++i) {
        if (f.domain[i] < 0 || f.domain[i] >= instance.size()) throw ContractError("domain element out of range");
        if (f.values[i] < 0 || f.values[i] >= tmpl.size()) throw ContractError("image element out of range");
        image[static_cast<std::size_t>(f.domain[i])] = f.values[i];
    }
    Tuple img;
    for (int b : f.domain) {
        for (const auto& inc : instance.incidences(b)) {
            const auto& t = instance.relation(inc.symbol)[inc.tuple];
            img.clear();
            bool inside = true;
            for (int v : t) {
                if (image[static_cast<std::size_t>(v)] < 0) {
                    inside = false;
                    break;
                }
                img.push_back(image[static_cast<std::size_t>(v)]);
            }
            if (inside && !tmpl.contains(inc.symbol, img)) return false;
        }
    }
    return true;
}

namespace {

// Backtracking with forward checking of each constraint touching the
// assigned element; no propagation beyond the neighbours.
class Backtracker {
public:
    Backtracker(const RelStructure& tmpl, const RelStructure& instance)
        : a_(tmpl), b_(instance), n_(instance.size()), m_(tmpl.size()) {
        alive_.assign(static_cast<std::size_t>(n_), std::vector<char>(static_cast<std::size_t>(m_), 1));
        count_.assign(static_cast<std::size_t>(n_), m_);
        value_.assign(static_cast<std::size_t>(n_), -1);
    }

    bool run(std::vector<int>& witness) {
        if (n_ == 0) return true;
        if (m_ == 0) return false;
        for (std::size_t s = 0; s < b_.vocabulary().size(); ++s)
            for (const auto& t : b_.relation(s))
                if (!filter(s, t)) return false;
        if (!search()) return false;
        witness = value_;
        return true;
    }

private:
    bool filter(std::size_t sym, const Tuple& t) {
        const std::size_t r = t.size();
        supported_.assign(r * static_cast<std::size_t>(m_), 0);
        for (const auto& at : a_.relation(sym)) {
            bool ok = true;
            for (std::size_t i = 0; i < r && ok; ++i) {
                if (!alive_[static_cast<std::size_t>(t[i])][static_cast<std::size_t>(at[i])]) ok = false;
                for (std::size_t j = 0; j < i && ok; ++j)
                    if (t[j] == t[i] && at[j] != at[i]) ok = false;
            }
            if (!ok) continue;
            for (std::size_t i = 0; i < r; ++i) supported_[i * static_cast<std::size_t>(m_) + static_cast<std::size_t>(at[i])] = 1;
        }
        for (std::size_t i = 0; i < r; ++i) {
            auto b = static_cast<std::size_t>(t[i]);
            for (int a = 0; a < m_; ++a) {
                if (alive_[b][static_cast<std::size_t>(a)] && !supported_[i * static_cast<std::size_t>(m_) + static_cast<std::size_t>(a)]) {
                    alive_[b][static_cast<std::size_t>(a)] = 0;
                    --count_[b];
                    trail_.push_back({t[i], a});
                }
            }
            if (count_[b] == 0) return false;
        }
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            auto [b, a] = trail_.back();
            trail_.pop_back();
            alive_[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 1;
            ++count_[static_cast<std::size_t>(b)];
        }
    }

    bool search() {
        int best = -1;
        for (int b = 0; b < n_; ++b) {
            if (value_[static_cast<std::size_t>(b)] >= 0) continue;
            if (best < 0 || count_[static_cast<std::size_t>(b)] < count_[static_cast<std::size_t>(best)]) best = b;
        }
        if (best < 0) return true;
        const auto bb = static_cast<std::size_t>(best);
        for (int a = 0; a < m_; ++a) {
            if (!alive_[bb][static_cast<std::size_t>(a)]) continue;
            const std::size_t mark = trail_.size();
            for (int o = 0; o < m_; ++o) {
                if (o != a && alive_[bb][static_cast<std::size_t>(o)]) {
                    alive_[bb][static_cast<std::size_t>(o)] = 0;
                    --count_[bb];
                    trail_.push_back({best, o});
                }
            }
            value_[bb] = a;
            bool ok = true;
            for (const auto& inc : b_.incidences(best)) {
                if (!filter(inc.symbol, b_.relation(inc.symbol)[inc.tuple])) {
                    ok = false;
                    break;
                }
            }
            if (ok && search()) return true;
            value_[bb] = -1;
            undo(mark);
        }
        return false;
    }

    const RelStructure& a_;
    const RelStructure& b_;
    int n_;
    int m_;
    std::vector<std::vector<char>> alive_;
    std::vector<int> count_;
    std::vector<int> value_;
    std::vector<std::pair<int, int>> trail_;
    std::vector<char> supported_;
};

}  // namespace

OracleResult oracle_decide(const RelStructure& tmpl, const RelStructure& instance) {
    require_same_vocabulary(instance, tmpl);
    OracleResult res;
    Backtracker bt(tmpl, instance);
    res.satisfiable = bt.run(res.witness);
    if (!res.satisfiable) res.witness.clear();
    return res;
}

std::vector<PartialHom> enumerate_partial_homs(const RelStructure& tmpl, const RelStructure& instance,
                                               std::span<const int> domain) {
    require_same_vocabulary(instance, tmpl);
    std::vector<int> dom(domain.begin(), domain.end());
    std::sort(dom.begin(), dom.end());
    dom.erase(std::unique(dom.begin(), dom.end()), dom.end());
    for (int b : dom)
        if (b < 0 || b >= instance.size()) throw DomainError("element index out of range");

    // Tuples of instance[dom] grouped by the position (in dom) of their last entry.
    std::vector<int> pos(static_cast<std::size_t>(instance.size()), -1);
    for (std::size_t i = 0; i < dom.size(); ++i) pos[static_cast<std::size_t>(dom[i])] = static_cast<int>(i);
    struct Check {
        std::size_t symbol;
        std::vector<int> slots;
    };
    std::vector<std::vector<Check>> checks(dom.size());
    for (int b : dom) {
        for (const auto& inc : instance.incidences(b)) {
            const auto& t = instance.relation(inc.symbol)[inc.tuple];
            int last = -1;
            bool inside = true;
            Check c{inc.symbol, {}};
            for (int v : t) {
                int p = pos[static_cast<std::size_t>(v)];
                if (p < 0) {
                    inside = false;
                    break;
                }
                c.slots.push_back(p);
                last = std::max(last, p);
            }
            if (inside && last == pos[static_cast<std::size_t>(b)]) checks[static_cast<std::size_t>(last)].push_back(std::move(c));
        }
    }

    std::vector<PartialHom> out;
    std::vector<int> vals(dom.size(), 0);
    const int m = tmpl.size();
    Tuple img;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == dom.size()) {
            out.push_back(PartialHom{dom, vals});
            return;
        }
        for (int a = 0; a < m; ++a) {
            vals[i] = a;
            bool ok = true;
            for (const auto& c : checks[i]) {
                img.clear();
                for (int s : c.slots) img.push_back(vals[static_cast<std::size_t>(s)]);
                if (!tmpl.contains(c.symbol, img)) {
                    ok = false;
                    break;
                }
            }
            if (ok) rec(i + 1);
        }
    };
    rec(0);
    return out;
}

bool is_polymorphism(const OpTable& p, const RelStructure& tmpl) {
    if (p.universe_size() != tmpl.size()) throw ContractError("operation universe differs from template");
    const int m = p.arity();
    std::vector<int> args(static_cast<std::size_t>(m));
    Tuple img;
    for (std::size_t s = 0; s < tmpl.vocabulary().size(); ++s) {
        const auto& rel = tmpl.relation(s);
        if (rel.empty()) continue;
        const std::size_t r = static_cast<std::size_t>(tmpl.vocabulary()[s].arity);
        std::vector<std::size_t> pick(static_cast<std::size_t>(m), 0);
        img.assign(r, 0);
        while (true) {
            for (std::size_t c = 0; c < r; ++c) {
                for (int j = 0; j < m; ++j) args[static_cast<std::size_t>(j)] = rel[pick[static_cast<std::size_t>(j)]][c];
                img[c] = p(args);
            }
            if (!tmpl.contains(s, img)) return false;
            int j = m - 1;
            while (j >= 0 && ++pick[static_cast<std::size_t>(j)] == rel.size()) pick[static_cast<std::size_t>(j--)] = 0;
            if (j < 0) break;
        }
    }
    return true;
}

bool check_maltsev(const OpTable& p) {
    if (p.arity() != 3) throw ContractError("Maltsev check needs a ternary operation");
    for (int x = 0; x < p.universe_size(); ++x)
        for (int y = 0; y < p.universe_size(); ++y)
            if (p(x, x, y) != y || p(y, x, x) != y) return false;
    return true;
}

OpTable alternating_from_maltsev(const OpTable& p, int arity) {
    if (p.arity() != 3) throw ContractError("expected a ternary operation");
    if (arity < 3 || arity % 2 == 0) throw ContractError("alternating arity must be odd and at least 3");
    if (arity == 3) return p;
    return OpTable::from_function(p.universe_size(), arity, [&](std::span<const int> xs) {
        // a(x1..x_{2n+1}) = p(x1, x2, p(x3, x4, ... p(x_{2n-1}, x_{2n}, x_{2n+1})))
        int acc = xs[xs.size() - 1];
        for (std::size_t i = xs.size() - 1; i >= 2; i -= 2) acc = p(xs[i - 2], xs[i - 1], acc);
        return acc;
    });
}

}  // namespace acsp
