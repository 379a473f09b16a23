#include "acsp/relaxations.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>

namespace acsp {

std::vector<ElementSet> subsets_up_to(int n, int k) {
    std::vector<ElementSet> out;
    const int top = std::min(n, std::max(k, 0));
    for (int size = 0; size <= top; ++size) {
        ElementSet cur(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i) cur[static_cast<std::size_t>(i)] = i;
        while (true) {
            out.push_back(cur);
            int i = size - 1;
            while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - size + i) --i;
            if (i < 0) break;
            ++cur[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < size; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return out;
}

// ---------------------------------------------------------------- LabeledSystem

int LabeledSystem::add(VarKey key, bool nonneg) {
    if (index_.count(key)) throw ContractError("duplicate variable key");
    int v = system.add_variable(nonneg);
    index_.emplace(key, v);
    keys_.push_back(std::move(key));
    return v;
}

std::optional<int> LabeledSystem::find(const VarKey& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::string LabeledSystem::name(int var, const RelStructure& tmpl, const RelStructure& inst) const {
    const VarKey& k = key(var);
    std::ostringstream out;
    auto pairs = [&] {
        for (std::size_t i = 0; i < k.domain.size(); ++i) {
            if (i) out << ',';
            out << inst.universe()[static_cast<std::size_t>(k.domain[i])] << ':'
                << tmpl.universe()[static_cast<std::size_t>(k.values[i])];
        }
    };
    switch (k.kind) {
    case VarKey::Kind::LHom:
        out << "x[";
        pairs();
        out << ']';
        break;
    case VarKey::Kind::Lam:
        out << "l[";
        pairs();
        out << ']';
        break;
    case VarKey::Kind::Mu:
        out << "m[" << inst.vocabulary()[static_cast<std::size_t>(k.symbol)].name << ';';
        pairs();
        out << ']';
        break;
    }
    return out.str();
}

std::string LabeledSystem::dump(const RelStructure& tmpl, const RelStructure& inst) const {
    return system.dump([&](int v) { return name(v, tmpl, inst); });
}

// ---------------------------------------------------------------- KappaMap

KappaMap::KappaMap(int universe_size, int k) : n_(universe_size), k_(k) {
    if (k < 0 || universe_size < 0) throw ContractError("KappaMap needs nonnegative sizes");
    sets_ = subsets_up_to(universe_size, k);
    maps_.resize(sets_.size());
    down_.resize(sets_.size());
    up_.resize(sets_.size());
    for (std::size_t i = 0; i < sets_.size(); ++i) index_.emplace(sets_[i], i);
    for (std::size_t i = 0; i < sets_.size(); ++i) {
        const ElementSet& x = sets_[i];
        for (std::size_t p = 0; p < x.size(); ++p) {
            ElementSet y = x;
            y.erase(y.begin() + static_cast<std::ptrdiff_t>(p));
            down_[i].push_back(index_.at(y));
        }
        if (static_cast<int>(x.size()) < k) {
            for (int b = 0; b < universe_size; ++b) {
                if (std::binary_search(x.begin(), x.end(), b)) continue;
                ElementSet y = x;
                y.insert(std::lower_bound(y.begin(), y.end(), b), b);
                up_[i].push_back({b, index_.at(y)});
            }
        }
    }
}

std::optional<std::size_t> KappaMap::index_of(const ElementSet& x) const {
    auto it = index_.find(x);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void KappaMap::set_maps(std::size_t i, std::vector<Tuple> maps) {
    for (const auto& m : maps)
        if (m.size() != sets_[i].size()) throw ContractError("map length differs from its domain");
    std::sort(maps.begin(), maps.end());
    maps.erase(std::unique(maps.begin(), maps.end()), maps.end());
    maps_[i] = std::move(maps);
}

bool KappaMap::contains(std::size_t i, const Tuple& values) const {
    return std::binary_search(maps_[i].begin(), maps_[i].end(), values);
}

std::optional<std::size_t> KappaMap::position(std::size_t i, const Tuple& values) const {
    auto it = std::lower_bound(maps_[i].begin(), maps_[i].end(), values);
    if (it == maps_[i].end() || *it != values) return std::nullopt;
    return static_cast<std::size_t>(it - maps_[i].begin());
}

std::size_t KappaMap::total_maps() const {
    std::size_t t = 0;
    for (const auto& m : maps_) t += m.size();
    return t;
}

namespace {

void require_shared_vocabulary(const RelStructure& tmpl, const RelStructure& inst) {
    if (!(tmpl.vocabulary() == inst.vocabulary())) throw ContractError("template and instance vocabularies differ");
}

int position_in(const ElementSet& x, int element) {
    auto it = std::lower_bound(x.begin(), x.end(), element);
    if (it == x.end() || *it != element) return -1;
    return static_cast<int>(it - x.begin());
}

// Positions of X kept by a bitmask, and the matching restriction of values.
ElementSet pick(const Tuple& t, unsigned mask) {
    ElementSet out;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (mask & (1u << i)) out.push_back(t[i]);
    return out;
}

}  // namespace

KappaMap KappaMap::all_homs(const RelStructure& tmpl, const RelStructure& inst, int k) {
    require_shared_vocabulary(tmpl, inst);
    KappaMap kappa(inst.size(), k);
    const int a_size = tmpl.size();
    kappa.maps_[0] = {Tuple{}};
    for (std::size_t i = 1; i < kappa.sets_.size(); ++i) {
        const ElementSet& x = kappa.sets_[i];
        const int b = x.back();
        const std::size_t parent = kappa.down_[i][x.size() - 1];
        // Constraint tuples through b that lie inside X.
        std::vector<std::pair<std::size_t, const Tuple*>> local;
        for (const auto& inc : inst.incidences(b)) {
            const Tuple& t = inst.relation(inc.symbol)[inc.tuple];
            bool inside = std::all_of(t.begin(), t.end(), [&](int e) { return position_in(x, e) >= 0; });
            if (inside) local.push_back({inc.symbol, &t});
        }
        std::vector<Tuple> maps;
        Tuple image;
        for (const Tuple& f : kappa.maps_[parent]) {
            Tuple g = f;
            g.push_back(0);
            for (int a = 0; a < a_size; ++a) {
                g.back() = a;
                bool ok = true;
                for (const auto& [sym, t] : local) {
                    image.clear();
                    for (int e : *t) image.push_back(g[static_cast<std::size_t>(position_in(x, e))]);
                    if (!tmpl.contains(sym, image)) {
                        ok = false;
                        break;
                    }
                }
                if (ok) maps.push_back(g);
            }
        }
        kappa.maps_[i] = std::move(maps);  // already lexicographic
    }
    return kappa;
}

bool kappa_all_nonempty(const KappaMap& kappa) {
    for (std::size_t i = 0; i < kappa.num_sets(); ++i)
        if (kappa.maps(i).empty()) return false;
    return true;
}

// ---------------------------------------------------------------- builders

namespace {

// Variables x_{X,f} for every map in kappa; returns per-set offsets.
std::vector<int> add_kappa_variables(LabeledSystem& sys, const KappaMap& kappa) {
    std::vector<int> offset(kappa.num_sets());
    for (std::size_t i = 0; i < kappa.num_sets(); ++i) {
        offset[i] = sys.num_vars();
        for (const auto& f : kappa.maps(i)) sys.add(VarKey::lhom(kappa.set(i), f));
    }
    return offset;
}

// sum_{f in kappa(X), f|Y = g} x_{X,f} = x_{Y,g} for every g in kappa(Y).
void add_marginals(LabeledSystem& sys, const KappaMap& kappa, const std::vector<int>& offset, std::size_t xi,
                   unsigned mask) {
    const ElementSet& x = kappa.set(xi);
    const ElementSet y = pick(x, mask);
    const std::size_t yi = *kappa.index_of(y);
    std::vector<std::vector<LinTerm>> rows(kappa.maps(yi).size());
    for (std::size_t j = 0; j < kappa.maps(xi).size(); ++j) {
        auto pos = kappa.position(yi, pick(kappa.maps(xi)[j], mask));
        if (pos) rows[*pos].push_back({offset[xi] + static_cast<int>(j), Rational(1)});
    }
    for (std::size_t g = 0; g < rows.size(); ++g) {
        rows[g].push_back({offset[yi] + static_cast<int>(g), Rational(-1)});
        sys.system.add_equation(std::move(rows[g]), Rational(0));
    }
}

}  // namespace

LabeledSystem build_width_k(const RelStructure& tmpl, const RelStructure& inst, int k) {
    if (k < 1) throw ContractError("width must be positive");
    KappaMap kappa = KappaMap::all_homs(tmpl, inst, k);
    LabeledSystem sys;
    auto offset = add_kappa_variables(sys, kappa);
    for (std::size_t i = 1; i < kappa.num_sets(); ++i) {
        const unsigned full = (1u << kappa.set(i).size()) - 1;
        for (std::size_t p = 0; p < kappa.set(i).size(); ++p) add_marginals(sys, kappa, offset, i, full & ~(1u << p));
    }
    sys.system.add_equation({LinTerm{offset[0], Rational(1)}}, Rational(1));
    return sys;
}

LabeledSystem build_zaffine(const RelStructure& tmpl, const RelStructure& inst, int k, const KappaMap& kappa,
                            ZaffineOptions opts) {
    require_shared_vocabulary(tmpl, inst);
    if (kappa.k() != k || kappa.universe_size() != inst.size())
        throw ContractError("kappa is not defined on the subsets of the instance up to k");
    LabeledSystem sys;
    auto offset = add_kappa_variables(sys, kappa);
    for (std::size_t i = 0; i < kappa.num_sets(); ++i) {
        std::vector<LinTerm> all;
        for (std::size_t j = 0; j < kappa.maps(i).size(); ++j) all.push_back({offset[i] + static_cast<int>(j), Rational(1)});
        sys.system.add_equation(std::move(all), Rational(1));
    }
    for (std::size_t i = 1; i < kappa.num_sets(); ++i) {
        const std::size_t size = kappa.set(i).size();
        const unsigned full = (1u << size) - 1;
        if (opts.one_point_marginals) {
            for (std::size_t p = 0; p < size; ++p) add_marginals(sys, kappa, offset, i, full & ~(1u << p));
        } else {
            for (unsigned mask = 0; mask < full; ++mask) add_marginals(sys, kappa, offset, i, mask);
        }
    }
    return sys;
}

LabeledSystem build_ipk(const RelStructure& tmpl, const RelStructure& inst, int k) {
    require_shared_vocabulary(tmpl, inst);
    if (k < 1) throw ContractError("width must be positive");
    const int a_size = tmpl.size();
    LabeledSystem sys;
    const auto sets = subsets_up_to(inst.size(), k);
    std::unordered_map<ElementSet, std::size_t, TupleHash> set_index;
    std::vector<int> offset(sets.size());
    std::vector<int> power(static_cast<std::size_t>(k) + 1, 1);
    for (int i = 1; i <= k; ++i) power[static_cast<std::size_t>(i)] = power[static_cast<std::size_t>(i - 1)] * a_size;

    // lambda_{X,f} with f encoded in base |A|, first position most significant
    auto decode = [&](int code, std::size_t len) {
        Tuple f(len);
        for (std::size_t p = len; p-- > 0;) {
            f[p] = code % a_size;
            code /= a_size;
        }
        return f;
    };
    auto encode = [&](const Tuple& f) {
        int code = 0;
        for (int v : f) code = code * a_size + v;
        return code;
    };
    for (std::size_t i = 0; i < sets.size(); ++i) {
        set_index.emplace(sets[i], i);
        offset[i] = sys.num_vars();
        const int count = power[sets[i].size()];
        for (int c = 0; c < count; ++c) sys.add(VarKey::lam(sets[i], decode(c, sets[i].size())));
    }
    auto lam = [&](const ElementSet& x, const Tuple& f) { return offset[set_index.at(x)] + encode(f); };

    const auto& vocab = inst.vocabulary();
    std::vector<std::vector<int>> mu_offset(vocab.size());
    for (std::size_t s = 0; s < vocab.size(); ++s) {
        for (const Tuple& b : inst.relation(s)) {
            mu_offset[s].push_back(sys.num_vars());
            for (const Tuple& a : tmpl.relation(s)) sys.add(VarKey::mu(static_cast<int>(s), b, a));
        }
    }

    // B1 and B2
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const int count = power[sets[i].size()];
        std::vector<LinTerm> all;
        for (int c = 0; c < count; ++c) all.push_back({offset[i] + c, Rational(1)});
        sys.system.add_equation(std::move(all), Rational(1));
    }
    for (std::size_t i = 1; i < sets.size(); ++i) {
        const ElementSet& x = sets[i];
        const unsigned full = (1u << x.size()) - 1;
        const int count = power[x.size()];
        for (unsigned mask = 0; mask < full; ++mask) {
            const ElementSet y = pick(x, mask);
            std::vector<std::vector<LinTerm>> rows(static_cast<std::size_t>(power[y.size()]));
            for (int c = 0; c < count; ++c) {
                int g = encode(pick(decode(c, x.size()), mask));
                rows[static_cast<std::size_t>(g)].push_back({offset[i] + c, Rational(1)});
            }
            for (std::size_t g = 0; g < rows.size(); ++g) {
                rows[g].push_back({lam(y, decode(static_cast<int>(g), y.size())), Rational(-1)});
                sys.system.add_equation(std::move(rows[g]), Rational(0));
            }
        }
    }

    // B3, one equation per position set P (|P| <= k) and image of P; the
    // k-tuples of positions only repeat these.
    for (std::size_t s = 0; s < vocab.size(); ++s) {
        const int ar = vocab[s].arity;
        const auto& rel_a = tmpl.relation(s);
        for (unsigned mask = 1; mask < (1u << ar); ++mask) {
            if (std::popcount(mask) > k) continue;
            std::map<Tuple, std::vector<int>> groups;
            for (std::size_t t = 0; t < rel_a.size(); ++t) groups[pick(rel_a[t], mask)].push_back(static_cast<int>(t));
            for (std::size_t bi = 0; bi < inst.relation(s).size(); ++bi) {
                const Tuple& b = inst.relation(s)[bi];
                const Tuple bp = pick(b, mask);
                ElementSet x = bp;
                std::sort(x.begin(), x.end());
                x.erase(std::unique(x.begin(), x.end()), x.end());
                // the map bp -> v on X, or nullopt when bp repeats an element with two values
                auto as_map = [&](const Tuple& v) -> std::optional<Tuple> {
                    Tuple f(x.size(), -1);
                    for (std::size_t p = 0; p < bp.size(); ++p) {
                        int& slot = f[static_cast<std::size_t>(position_in(x, bp[p]))];
                        if (slot >= 0 && slot != v[p]) return std::nullopt;
                        slot = v[p];
                    }
                    return f;
                };
                for (const auto& [v, members] : groups) {
                    std::vector<LinTerm> row;
                    for (int t : members) row.push_back({mu_offset[s][bi] + t, Rational(1)});
                    if (auto f = as_map(v)) row.push_back({lam(x, *f), Rational(-1)});
                    sys.system.add_equation(std::move(row), Rational(0));
                }
                // images of X reached by no template tuple
                for (int c = 0; c < power[x.size()]; ++c) {
                    Tuple f = decode(c, x.size());
                    Tuple v(bp.size());
                    for (std::size_t p = 0; p < bp.size(); ++p) v[p] = f[static_cast<std::size_t>(position_in(x, bp[p]))];
                    if (!groups.count(v)) sys.system.add_equation({LinTerm{lam(x, f), Rational(1)}}, Rational(0));
                }
            }
        }
    }
    return sys;
}

Assignment translate_width_to_ipk(const RelStructure& tmpl, const RelStructure& inst, int k,
                                  const LabeledSystem& width, const Assignment& a, const LabeledSystem& ipk) {
    if (k < tmpl.vocabulary().max_arity()) throw ContractError("translation needs k at least the template arity");
    if (!check_solution(width.system, a, false)) throw ContractError("assignment does not solve the width-k system");
    (void)inst;
    Assignment out(static_cast<std::size_t>(ipk.num_vars()), Rational(0));
    for (int v = 0; v < ipk.num_vars(); ++v) {
        const VarKey& key = ipk.key(v);
        std::optional<int> src;
        if (key.kind == VarKey::Kind::Lam) {
            src = width.find(VarKey::lhom(key.domain, key.values));
        } else if (key.kind == VarKey::Kind::Mu) {
            std::map<int, int> f;
            bool consistent = true;
            for (std::size_t p = 0; p < key.domain.size(); ++p) {
                auto [it, fresh] = f.emplace(key.domain[p], key.values[p]);
                if (!fresh && it->second != key.values[p]) consistent = false;
            }
            if (consistent) {
                ElementSet x;
                Tuple vals;
                for (auto [e, val] : f) {
                    x.push_back(e);
                    vals.push_back(val);
                }
                src = width.find(VarKey::lhom(std::move(x), std::move(vals)));
            }
        }
        if (src) out[static_cast<std::size_t>(v)] = a[static_cast<std::size_t>(*src)];
    }
    return out;
}

bool check_subset_marginals(const LabeledSystem& sys, const Assignment& a) {
    if (static_cast<int>(a.size()) != sys.num_vars()) return false;
    // domain -> (values -> var)
    std::map<ElementSet, std::map<Tuple, int>> by_domain;
    for (int v = 0; v < sys.num_vars(); ++v) {
        const VarKey& key = sys.key(v);
        if (key.kind == VarKey::Kind::Mu) continue;
        by_domain[key.domain][key.values] = v;
    }
    for (const auto& [x, vars] : by_domain) {
        Rational total = 0;
        for (const auto& [f, v] : vars) total += a[static_cast<std::size_t>(v)];
        if (total != 1) return false;
        const unsigned full = (1u << x.size()) - 1;
        for (unsigned mask = 0; mask < full; ++mask) {
            std::map<Tuple, Rational> sums;
            for (const auto& [f, v] : vars) sums[pick(f, mask)] += a[static_cast<std::size_t>(v)];
            const ElementSet y = pick(x, mask);
            auto it = by_domain.find(y);
            auto value_at = [&](const Tuple& g) -> Rational {
                if (it == by_domain.end()) return 0;
                auto jt = it->second.find(g);
                return jt == it->second.end() ? Rational(0) : a[static_cast<std::size_t>(jt->second)];
            };
            for (const auto& [g, s] : sums)
                if (s != value_at(g)) return false;
            if (it != by_domain.end())
                for (const auto& [g, v] : it->second)
                    if (!sums.count(g) && a[static_cast<std::size_t>(v)] != 0) return false;
        }
    }
    return true;
}

bool check_subset_marginals(const Assignment& a, const RelStructure& tmpl, const RelStructure& inst, int k) {
    LabeledSystem width = build_width_k(tmpl, inst, k);
    if (static_cast<int>(a.size()) != width.num_vars()) return false;
    std::map<ElementSet, bool> seen;
    for (const auto& key : width.keys()) seen[key.domain] = true;
    for (const auto& x : subsets_up_to(inst.size(), k))
        if (!seen.count(x)) return false;
    return check_subset_marginals(width, a);
}

}  // namespace acsp
