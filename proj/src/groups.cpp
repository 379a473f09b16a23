#include "acsp/groups.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <unordered_set>

namespace acsp {

namespace {

using TupleSet = std::unordered_set<Tuple, TupleHash>;

// Every element of the magma reachable from gens by products, grown in place.
void grow_closure(const std::vector<std::vector<int>>& t, std::vector<int>& members, std::vector<char>& in, int x) {
    if (in[static_cast<std::size_t>(x)]) return;
    std::vector<int> pending{x};
    in[static_cast<std::size_t>(x)] = 1;
    while (!pending.empty()) {
        int z = pending.back();
        pending.pop_back();
        members.push_back(z);
        for (std::size_t i = 0; i < members.size(); ++i) {
            int y = members[i];
            for (int p : {t[static_cast<std::size_t>(y)][static_cast<std::size_t>(z)],
                          t[static_cast<std::size_t>(z)][static_cast<std::size_t>(y)]}) {
                if (!in[static_cast<std::size_t>(p)]) {
                    in[static_cast<std::size_t>(p)] = 1;
                    pending.push_back(p);
                }
            }
        }
    }
}

// Light's test: associativity only needs checking with a generating middle factor.
bool associative(const std::vector<std::vector<int>>& t) {
    const int n = static_cast<int>(t.size());
    auto assoc_at = [&](int g) {
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                const auto ux = static_cast<std::size_t>(x), uy = static_cast<std::size_t>(y),
                           ug = static_cast<std::size_t>(g);
                if (t[static_cast<std::size_t>(t[ux][ug])][uy] != t[ux][static_cast<std::size_t>(t[ug][uy])])
                    return false;
            }
        return true;
    };
    if (n <= 64) {
        for (int g = 0; g < n; ++g)
            if (!assoc_at(g)) return false;
        return true;
    }
    std::vector<int> members;
    std::vector<char> in(static_cast<std::size_t>(n), 0);
    for (int g = 0; g < n; ++g) {
        if (in[static_cast<std::size_t>(g)]) continue;
        if (!assoc_at(g)) return false;
        grow_closure(t, members, in, g);
    }
    return true;
}

long long lcm_ll(long long a, long long b) { return a / std::gcd(a, b) * b; }

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

int mod(long long a, int p) { return static_cast<int>(((a % p) + p) % p); }

int mod_pow(int a, int e, int p) {
    long long r = 1, b = a;
    while (e > 0) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return static_cast<int>(r);
}

}  // namespace

// ---------------------------------------------------------------- FiniteGroup

FiniteGroup::FiniteGroup(std::vector<std::string> names, std::vector<std::vector<int>> table)
    : names_(std::move(names)), table_(std::move(table)) {
    const int n = order();
    if (n == 0) throw DomainError("a group needs at least one element");
    if (n > kMaxTableOrder) throw ResourceError("group order exceeds the table limit");
    if (static_cast<int>(table_.size()) != n) throw DomainError("table must have one row per element");
    for (const auto& row : table_) {
        if (static_cast<int>(row.size()) != n) throw DomainError("table must be square");
        for (int v : row)
            if (v < 0 || v >= n) throw DomainError("table entry out of range");
    }
    index_names();
    int e = -1;
    for (int a = 0; a < n && e < 0; ++a) {
        bool ok = true;
        for (int x = 0; x < n && ok; ++x)
            ok = table_[static_cast<std::size_t>(a)][static_cast<std::size_t>(x)] == x &&
                 table_[static_cast<std::size_t>(x)][static_cast<std::size_t>(a)] == x;
        if (ok) e = a;
    }
    if (e < 0) throw DomainError("table has no identity");
    identity_ = e;
    inverse_.assign(static_cast<std::size_t>(n), -1);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (table_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] == e &&
                table_[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] == e) {
                inverse_[static_cast<std::size_t>(a)] = b;
                break;
            }
        }
        if (inverse_[static_cast<std::size_t>(a)] < 0) throw DomainError("element without inverse: " + name(a));
    }
    if (!associative(table_)) throw DomainError("table is not associative");
}

void FiniteGroup::index_names() {
    index_.clear();
    for (int a = 0; a < order(); ++a) {
        if (names_[static_cast<std::size_t>(a)].empty()) throw DomainError("empty element name");
        if (!index_.emplace(names_[static_cast<std::size_t>(a)], a).second)
            throw DomainError("duplicate element name: " + names_[static_cast<std::size_t>(a)]);
    }
}

FiniteGroup FiniteGroup::cyclic(int n) {
    if (n < 1) throw ContractError("cyclic group order must be positive");
    std::vector<std::string> names;
    std::vector<std::vector<int>> table(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    for (int a = 0; a < n; ++a) {
        names.push_back(std::to_string(a));
        for (int b = 0; b < n; ++b) table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = (a + b) % n;
    }
    return FiniteGroup(std::move(names), std::move(table));
}

FiniteGroup FiniteGroup::symmetric(int d) {
    if (d < 1) throw ContractError("degree must be positive");
    if (d > kMaxSymmetricDegree) throw ResourceError("symmetric group degree above " + std::to_string(kMaxSymmetricDegree));
    FiniteGroup g;
    std::vector<int> p(static_cast<std::size_t>(d));
    std::iota(p.begin(), p.end(), 0);
    do {
        g.perms_.push_back(p);
        std::string name;
        for (int v : p) name += static_cast<char>('1' + v);
        g.names_.push_back(std::move(name));
    } while (std::next_permutation(p.begin(), p.end()));
    g.index_names();
    g.identity_ = 0;
    g.inverse_.resize(g.perms_.size());
    for (std::size_t a = 0; a < g.perms_.size(); ++a) {
        std::vector<int> q(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) q[static_cast<std::size_t>(g.perms_[a][static_cast<std::size_t>(i)])] = i;
        g.inverse_[a] = g.rank(q);
    }
    return g;
}

FiniteGroup FiniteGroup::semidirect_z9_z3() {
    std::vector<std::string> names;
    auto index = [](int a, int b) { return 3 * a + b; };
    std::vector<std::vector<int>> table(27, std::vector<int>(27));
    const int act[3] = {1, 4, 7};  // 4^b mod 9
    for (int a = 0; a < 9; ++a)
        for (int b = 0; b < 3; ++b) {
            names.push_back(std::to_string(a) + ":" + std::to_string(b));
            for (int c = 0; c < 9; ++c)
                for (int d = 0; d < 3; ++d)
                    table[static_cast<std::size_t>(index(a, b))][static_cast<std::size_t>(index(c, d))] =
                        index((a + act[b] * c) % 9, (b + d) % 3);
        }
    return FiniteGroup(std::move(names), std::move(table));
}

FiniteGroup FiniteGroup::direct_product(const FiniteGroup& g, const FiniteGroup& h) {
    const long long n = static_cast<long long>(g.order()) * h.order();
    if (n > kMaxTableOrder) throw ResourceError("direct product exceeds the table limit");
    std::vector<std::string> names;
    std::vector<std::vector<int>> table(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    const int m = h.order();
    for (int a = 0; a < g.order(); ++a)
        for (int b = 0; b < m; ++b) {
            names.push_back("(" + g.name(a) + "," + h.name(b) + ")");
            for (int c = 0; c < g.order(); ++c)
                for (int d = 0; d < m; ++d)
                    table[static_cast<std::size_t>(a * m + b)][static_cast<std::size_t>(c * m + d)] =
                        g.mul(a, c) * m + h.mul(b, d);
        }
    return FiniteGroup(std::move(names), std::move(table));
}

int FiniteGroup::rank(const std::vector<int>& perm) const {
    const int d = static_cast<int>(perm.size());
    int r = 0;
    for (int i = 0; i < d; ++i) {
        int smaller = 0;
        for (int j = i + 1; j < d; ++j)
            if (perm[static_cast<std::size_t>(j)] < perm[static_cast<std::size_t>(i)]) ++smaller;
        r = r * (d - i) + smaller;
    }
    return r;
}

int FiniteGroup::mul(int a, int b) const {
    if (!table_.empty()) return table_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    const auto& pa = perms_[static_cast<std::size_t>(a)];
    const auto& pb = perms_[static_cast<std::size_t>(b)];
    std::vector<int> c(pa.size());
    for (std::size_t i = 0; i < pa.size(); ++i) c[i] = pb[static_cast<std::size_t>(pa[i])];
    return rank(c);
}

int FiniteGroup::inv(int a) const { return inverse_[static_cast<std::size_t>(a)]; }

int FiniteGroup::pow(int a, long long e) const {
    if (e < 0) {
        a = inv(a);
        e = -e;
    }
    int result = identity_;
    int base = a;
    while (e > 0) {
        if (e & 1) result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

int FiniteGroup::element_order(int a) const {
    int n = 1;
    for (int x = a; x != identity_; x = mul(x, a)) ++n;
    return n;
}

bool FiniteGroup::is_abelian() const {
    if (table_.empty()) return perms_.front().size() <= 2;
    for (int a = 0; a < order(); ++a)
        for (int b = a + 1; b < order(); ++b)
            if (mul(a, b) != mul(b, a)) return false;
    return true;
}

std::optional<int> FiniteGroup::element(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::vector<int>> FiniteGroup::table() const {
    if (!table_.empty()) return table_;
    if (order() > kMaxTableOrder) throw ResourceError("permutation group too large for a table");
    std::vector<std::vector<int>> t(static_cast<std::size_t>(order()), std::vector<int>(static_cast<std::size_t>(order())));
    for (int a = 0; a < order(); ++a)
        for (int b = 0; b < order(); ++b) t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = mul(a, b);
    return t;
}

bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
    if (a.names_ != b.names_) return false;
    if (a.table_.empty() == b.table_.empty()) return a.table_ == b.table_ && a.perms_ == b.perms_;
    for (int x = 0; x < a.order(); ++x)
        for (int y = 0; y < a.order(); ++y)
            if (a.mul(x, y) != b.mul(x, y)) return false;
    return true;
}

// ---------------------------------------------------------------- subgroups of powers

Tuple tuple_mul(const FiniteGroup& g, const Tuple& a, const Tuple& b) {
    Tuple out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = g.mul(a[i], b[i]);
    return out;
}

Tuple tuple_inv(const FiniteGroup& g, const Tuple& a) {
    Tuple out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = g.inv(a[i]);
    return out;
}

namespace {

void require_tuple(const FiniteGroup& g, const Tuple& t, int r) {
    if (static_cast<int>(t.size()) != r) throw ContractError("tuple length differs from the power");
    for (int v : t)
        if (v < 0 || v >= g.order()) throw ContractError("tuple entry is not a group element");
}

}  // namespace

std::vector<Tuple> subgroup_closure(const FiniteGroup& g, const std::vector<Tuple>& gens, int r) {
    if (r < 0) throw ContractError("negative power");
    for (const auto& t : gens) require_tuple(g, t, r);
    Tuple e(static_cast<std::size_t>(r), g.identity());
    TupleSet seen{e};
    std::vector<Tuple> out{e};
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (const auto& s : gens) {
            Tuple next = tuple_mul(g, out[i], s);
            if (seen.insert(next).second) out.push_back(std::move(next));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool is_subgroup(const FiniteGroup& g, const std::vector<Tuple>& set, int r) {
    if (set.empty()) return false;
    TupleSet members;
    for (const auto& t : set) {
        if (static_cast<int>(t.size()) != r) return false;
        for (int v : t)
            if (v < 0 || v >= g.order()) return false;
        members.insert(t);
    }
    if (!members.count(Tuple(static_cast<std::size_t>(r), g.identity()))) return false;
    for (const auto& a : members) {
        if (!members.count(tuple_inv(g, a))) return false;
        for (const auto& b : members)
            if (!members.count(tuple_mul(g, a, b))) return false;
    }
    return true;
}

std::vector<Tuple> generating_set(const FiniteGroup& g, const std::vector<Tuple>& subgroup) {
    if (subgroup.empty()) throw ContractError("empty subgroup");
    const int r = static_cast<int>(subgroup.front().size());
    std::vector<Tuple> gens;
    std::vector<Tuple> span = subgroup_closure(g, gens, r);
    for (const auto& t : subgroup) {
        if (std::binary_search(span.begin(), span.end(), t)) continue;
        gens.push_back(t);
        span = subgroup_closure(g, gens, r);
    }
    return gens;
}

std::vector<Tuple> right_coset(const FiniteGroup& g, const std::vector<Tuple>& subgroup, const Tuple& rep) {
    std::vector<Tuple> out;
    out.reserve(subgroup.size());
    for (const auto& d : subgroup) out.push_back(tuple_mul(g, d, rep));
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::vector<Tuple> all_tuples(const FiniteGroup& g, int r) {
    long long total = 1;
    for (int i = 0; i < r; ++i) {
        total *= g.order();
        if (total > kMaxPowerOrder) throw ResourceError("group power exceeds " + std::to_string(kMaxPowerOrder) + " elements");
    }
    std::vector<Tuple> out;
    Tuple t(static_cast<std::size_t>(r), 0);
    while (true) {
        out.push_back(t);
        int i = r - 1;
        while (i >= 0 && ++t[static_cast<std::size_t>(i)] == g.order()) t[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) break;
    }
    return out;
}

}  // namespace

std::vector<std::vector<Tuple>> all_subgroups(const FiniteGroup& g, int r) {
    const auto elements = all_tuples(g, r);
    std::set<std::vector<Tuple>> found;
    std::vector<std::vector<Tuple>> queue{subgroup_closure(g, {}, r)};
    found.insert(queue.front());
    for (std::size_t i = 0; i < queue.size(); ++i) {
        const auto gens = generating_set(g, queue[i]);
        for (const auto& x : elements) {
            if (std::binary_search(queue[i].begin(), queue[i].end(), x)) continue;
            auto more = gens;
            more.push_back(x);
            auto h = subgroup_closure(g, more, r);
            if (found.insert(h).second) queue.push_back(std::move(h));
        }
    }
    std::vector<std::vector<Tuple>> out(found.begin(), found.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
    return out;
}

// ---------------------------------------------------------------- commutators

int commutator(const FiniteGroup& g, int a, int b) { return g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b)); }

namespace {

std::vector<int> all_commutators(const FiniteGroup& g) {
    std::vector<char> seen(static_cast<std::size_t>(g.order()), 0);
    std::vector<int> out;
    for (int a = 0; a < g.order(); ++a)
        for (int b = 0; b < g.order(); ++b) {
            int c = commutator(g, a, b);
            if (!seen[static_cast<std::size_t>(c)]) {
                seen[static_cast<std::size_t>(c)] = 1;
                out.push_back(c);
            }
        }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<int> commutator_subgroup(const FiniteGroup& g) {
    std::vector<Tuple> gens;
    for (int c : all_commutators(g)) gens.push_back({c});
    std::vector<int> out;
    for (const auto& t : subgroup_closure(g, gens, 1)) out.push_back(t[0]);
    return out;
}

bool is_2_nilpotent(const FiniteGroup& g) {
    for (int c : all_commutators(g))
        for (int x = 0; x < g.order(); ++x)
            if (g.mul(c, x) != g.mul(x, c)) return false;
    return true;
}

int group_exponent(const FiniteGroup& g, const std::vector<int>& elements) {
    long long m = 1;
    for (int a : elements) m = lcm_ll(m, g.element_order(a));
    return static_cast<int>(m);
}

FiniteGroup baer_reduct(const FiniteGroup& g) {
    if (g.order() % 2 == 0) throw ContractError("Baer reduct needs odd order");
    if (!is_2_nilpotent(g)) throw ContractError("Baer reduct needs a 2-nilpotent group");
    const int m = group_exponent(g, commutator_subgroup(g));
    const int half = (m - 1) / 2;
    std::vector<std::vector<int>> table(static_cast<std::size_t>(g.order()), std::vector<int>(static_cast<std::size_t>(g.order())));
    for (int x = 0; x < g.order(); ++x)
        for (int y = 0; y < g.order(); ++y)
            table[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] =
                g.mul(g.mul(x, y), g.pow(commutator(g, x, y), half));
    return FiniteGroup(g.names(), std::move(table));
}

// ---------------------------------------------------------------- coset instances

CosetInstance::CosetInstance(FiniteGroup group, std::vector<std::string> variables,
                             std::vector<CosetConstraint> constraints)
    : group_(std::move(group)), variables_(std::move(variables)), constraints_(std::move(constraints)) {
    std::unordered_set<std::string> names(variables_.begin(), variables_.end());
    if (names.size() != variables_.size()) throw ContractError("duplicate variable name");
    for (auto& c : constraints_) {
        const int r = c.arity();
        if (r < 1) throw ContractError("constraint needs a nonempty scope");
        for (const auto& v : c.scope)
            if (!names.count(v)) throw ContractError("constraint mentions undeclared variable " + v);
        require_tuple(group_, c.rep, r);
        std::sort(c.subgroup.begin(), c.subgroup.end());
        c.subgroup.erase(std::unique(c.subgroup.begin(), c.subgroup.end()), c.subgroup.end());
        if (!is_subgroup(group_, c.subgroup, r)) throw ContractError("constraint set is not a subgroup of the power");
    }
}

int CosetInstance::variable_index(const std::string& name) const {
    auto it = std::find(variables_.begin(), variables_.end(), name);
    if (it == variables_.end()) throw ContractError("unknown variable " + name);
    return static_cast<int>(it - variables_.begin());
}

std::vector<int> CosetInstance::scope_indices(std::size_t constraint) const {
    std::vector<int> out;
    for (const auto& v : constraints_[constraint].scope) out.push_back(variable_index(v));
    return out;
}

std::vector<Tuple> CosetInstance::coset(std::size_t constraint) const {
    return right_coset(group_, constraints_[constraint].subgroup, constraints_[constraint].rep);
}

bool CosetInstance::satisfied_by(const std::vector<int>& assignment) const {
    if (assignment.size() != variables_.size()) return false;
    for (int v : assignment)
        if (v < 0 || v >= group_.order()) return false;
    for (std::size_t i = 0; i < constraints_.size(); ++i) {
        Tuple values;
        for (int v : scope_indices(i)) values.push_back(assignment[static_cast<std::size_t>(v)]);
        const auto& c = constraints_[i];
        Tuple shifted = tuple_mul(group_, values, tuple_inv(group_, c.rep));
        if (!std::binary_search(c.subgroup.begin(), c.subgroup.end(), shifted)) return false;
    }
    return true;
}

CosetStructures coset_to_structures(const CosetInstance& inst, const std::string& symbol_prefix) {
    std::map<std::vector<Tuple>, std::size_t> symbol_of;
    std::vector<Symbol> symbols;
    std::vector<std::vector<Tuple>> tmpl_rels, inst_rels;
    for (std::size_t i = 0; i < inst.constraints().size(); ++i) {
        auto coset = inst.coset(i);
        auto [it, fresh] = symbol_of.emplace(coset, symbols.size());
        if (fresh) {
            symbols.push_back({symbol_prefix + std::to_string(symbols.size()), inst.constraints()[i].arity()});
            tmpl_rels.push_back(std::move(coset));
            inst_rels.emplace_back();
        }
        inst_rels[it->second].push_back(inst.scope_indices(i));
    }
    Vocabulary vocab(symbols);
    return {RelStructure(vocab, inst.group().names(), std::move(tmpl_rels)),
            RelStructure(vocab, inst.variables(), std::move(inst_rels))};
}

RelStructure coset_template(const FiniteGroup& g, int r, const std::string& element_prefix,
                            const std::string& symbol_prefix) {
    if (r < 1) throw ContractError("arity must be positive");
    const auto elements = all_tuples(g, r);
    std::vector<std::vector<Tuple>> cosets;
    for (const auto& h : all_subgroups(g, r)) {
        TupleSet covered;
        for (const auto& x : elements) {
            if (covered.count(x)) continue;
            auto c = right_coset(g, h, x);
            covered.insert(c.begin(), c.end());
            cosets.push_back(std::move(c));
        }
    }
    std::sort(cosets.begin(), cosets.end());
    std::vector<Symbol> symbols;
    for (std::size_t i = 0; i < cosets.size(); ++i) symbols.push_back({symbol_prefix + std::to_string(i), r});
    std::vector<std::string> names;
    for (const auto& n : g.names()) names.push_back(element_prefix + n);
    return RelStructure(Vocabulary(symbols), names, std::move(cosets));
}

RelStructure coset_instance_over(const CosetInstance& inst, const RelStructure& tmpl) {
    if (tmpl.size() != inst.group().order()) throw ContractError("template universe is not the group");
    std::map<std::pair<int, std::vector<Tuple>>, std::size_t> symbol_of;
    const auto& vocab = tmpl.vocabulary();
    for (std::size_t s = 0; s < vocab.size(); ++s) symbol_of.emplace(std::pair{vocab[s].arity, tmpl.relation(s)}, s);
    std::vector<std::vector<Tuple>> rels(vocab.size());
    for (std::size_t i = 0; i < inst.constraints().size(); ++i) {
        auto it = symbol_of.find({inst.constraints()[i].arity(), inst.coset(i)});
        if (it == symbol_of.end()) throw ContractError("template has no relation for constraint " + std::to_string(i));
        rels[it->second].push_back(inst.scope_indices(i));
    }
    return RelStructure(vocab, inst.variables(), std::move(rels));
}

// ---------------------------------------------------------------- Z_p equations

ModularSystem coset_to_equations(const CosetInstance& inst) {
    const FiniteGroup& g = inst.group();
    const int p = g.order();
    if (!is_prime(p)) throw ContractError("equations need a cyclic group of prime order");
    ModularSystem out;
    out.modulus = p;
    out.instance_vars = static_cast<int>(inst.variables().size());
    out.to_additive.assign(static_cast<std::size_t>(p), 0);
    out.from_additive.assign(static_cast<std::size_t>(p), g.identity());
    const int gen = g.identity() == 0 ? 1 : 0;  // any other element generates
    int x = g.identity();
    for (int i = 0; i < p; ++i) {
        out.to_additive[static_cast<std::size_t>(x)] = i;
        out.from_additive[static_cast<std::size_t>(i)] = x;
        x = g.mul(x, gen);
    }
    out.system = LinSystem(out.instance_vars);
    for (std::size_t c = 0; c < inst.constraints().size(); ++c) {
        const auto& con = inst.constraints()[c];
        const auto scope = inst.scope_indices(c);
        const auto gens = generating_set(g, con.subgroup);
        std::vector<int> z;
        for (std::size_t i = 0; i < gens.size(); ++i) z.push_back(out.system.add_variable());
        for (std::size_t j = 0; j < scope.size(); ++j) {
            // alpha_j - sum_i z_i delta_ij = gamma_j
            std::vector<std::pair<int, int>> terms{{scope[j], 1}};
            for (std::size_t i = 0; i < gens.size(); ++i) {
                int coef = out.to_additive[static_cast<std::size_t>(gens[i][j])];
                if (coef != 0) terms.push_back({z[i], mod(-coef, p)});
            }
            out.system.add_equation(terms, out.to_additive[static_cast<std::size_t>(con.rep[j])]);
        }
    }
    return out;
}

std::optional<std::vector<int>> solve_mod_prime(const ModularSystem& sys) {
    const int p = sys.modulus;
    if (!is_prime(p)) throw ContractError("modulus must be prime");
    const int n = sys.system.num_vars();
    std::vector<std::vector<int>> rows;
    for (const auto& eq : sys.system.equations()) {
        std::vector<int> row(static_cast<std::size_t>(n) + 1, 0);
        for (const auto& t : eq.terms) {
            if (!is_integer(t.coef)) throw ContractError("modular system needs integer coefficients");
            row[static_cast<std::size_t>(t.var)] = mod(static_cast<long long>(BigInt(numerator(t.coef) % p)), p);
        }
        if (!is_integer(eq.rhs)) throw ContractError("modular system needs integer right-hand sides");
        row.back() = mod(static_cast<long long>(BigInt(numerator(eq.rhs) % p)), p);
        rows.push_back(std::move(row));
    }
    for (const auto& [var, value] : sys.system.pins()) {
        std::vector<int> row(static_cast<std::size_t>(n) + 1, 0);
        row[static_cast<std::size_t>(var)] = 1;
        row.back() = mod(static_cast<long long>(BigInt(numerator(value) % p)), p);
        rows.push_back(std::move(row));
    }
    std::vector<int> pivot_col;
    std::size_t rank = 0;
    for (int col = 0; col < n && rank < rows.size(); ++col) {
        std::size_t pr = rank;
        while (pr < rows.size() && rows[pr][static_cast<std::size_t>(col)] == 0) ++pr;
        if (pr == rows.size()) continue;
        std::swap(rows[pr], rows[rank]);
        const int inv = mod_pow(rows[rank][static_cast<std::size_t>(col)], p - 2, p);
        for (auto& v : rows[rank]) v = static_cast<int>(static_cast<long long>(v) * inv % p);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][static_cast<std::size_t>(col)] == 0) continue;
            const long long f = rows[r][static_cast<std::size_t>(col)];
            for (std::size_t c = 0; c < rows[r].size(); ++c)
                rows[r][c] = mod(rows[r][c] - f * rows[rank][c], p);
        }
        pivot_col.push_back(col);
        ++rank;
    }
    for (std::size_t r = rank; r < rows.size(); ++r)
        if (rows[r].back() != 0) return std::nullopt;
    std::vector<int> x(static_cast<std::size_t>(n), 0);
    for (std::size_t r = 0; r < rank; ++r) x[static_cast<std::size_t>(pivot_col[r])] = rows[r].back();
    return x;
}

}  // namespace acsp
