#include "acsp/linalg.hpp"

#include "elimination.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "acsp/structure.hpp"

namespace acsp {

int LinSystem::add_variable(bool nonneg) {
    nonneg_.push_back(nonneg);
    return static_cast<int>(nonneg_.size()) - 1;
}

void LinSystem::add_equation(std::vector<LinTerm> terms, Rational rhs) {
    std::sort(terms.begin(), terms.end(), [](const LinTerm& a, const LinTerm& b) { return a.var < b.var; });
    Equation eq;
    eq.rhs = std::move(rhs);
    for (auto& t : terms) {
        if (t.var < 0 || t.var >= num_vars()) throw ContractError("equation uses an undeclared variable");
        if (!eq.terms.empty() && eq.terms.back().var == t.var)
            eq.terms.back().coef += t.coef;
        else
            eq.terms.push_back(std::move(t));
        if (eq.terms.back().coef == 0) eq.terms.pop_back();
    }
    equations_.push_back(std::move(eq));
}

void LinSystem::add_equation(const std::vector<std::pair<int, int>>& terms, int rhs) {
    std::vector<LinTerm> t;
    t.reserve(terms.size());
    for (auto [v, c] : terms) t.push_back({v, Rational(c)});
    add_equation(std::move(t), Rational(rhs));
}

void LinSystem::set_nonneg(int var, bool on) {
    if (var < 0 || var >= num_vars()) throw ContractError("undeclared variable");
    nonneg_[static_cast<std::size_t>(var)] = on;
}

void LinSystem::set_all_nonneg(bool on) { std::fill(nonneg_.begin(), nonneg_.end(), on); }

void LinSystem::pin(int var, Rational value) {
    if (var < 0 || var >= num_vars()) throw ContractError("undeclared variable");
    pins_[var] = std::move(value);
}

std::string LinSystem::dump(const std::function<std::string(int)>& name) const {
    std::ostringstream out;
    for (const auto& eq : equations_) {
        bool first = true;
        for (const auto& t : eq.terms) {
            if (!first) out << ' ';
            first = false;
            out << t.coef.str() << '*' << name(t.var);
        }
        if (first) out << '0';
        out << " = " << eq.rhs.str() << '\n';
    }
    for (const auto& [v, val] : pins_) out << "1*" << name(v) << " = " << val.str() << '\n';
    return out.str();
}

bool check_solution(const LinSystem& sys, const Assignment& a, bool respect_nonneg) {
    if (static_cast<int>(a.size()) != sys.num_vars()) return false;
    for (const auto& eq : sys.equations()) {
        Rational lhs = 0;
        for (const auto& t : eq.terms) lhs += t.coef * a[static_cast<std::size_t>(t.var)];
        if (lhs != eq.rhs) return false;
    }
    for (const auto& [v, val] : sys.pins())
        if (a[static_cast<std::size_t>(v)] != val) return false;
    if (respect_nonneg)
        for (int v = 0; v < sys.num_vars(); ++v)
            if (sys.nonneg(v) && a[static_cast<std::size_t>(v)] < 0) return false;
    return true;
}

// ---------------------------------------------------------------- rational

namespace {

template <class Num> std::vector<detail::SparseRow<Num>> rational_rows(const LinSystem& sys) {
    std::vector<detail::SparseRow<Num>> rows;
    rows.reserve(sys.equations().size() + sys.pins().size());
    for (const auto& eq : sys.equations()) {
        detail::SparseRow<Num> r;
        for (const auto& t : eq.terms) r.terms.push_back({t.var, NumberTier<Num>::from(t.coef)});
        r.rhs = NumberTier<Num>::from(eq.rhs);
        rows.push_back(std::move(r));
    }
    for (const auto& [v, val] : sys.pins()) {
        detail::SparseRow<Num> r;
        r.terms.push_back({v, Num(1)});
        r.rhs = NumberTier<Num>::from(val);
        rows.push_back(std::move(r));
    }
    return rows;
}

template <class Num> std::optional<Assignment> solve_rational_with(const LinSystem& sys) {
    detail::Eliminator<Num, false> elim(sys.num_vars(), rational_rows<Num>(sys));
    if (!elim.run()) return std::nullopt;
    std::vector<Num> value(static_cast<std::size_t>(elim.total_vars()), Num(0));
    const auto& recs = elim.records();
    for (auto it = recs.rbegin(); it != recs.rend(); ++it) {
        Num v = it->constant;
        for (const auto& [u, c] : it->terms) v += c * value[static_cast<std::size_t>(u)];
        value[static_cast<std::size_t>(it->var)] = v;
    }
    Assignment out;
    out.reserve(static_cast<std::size_t>(sys.num_vars()));
    for (int v = 0; v < sys.num_vars(); ++v) out.push_back(NumberTier<Num>::big(value[static_cast<std::size_t>(v)]));
    return out;
}

}  // namespace

std::optional<Assignment> solve_rational(const LinSystem& sys) {
    try {
        return solve_rational_with<SmallRational>(sys);
    } catch (const NumericOverflow&) {
        return solve_rational_with<Rational>(sys);
    }
}

// ---------------------------------------------------------------- integral

struct IntegerLattice::Impl {
    int num_vars = 0;
    int total_vars = 0;
    std::vector<int> record_of;  // var -> record index or -1
    std::vector<detail::Record<BigInt>> records;
    mutable std::vector<std::unique_ptr<Expr>> cache;

    const Expr& expr(int var) const;
};

namespace {

template <class Num> std::vector<detail::SparseRow<Num>> integer_rows(const LinSystem& sys, bool& ok) {
    std::vector<detail::SparseRow<Num>> rows;
    ok = true;
    auto push = [&](const std::vector<LinTerm>& terms, const Rational& rhs) {
        BigInt l = denominator(rhs);
        for (const auto& t : terms) l = lcm_big(l, BigInt(denominator(t.coef)));
        detail::SparseRow<Num> r;
        for (const auto& t : terms) {
            BigInt c = numerator(t.coef) * (l / denominator(t.coef));
            r.terms.push_back({t.var, NumberTier<Num>::from(c)});
        }
        BigInt b = numerator(rhs) * (l / denominator(rhs));
        r.rhs = NumberTier<Num>::from(b);
        rows.push_back(std::move(r));
    };
    for (const auto& eq : sys.equations()) push(eq.terms, eq.rhs);
    for (const auto& [v, val] : sys.pins()) push({LinTerm{v, Rational(1)}}, val);
    return rows;
}

template <class Num> std::unique_ptr<IntegerLattice::Impl> lattice_with(int num_vars,
                                                                        std::vector<detail::SparseRow<Num>> rows) {
    detail::Eliminator<Num, true> elim(num_vars, std::move(rows));
    if (!elim.run()) return nullptr;
    auto impl = std::make_unique<IntegerLattice::Impl>();
    impl->num_vars = num_vars;
    impl->total_vars = elim.total_vars();
    impl->record_of.assign(static_cast<std::size_t>(elim.total_vars()), -1);
    for (const auto& r : elim.records()) {
        detail::Record<BigInt> big{r.var, NumberTier<Num>::big(r.constant), {}};
        for (const auto& [v, c] : r.terms) big.terms.push_back({v, NumberTier<Num>::big(c)});
        impl->record_of[static_cast<std::size_t>(r.var)] = static_cast<int>(impl->records.size());
        impl->records.push_back(std::move(big));
    }
    impl->cache.resize(static_cast<std::size_t>(elim.total_vars()));
    return impl;
}

template <class Num>
std::vector<detail::SparseRow<Num>> convert_rows(const std::vector<detail::SparseRow<BigInt>>& rows) {
    std::vector<detail::SparseRow<Num>> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        detail::SparseRow<Num> o;
        for (const auto& [v, c] : r.terms) o.terms.push_back({v, NumberTier<Num>::from(c)});
        o.rhs = NumberTier<Num>::from(r.rhs);
        out.push_back(std::move(o));
    }
    return out;
}

template <class Num> bool feasible_only(int num_vars, std::vector<detail::SparseRow<Num>> rows) {
    detail::Eliminator<Num, true> elim(num_vars, std::move(rows));
    return elim.run();
}

}  // namespace

const IntegerLattice::Expr& IntegerLattice::Impl::expr(int var) const {
    // Iterative post-order over the record DAG.
    std::vector<int> stack{var};
    while (!stack.empty()) {
        int v = stack.back();
        auto uv = static_cast<std::size_t>(v);
        if (cache[uv]) {
            stack.pop_back();
            continue;
        }
        int ri = record_of[uv];
        if (ri < 0) {
            cache[uv] = std::make_unique<Expr>(Expr{0, {{v, 1}}});
            stack.pop_back();
            continue;
        }
        const auto& rec = records[static_cast<std::size_t>(ri)];
        bool ready = true;
        for (const auto& [u, c] : rec.terms) {
            if (!cache[static_cast<std::size_t>(u)]) {
                stack.push_back(u);
                ready = false;
            }
        }
        if (!ready) continue;
        stack.pop_back();
        std::map<int, BigInt> acc;
        Expr e{rec.constant, {}};
        for (const auto& [u, c] : rec.terms) {
            const Expr& sub = *cache[static_cast<std::size_t>(u)];
            e.constant += c * sub.constant;
            for (const auto& [p, pc] : sub.terms) acc[p] += c * pc;
        }
        for (auto& [p, pc] : acc)
            if (pc != 0) e.terms.push_back({p, std::move(pc)});
        cache[uv] = std::make_unique<Expr>(std::move(e));
    }
    return *cache[static_cast<std::size_t>(var)];
}

IntegerLattice::IntegerLattice(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
IntegerLattice::IntegerLattice(IntegerLattice&&) noexcept = default;
IntegerLattice& IntegerLattice::operator=(IntegerLattice&&) noexcept = default;
IntegerLattice::~IntegerLattice() = default;

std::optional<IntegerLattice> IntegerLattice::solve(const LinSystem& sys) {
    bool ok = true;
    std::unique_ptr<Impl> impl;
    try {
        impl = lattice_with<SmallInt>(sys.num_vars(), integer_rows<SmallInt>(sys, ok));
    } catch (const NumericOverflow&) {
        impl = lattice_with<BigInt>(sys.num_vars(), integer_rows<BigInt>(sys, ok));
    }
    if (!impl) return std::nullopt;
    return IntegerLattice(std::move(impl));
}

int IntegerLattice::num_vars() const { return impl_->num_vars; }

Assignment IntegerLattice::particular() const {
    std::vector<BigInt> value(static_cast<std::size_t>(impl_->total_vars), 0);
    for (auto it = impl_->records.rbegin(); it != impl_->records.rend(); ++it) {
        BigInt v = it->constant;
        for (const auto& [u, c] : it->terms) v += c * value[static_cast<std::size_t>(u)];
        value[static_cast<std::size_t>(it->var)] = v;
    }
    Assignment out;
    for (int v = 0; v < impl_->num_vars; ++v) out.emplace_back(value[static_cast<std::size_t>(v)]);
    return out;
}

const IntegerLattice::Expr& IntegerLattice::expression(int var) const {
    if (var < 0 || var >= impl_->num_vars) throw ContractError("variable out of range");
    return impl_->expr(var);
}

bool IntegerLattice::feasible_with(std::span<const std::pair<int, BigInt>> fixes) const {
    std::unordered_map<int, int> compact;
    std::vector<detail::SparseRow<BigInt>> rows;
    for (const auto& [var, value] : fixes) {
        const Expr& e = expression(var);
        detail::SparseRow<BigInt> r;
        for (const auto& [p, c] : e.terms) {
            auto [it, fresh] = compact.emplace(p, static_cast<int>(compact.size()));
            r.terms.push_back({it->second, c});
        }
        std::sort(r.terms.begin(), r.terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        r.rhs = value - e.constant;
        if (r.terms.empty()) {
            if (r.rhs != 0) return false;
            continue;
        }
        rows.push_back(std::move(r));
    }
    const int n = static_cast<int>(compact.size());
    try {
        return feasible_only<SmallInt>(n, convert_rows<SmallInt>(rows));
    } catch (const NumericOverflow&) {
        return feasible_only<BigInt>(n, rows);
    }
}

std::optional<Assignment> solve_integral(const LinSystem& sys) {
    auto lat = IntegerLattice::solve(sys);
    if (!lat) return std::nullopt;
    return lat->particular();
}

// ---------------------------------------------------------------- HNF

HermiteResult hermite_normal_form(const IntMatrix& m) {
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    HermiteResult res;
    res.h = m;
    res.u.assign(rows, std::vector<BigInt>(rows, 0));
    for (std::size_t i = 0; i < rows; ++i) res.u[i][i] = 1;
    auto& h = res.h;
    auto& u = res.u;
    auto row_op = [&](std::size_t target, std::size_t src, const BigInt& factor) {
        // target -= factor * src
        for (std::size_t c = 0; c < cols; ++c) h[target][c] -= factor * h[src][c];
        for (std::size_t c = 0; c < rows; ++c) u[target][c] -= factor * u[src][c];
    };
    auto swap_rows = [&](std::size_t a, std::size_t b) {
        std::swap(h[a], h[b]);
        std::swap(u[a], u[b]);
    };
    auto negate_row = [&](std::size_t a) {
        for (auto& x : h[a]) x = -x;
        for (auto& x : u[a]) x = -x;
    };
    std::size_t pivot_row = 0;
    for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
        // Euclid on column c among rows >= pivot_row.
        while (true) {
            std::size_t best = rows;
            for (std::size_t r = pivot_row; r < rows; ++r)
                if (h[r][c] != 0 && (best == rows || abs(h[r][c]) < abs(h[best][c]))) best = r;
            if (best == rows) break;
            swap_rows(pivot_row, best);
            bool done = true;
            for (std::size_t r = pivot_row + 1; r < rows; ++r) {
                if (h[r][c] == 0) continue;
                BigInt q = h[r][c] / h[pivot_row][c];
                row_op(r, pivot_row, q);
                if (h[r][c] != 0) done = false;
            }
            if (done) break;
        }
        if (h[pivot_row][c] == 0) continue;
        if (h[pivot_row][c] < 0) negate_row(pivot_row);
        const BigInt& piv = h[pivot_row][c];
        for (std::size_t r = 0; r < pivot_row; ++r) {
            BigInt q = h[r][c] / piv;
            if (h[r][c] - q * piv < 0) q -= 1;
            if (q != 0) row_op(r, pivot_row, q);
        }
        ++pivot_row;
    }
    return res;
}

BigInt determinant(const IntMatrix& m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = Rational(m[i][j]);
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            Rational f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return numerator(det);
}

// ---------------------------------------------------------------- p-solutions

namespace {

// Exponent e with |x| = p^e, if any.
std::optional<long> power_exponent(const BigInt& x, const BigInt& p) {
    BigInt v = abs(x);
    if (v == 0) return std::nullopt;
    long e = 0;
    while (v % p == 0) {
        v /= p;
        ++e;
    }
    if (v != 1) return std::nullopt;
    return e;
}

long denominator_exponent(const Assignment& a, const BigInt& p) {
    long m = 0;
    for (const auto& q : a) {
        BigInt d = denominator(q);
        long e = 0;
        while (d % p == 0) {
            d /= p;
            ++e;
        }
        m = std::max(m, e);
    }
    return m;
}

BigInt power(const BigInt& base, long e) {
    BigInt r = 1;
    for (long i = 0; i < e; ++i) r *= base;
    return r;
}

}  // namespace

bool is_p_solution(const Assignment& a, const BigInt& p) {
    if (p < 2) throw ContractError("p must be at least 2");
    for (const auto& q : a) {
        if (q == 0) continue;
        if (q < 0) return false;
        if (numerator(q) == 1) {
            if (!power_exponent(denominator(q), p)) return false;
        } else if (denominator(q) == 1) {
            if (!power_exponent(numerator(q), p)) return false;
        } else {
            return false;
        }
    }
    return true;
}

bool has_power_denominators(const Assignment& a, const BigInt& p) {
    if (p < 2) throw ContractError("p must be at least 2");
    for (const auto& q : a)
        if (!power_exponent(denominator(q), p)) return false;
    return true;
}

BigInt crt_multiplier(const Assignment& phi_p, const Assignment& phi_q, const BigInt& p, const BigInt& q) {
    const long m = std::max(denominator_exponent(phi_p, p), denominator_exponent(phi_q, q));
    const BigInt pm = power(p, m), qm = power(q, m);
    // lambda = pm * s with pm * s = 1 mod qm
    BigInt s, t;
    BigInt g = ext_gcd<BigInt>(pm, qm, s, t);
    if (g != 1) throw ContractError("moduli are not coprime");
    BigInt lambda = pm * s;
    BigInt modulus = pm * qm;
    lambda %= modulus;
    if (lambda < 0) lambda += modulus;
    return lambda;
}

Assignment crt_combine(const LinSystem& sys, const Assignment& phi_p, const Assignment& phi_q, const BigInt& p,
                       const BigInt& q) {
    if (gcd(p, q) != 1) throw ContractError("p and q must be coprime");
    if (!check_solution(sys, phi_p, false) || !check_solution(sys, phi_q, false))
        throw ContractError("inputs must solve the system");
    if (!has_power_denominators(phi_p, p) || !has_power_denominators(phi_q, q))
        throw ContractError("input denominators must be powers of p and q respectively");
    const Rational lambda(crt_multiplier(phi_p, phi_q, p, q));
    Assignment out(phi_p.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = lambda * phi_p[i] + (1 - lambda) * phi_q[i];
    return out;
}

}  // namespace acsp
