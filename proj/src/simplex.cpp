// Exact two-phase simplex on a dense tableau with implicit artificial
// columns, plus a presolve that substitutes pins and forced zeros.
#include "acsp/linalg.hpp"
#include "acsp/structure.hpp"

#include <algorithm>
#include <deque>

namespace acsp {

namespace {

struct Presolved {
    bool infeasible = false;
    std::vector<std::optional<Rational>> fixed;          // per original var
    std::vector<std::vector<std::pair<int, Rational>>> rows;  // remaining, original var ids
    std::vector<Rational> rhs;
};

Presolved presolve(const LinSystem& sys) {
    const int n = sys.num_vars();
    Presolved p;
    p.fixed.assign(static_cast<std::size_t>(n), std::nullopt);
    std::vector<std::vector<std::pair<int, Rational>>> rows;
    std::vector<Rational> rhs;
    for (const auto& eq : sys.equations()) {
        std::vector<std::pair<int, Rational>> r;
        for (const auto& t : eq.terms) r.push_back({t.var, t.coef});
        rows.push_back(std::move(r));
        rhs.push_back(eq.rhs);
    }
    std::vector<std::vector<int>> cols(static_cast<std::size_t>(n));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (const auto& [v, c] : rows[r]) cols[static_cast<std::size_t>(v)].push_back(static_cast<int>(r));
    std::vector<char> alive(rows.size(), 1), queued(rows.size(), 1);
    std::deque<int> work;
    for (std::size_t r = 0; r < rows.size(); ++r) work.push_back(static_cast<int>(r));

    auto fix = [&](int v, const Rational& val) -> bool {
        auto uv = static_cast<std::size_t>(v);
        if (p.fixed[uv]) return *p.fixed[uv] == val;
        if (sys.nonneg(v) && val < 0) return false;
        p.fixed[uv] = val;
        for (int r : cols[uv]) {
            auto ur = static_cast<std::size_t>(r);
            if (!alive[ur]) continue;
            auto& row = rows[ur];
            auto it = std::find_if(row.begin(), row.end(), [v](const auto& t) { return t.first == v; });
            if (it == row.end()) continue;
            rhs[ur] -= it->second * val;
            row.erase(it);
            if (!queued[ur]) {
                queued[ur] = 1;
                work.push_back(r);
            }
        }
        return true;
    };

    for (const auto& [v, val] : sys.pins()) {
        if (!fix(v, val)) {
            p.infeasible = true;
            return p;
        }
    }
    while (!work.empty()) {
        const int r = work.front();
        work.pop_front();
        auto ur = static_cast<std::size_t>(r);
        queued[ur] = 0;
        if (!alive[ur]) continue;
        auto& row = rows[ur];
        if (row.empty()) {
            alive[ur] = 0;
            if (rhs[ur] != 0) {
                p.infeasible = true;
                return p;
            }
            continue;
        }
        if (row.size() == 1) {
            alive[ur] = 0;
            const auto [v, c] = row[0];
            if (!fix(v, rhs[ur] / c)) {
                p.infeasible = true;
                return p;
            }
            continue;
        }
        int s = 0;
        bool uniform = true;
        for (const auto& [v, c] : row) {
            int cs = c.sign();
            if (!sys.nonneg(v) || (s != 0 && cs != s)) {
                uniform = false;
                break;
            }
            s = cs;
        }
        if (uniform) {
            int rs = rhs[ur].sign();
            if (rs == -s) {
                p.infeasible = true;
                return p;
            }
            if (rs == 0) {
                alive[ur] = 0;
                auto vars = row;
                for (const auto& [v, c] : vars) {
                    if (!fix(v, Rational(0))) {
                        p.infeasible = true;
                        return p;
                    }
                }
            }
        }
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!alive[r]) continue;
        p.rows.push_back(std::move(rows[r]));
        p.rhs.push_back(std::move(rhs[r]));
    }
    return p;
}

// Column layout of the residual LP. A free variable gets a plus and a minus column.
struct Layout {
    std::vector<int> plus;   // per original var: column or -1
    std::vector<int> minus;  // per original var: column or -1
    std::vector<int> owner;  // per column: original var
    std::vector<int> sign;   // per column: +1 / -1
    int columns = 0;
};

Layout make_layout(const LinSystem& sys, const Presolved& p) {
    Layout l;
    const auto n = static_cast<std::size_t>(sys.num_vars());
    l.plus.assign(n, -1);
    l.minus.assign(n, -1);
    std::vector<char> used(n, 0);
    for (const auto& r : p.rows)
        for (const auto& [v, c] : r) used[static_cast<std::size_t>(v)] = 1;
    for (std::size_t v = 0; v < n; ++v) {
        if (!used[v] || p.fixed[v]) continue;
        l.plus[v] = l.columns++;
        l.owner.push_back(static_cast<int>(v));
        l.sign.push_back(1);
        if (!sys.nonneg(static_cast<int>(v))) {
            l.minus[v] = l.columns++;
            l.owner.push_back(static_cast<int>(v));
            l.sign.push_back(-1);
        }
    }
    return l;
}

template <class Num> class Tableau {
public:
    Tableau(const Presolved& p, const Layout& l) : n_(l.columns) {
        const std::size_t m = p.rows.size();
        t_.assign(m, std::vector<Num>(static_cast<std::size_t>(n_), Num(0)));
        b_.resize(m);
        basis_.assign(m, -1);
        for (std::size_t i = 0; i < m; ++i) {
            for (const auto& [v, c] : p.rows[i]) {
                Num cc = NumberTier<Num>::from(c);
                auto uv = static_cast<std::size_t>(v);
                t_[i][static_cast<std::size_t>(l.plus[uv])] += cc;
                if (l.minus[uv] >= 0) t_[i][static_cast<std::size_t>(l.minus[uv])] -= cc;
            }
            b_[i] = NumberTier<Num>::from(p.rhs[i]);
            if (b_[i] < Num(0)) {
                for (auto& x : t_[i]) x = -x;
                b_[i] = -b_[i];
            }
        }
    }

    bool phase1() {
        const std::size_t m = t_.size();
        std::vector<Num> w(static_cast<std::size_t>(n_), Num(0));
        Num wr(0);
        for (std::size_t i = 0; i < m; ++i) {
            for (int j = 0; j < n_; ++j)
                if (!is_zero(t_[i][static_cast<std::size_t>(j)])) w[static_cast<std::size_t>(j)] += t_[i][static_cast<std::size_t>(j)];
            wr += b_[i];
        }
        bland_ = false;
        int degenerate = 0;
        while (true) {
            int enter = choose_entering(w, true);
            if (enter < 0) break;
            int leave = ratio_test(enter);
            if (leave < 0) break;  // cannot happen for phase 1
            if (is_zero(b_[static_cast<std::size_t>(leave)])) {
                if (++degenerate > 50) bland_ = true;
            } else {
                degenerate = 0;
            }
            pivot(leave, enter, &w, &wr);
        }
        if (!is_zero(wr)) return false;
        // Drive remaining artificials out or drop their rows.
        for (std::size_t i = 0; i < t_.size();) {
            if (basis_[i] >= 0) {
                ++i;
                continue;
            }
            int j = 0;
            while (j < n_ && is_zero(t_[i][static_cast<std::size_t>(j)])) ++j;
            if (j < n_) {
                pivot(static_cast<int>(i), j, nullptr, nullptr);
                ++i;
            } else {
                t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(i));
                b_.erase(b_.begin() + static_cast<std::ptrdiff_t>(i));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
            }
        }
        return true;
    }

    // Maximize c from the current feasible basis. Returns false when unbounded,
    // in which case ray receives a nonnegative improving direction.
    bool maximize(const std::vector<Num>& c, std::vector<Num>* ray) {
        const std::size_t m = t_.size();
        std::vector<Num> d(c);  // d_j = c_j - sum_i c_{B_i} t_ij; enter when positive
        for (std::size_t i = 0; i < m; ++i) {
            const Num& cb = c[static_cast<std::size_t>(basis_[i])];
            if (is_zero(cb)) continue;
            for (int j = 0; j < n_; ++j)
                if (!is_zero(t_[i][static_cast<std::size_t>(j)])) d[static_cast<std::size_t>(j)] -= cb * t_[i][static_cast<std::size_t>(j)];
        }
        bland_ = false;
        int degenerate = 0;
        Num dummy(0);
        while (true) {
            int enter = choose_entering(d, true);
            if (enter < 0) return true;
            int leave = ratio_test(enter);
            if (leave < 0) {
                if (ray) {
                    ray->assign(static_cast<std::size_t>(n_), Num(0));
                    (*ray)[static_cast<std::size_t>(enter)] = Num(1);
                    for (std::size_t i = 0; i < m; ++i)
                        (*ray)[static_cast<std::size_t>(basis_[i])] = -t_[i][static_cast<std::size_t>(enter)];
                }
                return false;
            }
            if (is_zero(b_[static_cast<std::size_t>(leave)])) {
                if (++degenerate > 50) bland_ = true;
            } else {
                degenerate = 0;
            }
            pivot(leave, enter, &d, &dummy);
        }
    }

    std::vector<Num> point() const {
        std::vector<Num> x(static_cast<std::size_t>(n_), Num(0));
        for (std::size_t i = 0; i < t_.size(); ++i)
            if (basis_[i] >= 0) x[static_cast<std::size_t>(basis_[i])] = b_[i];
        return x;
    }

private:
    int choose_entering(const std::vector<Num>& gain, bool) const {
        int best = -1;
        for (int j = 0; j < n_; ++j) {
            const Num& g = gain[static_cast<std::size_t>(j)];
            if (!(Num(0) < g)) continue;
            if (bland_) return j;
            if (best < 0 || gain[static_cast<std::size_t>(best)] < g) best = j;
        }
        return best;
    }

    int ratio_test(int enter) const {
        int best = -1;
        Num best_ratio(0);
        const auto je = static_cast<std::size_t>(enter);
        for (std::size_t i = 0; i < t_.size(); ++i) {
            const Num& a = t_[i][je];
            if (!(Num(0) < a)) continue;
            Num ratio = b_[i] / a;
            if (best < 0 || ratio < best_ratio ||
                (ratio == best_ratio && key(i) < key(static_cast<std::size_t>(best)))) {
                best = static_cast<int>(i);
                best_ratio = ratio;
            }
        }
        return best;
    }

    // Artificials leave first; otherwise lowest column index (Bland).
    long key(std::size_t row) const { return basis_[row] < 0 ? -1 - static_cast<long>(row) : basis_[row]; }

    void pivot(int r, int j, std::vector<Num>* obj, Num* obj_rhs) {
        const auto ur = static_cast<std::size_t>(r);
        const auto uj = static_cast<std::size_t>(j);
        const Num inv = Num(1) / t_[ur][uj];
        std::vector<int> nz;
        for (int k = 0; k < n_; ++k) {
            auto uk = static_cast<std::size_t>(k);
            if (is_zero(t_[ur][uk])) continue;
            t_[ur][uk] *= inv;
            nz.push_back(k);
        }
        b_[ur] *= inv;
        auto eliminate = [&](std::vector<Num>& row, Num& rhs) {
            const Num f = row[uj];
            if (is_zero(f)) return;
            for (int k : nz) row[static_cast<std::size_t>(k)] -= f * t_[ur][static_cast<std::size_t>(k)];
            rhs -= f * b_[ur];
        };
        for (std::size_t i = 0; i < t_.size(); ++i)
            if (i != ur) eliminate(t_[i], b_[i]);
        if (obj) eliminate(*obj, *obj_rhs);
        basis_[ur] = j;
    }

    int n_;
    std::vector<std::vector<Num>> t_;
    std::vector<Num> b_;
    std::vector<int> basis_;
    bool bland_ = false;
};

Assignment assemble(const LinSystem& sys, const Presolved& p, const Layout& l, const std::vector<Rational>& cols,
                    const Rational& unused_value) {
    Assignment a(static_cast<std::size_t>(sys.num_vars()), Rational(0));
    for (std::size_t v = 0; v < a.size(); ++v) {
        if (p.fixed[v]) {
            a[v] = *p.fixed[v];
        } else if (l.plus[v] < 0) {
            a[v] = unused_value;  // appears in no remaining equation
        }
    }
    for (int c = 0; c < l.columns; ++c) {
        auto v = static_cast<std::size_t>(l.owner[static_cast<std::size_t>(c)]);
        if (l.sign[static_cast<std::size_t>(c)] > 0)
            a[v] += cols[static_cast<std::size_t>(c)];
        else
            a[v] -= cols[static_cast<std::size_t>(c)];
    }
    return a;
}

template <class Num> std::vector<Rational> to_big(const std::vector<Num>& xs) {
    std::vector<Rational> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(NumberTier<Num>::big(x));
    return out;
}

template <class Num> std::optional<Assignment> feasible_with(const LinSystem& sys) {
    Presolved p = presolve(sys);
    if (p.infeasible) return std::nullopt;
    Layout l = make_layout(sys, p);
    Tableau<Num> tab(p, l);
    if (!tab.phase1()) return std::nullopt;
    return assemble(sys, p, l, to_big(tab.point()), Rational(0));
}

template <class Num> std::optional<LpOptimum> maximize_with(const LinSystem& sys, const std::vector<LinTerm>& obj) {
    Presolved p = presolve(sys);
    if (p.infeasible) return std::nullopt;
    Layout l = make_layout(sys, p);
    Tableau<Num> tab(p, l);
    if (!tab.phase1()) return std::nullopt;
    std::vector<Num> c(static_cast<std::size_t>(l.columns), Num(0));
    LpOptimum res;
    for (const auto& t : obj) {
        auto v = static_cast<std::size_t>(t.var);
        if (p.fixed[v]) continue;
        if (l.plus[v] < 0) {
            // Unconstrained variable: unbounded unless sign pins it at 0.
            if (t.coef > 0 || !sys.nonneg(t.var)) res.unbounded = true;
            continue;
        }
        c[static_cast<std::size_t>(l.plus[v])] += NumberTier<Num>::from(t.coef);
        if (l.minus[v] >= 0) c[static_cast<std::size_t>(l.minus[v])] -= NumberTier<Num>::from(t.coef);
    }
    if (res.unbounded) return res;
    std::vector<Num> ray;
    if (!tab.maximize(c, &ray)) {
        res.unbounded = true;
        return res;
    }
    res.point = assemble(sys, p, l, to_big(tab.point()), Rational(0));
    res.value = 0;
    for (const auto& t : obj) res.value += t.coef * res.point[static_cast<std::size_t>(t.var)];
    return res;
}

template <class Num> std::optional<Assignment> interior_with(const LinSystem& sys) {
    Presolved p = presolve(sys);
    if (p.infeasible) return std::nullopt;
    Layout l = make_layout(sys, p);
    Tableau<Num> tab(p, l);
    if (!tab.phase1()) return std::nullopt;

    const auto ncol = static_cast<std::size_t>(l.columns);
    std::vector<std::vector<Num>> points{tab.point()};
    // Only columns of nonnegative variables are probed as a group; free
    // variables are split into two columns that may both grow without
    // changing the variable, so they are probed one by one afterwards.
    std::vector<char> seen(ncol, 0);
    for (std::size_t j = 0; j < ncol; ++j)
        if (!sys.nonneg(l.owner[j])) seen[j] = 1;
    auto mark = [&](const std::vector<Num>& x) {
        for (std::size_t j = 0; j < ncol; ++j)
            if (!is_zero(x[j])) seen[j] = 1;
    };
    mark(points.back());
    std::vector<Num> ray;
    while (true) {
        std::vector<Num> c(ncol, Num(0));
        bool any = false;
        for (std::size_t j = 0; j < ncol; ++j) {
            if (!seen[j]) {
                c[j] = Num(1);
                any = true;
            }
        }
        if (!any) break;
        if (!tab.maximize(c, &ray)) {
            std::vector<Num> x = tab.point();
            for (std::size_t j = 0; j < ncol; ++j) x[j] += ray[j];
            points.push_back(std::move(x));
        } else {
            std::vector<Num> x = tab.point();
            Num gain(0);
            for (std::size_t j = 0; j < ncol; ++j)
                if (!seen[j]) gain += x[j];
            if (is_zero(gain)) break;
            points.push_back(std::move(x));
        }
        mark(points.back());
    }
    auto value_of = [&](const std::vector<Num>& x, std::size_t v) {
        Num val(0);
        if (l.plus[v] >= 0) val += x[static_cast<std::size_t>(l.plus[v])];
        if (l.minus[v] >= 0) val -= x[static_cast<std::size_t>(l.minus[v])];
        return val;
    };
    for (std::size_t v = 0; v < static_cast<std::size_t>(sys.num_vars()); ++v) {
        if (l.minus[v] < 0) continue;
        bool nonzero = false;
        for (const auto& x : points)
            if (!is_zero(value_of(x, v))) nonzero = true;
        for (int dir : {1, -1}) {
            if (nonzero) break;
            std::vector<Num> c(ncol, Num(0));
            c[static_cast<std::size_t>(l.plus[v])] = Num(dir);
            c[static_cast<std::size_t>(l.minus[v])] = Num(-dir);
            std::vector<Num> x = tab.point();
            if (!tab.maximize(c, &ray)) {
                x = tab.point();
                for (std::size_t j = 0; j < ncol; ++j) x[j] += ray[j];
                if (is_zero(value_of(x, v))) {
                    for (std::size_t j = 0; j < ncol; ++j) x[j] += ray[j];
                }
            } else {
                x = tab.point();
            }
            if (!is_zero(value_of(x, v))) {
                nonzero = true;
                points.push_back(std::move(x));
            }
        }
    }

    // Columns of nonnegative variables cannot cancel under positive weights;
    // free variables can, so weights are varied until every attainable
    // variable stays nonzero.
    std::vector<char> want(static_cast<std::size_t>(sys.num_vars()), 0);
    for (const auto& x : points)
        for (std::size_t v = 0; v < want.size(); ++v)
            if (l.plus[v] >= 0 && !is_zero(value_of(x, v))) want[v] = 1;
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<Rational> weights;
        Rational total = 0;
        for (std::size_t k = 0; k < points.size(); ++k) {
            Rational w = attempt == 0 ? Rational(1) : Rational(static_cast<long>(k * static_cast<std::size_t>(attempt) + 1));
            weights.push_back(w);
            total += w;
        }
        std::vector<Rational> avg(ncol, Rational(0));
        for (std::size_t k = 0; k < points.size(); ++k)
            for (std::size_t j = 0; j < ncol; ++j)
                if (!is_zero(points[k][j])) avg[j] += weights[k] / total * NumberTier<Num>::big(points[k][j]);
        Assignment a = assemble(sys, p, l, avg, Rational(1));
        bool ok = true;
        for (std::size_t v = 0; v < want.size() && ok; ++v)
            if (want[v] && a[v] == 0) ok = false;
        if (ok) return a;
    }
    throw std::logic_error("could not combine support certificates");
}

}  // namespace

std::optional<Assignment> lp_feasible(const LinSystem& sys) {
    try {
        return feasible_with<SmallRational>(sys);
    } catch (const NumericOverflow&) {
        return feasible_with<Rational>(sys);
    }
}

std::optional<LpOptimum> lp_maximize(const LinSystem& sys, const std::vector<LinTerm>& objective) {
    try {
        return maximize_with<SmallRational>(sys, objective);
    } catch (const NumericOverflow&) {
        return maximize_with<Rational>(sys, objective);
    }
}

std::optional<Assignment> relative_interior_point(const LinSystem& sys) {
    try {
        return interior_with<SmallRational>(sys);
    } catch (const NumericOverflow&) {
        return interior_with<Rational>(sys);
    }
}

}  // namespace acsp
