// Sparse substitution-based elimination shared by the rational and integral
// solvers. In integral mode every step is a unimodular change of variables:
// a variable with a unit coefficient is solved for, and otherwise two
// variables are rotated by an extended-gcd transform until one appears.
#pragma once

#include "acsp/numeric.hpp"

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

namespace acsp::detail {

template <class Num> struct SparseRow {
    std::vector<std::pair<int, Num>> terms;  // sorted by var
    Num rhs{};
};

// var = constant + sum coef * other
template <class Num> struct Record {
    int var;
    Num constant{};
    std::vector<std::pair<int, Num>> terms;
};

template <class Num> bool is_unit(const Num& x) {
    if constexpr (std::is_same_v<Num, SmallInt>) {
        return x.value() == 1 || x.value() == -1;
    } else {
        return x == 1 || x == -1;
    }
}

template <class Num, bool Integral> class Eliminator {
public:
    Eliminator(int num_vars, std::vector<SparseRow<Num>> rows)
        : total_vars_(num_vars), rows_(std::move(rows)), cols_(static_cast<std::size_t>(num_vars)),
          eliminated_(static_cast<std::size_t>(num_vars), 0) {
        active_.assign(rows_.size(), 1);
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            for (const auto& [v, c] : rows_[r].terms) cols_[static_cast<std::size_t>(v)].push_back(static_cast<int>(r));
            queue_.insert({rows_[r].terms.size(), static_cast<int>(r)});
        }
    }

    // False when the system is infeasible.
    bool run() {
        while (!queue_.empty()) {
            const int r = queue_.begin()->second;
            auto& row = rows_[static_cast<std::size_t>(r)];
            if (row.terms.empty()) {
                queue_.erase(queue_.begin());
                active_[static_cast<std::size_t>(r)] = 0;
                if (!is_zero(row.rhs)) return false;
                continue;
            }
            int pivot = choose_pivot(row);
            if (pivot >= 0) {
                queue_.erase(queue_.begin());
                active_[static_cast<std::size_t>(r)] = 0;
                solve_for(row, pivot);
                continue;
            }
            if constexpr (Integral) {
                if (row.terms.size() == 1) {
                    const Num& a = row.terms[0].second;
                    Num rem = row.rhs % a;
                    if (!is_zero(rem)) return false;
                    queue_.erase(queue_.begin());
                    active_[static_cast<std::size_t>(r)] = 0;
                    Record<Num> rec{row.terms[0].first, row.rhs / a, {}};
                    eliminate(std::move(rec));
                } else {
                    rotate(row);
                }
            }
        }
        return true;
    }

    int total_vars() const { return total_vars_; }
    const std::vector<Record<Num>>& records() const { return records_; }
    bool eliminated(int v) const { return eliminated_[static_cast<std::size_t>(v)] != 0; }

private:
    int choose_pivot(const SparseRow<Num>& row) const {
        int best = -1;
        std::size_t best_count = 0;
        for (const auto& [v, c] : row.terms) {
            if (Integral && !is_unit(c)) continue;
            std::size_t cnt = cols_[static_cast<std::size_t>(v)].size();
            if (best < 0 || cnt < best_count) {
                best = v;
                best_count = cnt;
            }
        }
        return best;
    }

    void solve_for(const SparseRow<Num>& row, int pivot) {
        Num a{};
        for (const auto& [v, c] : row.terms)
            if (v == pivot) a = c;
        Record<Num> rec{pivot, {}, {}};
        if constexpr (Integral) {
            // a is +-1 so dividing is multiplying
            rec.constant = row.rhs * a;
            for (const auto& [v, c] : row.terms)
                if (v != pivot) rec.terms.push_back({v, -(c * a)});
        } else {
            rec.constant = row.rhs / a;
            for (const auto& [v, c] : row.terms)
                if (v != pivot) rec.terms.push_back({v, -(c / a)});
        }
        eliminate(std::move(rec));
    }

    // Unimodular rotation of the two smallest coefficients of the row.
    void rotate(SparseRow<Num>& row) {
        std::vector<std::pair<Num, int>> mags;
        for (const auto& [v, c] : row.terms) mags.push_back({abs_value(c), v});
        std::partial_sort(mags.begin(), mags.begin() + 2, mags.end());
        const int p = mags[0].second, q = mags[1].second;
        Num ap{}, aq{};
        for (const auto& [v, c] : row.terms) {
            if (v == p) ap = c;
            if (v == q) aq = c;
        }
        Num u{}, w{};
        Num g = ext_gcd(ap, aq, u, w);
        const int t1 = new_var(), t2 = new_var();
        Record<Num> rp{p, Num(0), {}};
        Record<Num> rq{q, Num(0), {}};
        rp.terms = {{t1, u}, {t2, -(aq / g)}};
        rq.terms = {{t1, w}, {t2, ap / g}};
        for (auto* rec : {&rp, &rq}) {
            std::erase_if(rec->terms, [](const auto& t) { return is_zero(t.second); });
        }
        eliminate(std::move(rp));
        eliminate(std::move(rq));
    }

    int new_var() {
        cols_.emplace_back();
        eliminated_.push_back(0);
        return total_vars_++;
    }

    void eliminate(Record<Num> rec) {
        const int var = rec.var;
        eliminated_[static_cast<std::size_t>(var)] = 1;
        ++stamp_;
        auto touched = std::move(cols_[static_cast<std::size_t>(var)]);
        cols_[static_cast<std::size_t>(var)].clear();
        for (int r : touched) {
            auto ur = static_cast<std::size_t>(r);
            if (!active_[ur]) continue;
            if (seen_.size() < rows_.size()) seen_.resize(rows_.size(), 0);
            if (seen_[ur] == stamp_) continue;
            seen_[ur] = stamp_;
            substitute(r, rec);
        }
        records_.push_back(std::move(rec));
    }

    void substitute(int r, const Record<Num>& rec) {
        auto& row = rows_[static_cast<std::size_t>(r)];
        auto it = std::lower_bound(row.terms.begin(), row.terms.end(), rec.var,
                                   [](const auto& t, int v) { return t.first < v; });
        if (it == row.terms.end() || it->first != rec.var) return;
        const Num c = it->second;
        const std::size_t old_len = row.terms.size();
        row.terms.erase(it);
        row.rhs = row.rhs - c * rec.constant;
        std::vector<std::pair<int, Num>> merged;
        merged.reserve(row.terms.size() + rec.terms.size());
        auto a = row.terms.begin();
        auto b = rec.terms.begin();
        while (a != row.terms.end() || b != rec.terms.end()) {
            if (b == rec.terms.end() || (a != row.terms.end() && a->first < b->first)) {
                merged.push_back(std::move(*a++));
            } else if (a == row.terms.end() || b->first < a->first) {
                Num val = c * b->second;
                if (!is_zero(val)) {
                    merged.push_back({b->first, val});
                    cols_[static_cast<std::size_t>(b->first)].push_back(r);
                }
                ++b;
            } else {
                Num val = a->second + c * b->second;
                if (!is_zero(val)) merged.push_back({a->first, val});
                ++a;
                ++b;
            }
        }
        row.terms = std::move(merged);
        queue_.erase({old_len, r});
        queue_.insert({row.terms.size(), r});
    }

    int total_vars_;
    std::vector<SparseRow<Num>> rows_;
    std::vector<std::vector<int>> cols_;
    std::vector<char> eliminated_;
    std::vector<char> active_;
    std::set<std::pair<std::size_t, int>> queue_;
    std::vector<Record<Num>> records_;
    std::vector<unsigned> seen_;
    unsigned stamp_ = 0;
};

}  // namespace acsp::detail
