#include "acsp/consistency.hpp"

#include <algorithm>
#include <deque>
#include <random>

namespace acsp {

namespace {

Tuple without(const Tuple& t, std::size_t p) {
    Tuple out;
    out.reserve(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        if (i != p) out.push_back(t[i]);
    return out;
}

void require_homs(const RelStructure& tmpl, const RelStructure& inst, const KappaMap& seed) {
    for (std::size_t i = 0; i < seed.num_sets(); ++i)
        for (std::size_t j = 0; j < seed.maps(i).size(); ++j)
            if (!is_homomorphism(seed.hom(i, j), inst, tmpl)) throw ContractError("seed lists a non-homomorphism");
}

class Fixpoint {
public:
    Fixpoint(const KappaMap& seed, ConsistencyOptions opts) : kappa_(seed) {
        if (opts.shuffle_seed) rng_.emplace(*opts.shuffle_seed);
        const std::size_t sets = kappa_.num_sets();
        alive_.resize(sets);
        parent_.resize(sets);
        count_.resize(sets);
        children_.resize(sets);
        for (std::size_t i = 0; i < sets; ++i) {
            const std::size_t m = kappa_.maps(i).size();
            alive_[i].assign(m, 1);
            queued_.emplace_back(m, 0);
            parent_[i].assign(m, std::vector<int>(kappa_.set(i).size(), -1));
            children_[i].assign(m, std::vector<std::vector<int>>(kappa_.up(i).size()));
        }
        for (std::size_t i = 0; i < sets; ++i) {
            const ElementSet& x = kappa_.set(i);
            for (std::size_t j = 0; j < kappa_.maps(i).size(); ++j) {
                for (std::size_t p = 0; p < x.size(); ++p) {
                    const std::size_t y = kappa_.down(i, p);
                    auto f = kappa_.position(y, without(kappa_.maps(i)[j], p));
                    if (!f) continue;
                    parent_[i][j][p] = static_cast<int>(*f);
                    children_[y][*f][slot(y, x[p])].push_back(static_cast<int>(j));
                }
            }
        }
        for (std::size_t i = 0; i < sets; ++i) {
            count_[i].resize(kappa_.maps(i).size());
            for (std::size_t j = 0; j < kappa_.maps(i).size(); ++j) {
                bool doomed = std::find(parent_[i][j].begin(), parent_[i][j].end(), -1) != parent_[i][j].end();
                for (const auto& ch : children_[i][j]) {
                    count_[i][j].push_back(static_cast<int>(ch.size()));
                    if (ch.empty()) doomed = true;
                }
                if (doomed) push(i, static_cast<int>(j));
            }
        }
    }

    KappaMap run() {
        while (!pending_.empty()) {
            auto [i, j] = pop();
            remove(i, j);
        }
        KappaMap out = kappa_;
        for (std::size_t i = 0; i < kappa_.num_sets(); ++i) {
            std::vector<Tuple> keep;
            for (std::size_t j = 0; j < kappa_.maps(i).size(); ++j)
                if (alive_[i][j]) keep.push_back(kappa_.maps(i)[j]);
            out.set_maps(i, std::move(keep));
        }
        return out;
    }

private:
    std::size_t slot(std::size_t set, int element) const {
        const auto& up = kappa_.up(set);
        auto it = std::lower_bound(up.begin(), up.end(), element,
                                   [](const std::pair<int, std::size_t>& e, int b) { return e.first < b; });
        return static_cast<std::size_t>(it - up.begin());
    }

    void push(std::size_t i, int j) {
        if (!alive_[i][static_cast<std::size_t>(j)] || queued(i, j)) return;
        pending_.push_back({i, j});
    }

    bool queued(std::size_t i, int j) {
        char& f = queued_[i][static_cast<std::size_t>(j)];
        if (f) return true;
        f = 1;
        return false;
    }

    std::pair<std::size_t, int> pop() {
        std::pair<std::size_t, int> top;
        if (rng_) {
            std::size_t pick = std::uniform_int_distribution<std::size_t>(0, pending_.size() - 1)(*rng_);
            std::swap(pending_[pick], pending_.back());
            top = pending_.back();
            pending_.pop_back();
        } else {
            top = pending_.front();
            pending_.pop_front();
        }
        return top;
    }

    void remove(std::size_t i, int j) {
        const auto uj = static_cast<std::size_t>(j);
        if (!alive_[i][uj]) return;
        alive_[i][uj] = 0;
        const ElementSet& x = kappa_.set(i);
        for (std::size_t p = 0; p < x.size(); ++p) {
            int f = parent_[i][uj][p];
            if (f < 0) continue;
            const std::size_t y = kappa_.down(i, p);
            if (!alive_[y][static_cast<std::size_t>(f)]) continue;
            if (--count_[y][static_cast<std::size_t>(f)][slot(y, x[p])] == 0) push(y, f);
        }
        for (std::size_t u = 0; u < children_[i][uj].size(); ++u) {
            const std::size_t sup = kappa_.up(i)[u].second;
            for (int g : children_[i][uj][u]) push(sup, g);
        }
    }

    KappaMap kappa_;
    std::optional<std::mt19937_64> rng_;
    std::vector<std::vector<char>> alive_;
    std::vector<std::vector<char>> queued_;
    std::vector<std::vector<std::vector<int>>> parent_;                // set, map, position -> map in subset
    std::vector<std::vector<std::vector<int>>> count_;                 // set, map, up slot -> live extensions
    std::vector<std::vector<std::vector<std::vector<int>>>> children_;  // set, map, up slot -> extensions
    std::deque<std::pair<std::size_t, int>> pending_;
};

}  // namespace

KappaMap k_consistency(const RelStructure& tmpl, const RelStructure& inst, int k, ConsistencyOptions opts) {
    if (k < 1) throw ContractError("width must be positive");
    return Fixpoint(KappaMap::all_homs(tmpl, inst, k), opts).run();
}

KappaMap k_consistency(const RelStructure& tmpl, const RelStructure& inst, int k, const KappaMap& seed,
                       ConsistencyOptions opts) {
    if (k < 1) throw ContractError("width must be positive");
    if (seed.k() != k || seed.universe_size() != inst.size())
        throw ContractError("seed is not defined on the subsets of the instance up to k");
    require_homs(tmpl, inst, seed);
    return Fixpoint(seed, opts).run();
}

}  // namespace acsp
