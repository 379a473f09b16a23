// Equation systems relaxing B -> A: the width-k affine system, the Z-affine
// system over a family of partial homomorphisms, and IP^k with its BLP and
// AIP readings.
#pragma once

#include "acsp/linalg.hpp"
#include "acsp/structure.hpp"

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace acsp {

using ElementSet = std::vector<int>;  // sorted instance elements

// All subsets of {0..n-1} with at most k elements, by size then lexicographically.
std::vector<ElementSet> subsets_up_to(int n, int k);

struct VarKey {
    enum class Kind { LHom, Lam, Mu };
    Kind kind = Kind::LHom;
    int symbol = -1;  // Mu only
    Tuple domain;     // X (sorted) for LHom/Lam, the instance tuple for Mu
    Tuple values;     // image of domain, or the template tuple for Mu

    static VarKey lhom(ElementSet x, Tuple f) { return {Kind::LHom, -1, std::move(x), std::move(f)}; }
    static VarKey lam(ElementSet x, Tuple f) { return {Kind::Lam, -1, std::move(x), std::move(f)}; }
    static VarKey mu(int sym, Tuple b, Tuple a) { return {Kind::Mu, sym, std::move(b), std::move(a)}; }

    friend bool operator==(const VarKey&, const VarKey&) = default;
    friend auto operator<=>(const VarKey&, const VarKey&) = default;
};

struct VarKeyHash {
    std::size_t operator()(const VarKey& k) const noexcept {
        TupleHash h;
        return h(k.domain) * 31 + h(k.values) * 7 + static_cast<std::size_t>(k.kind) * 3 +
               static_cast<std::size_t>(k.symbol + 1);
    }
};

// A system whose variables carry structured names.
class LabeledSystem {
public:
    int add(VarKey key, bool nonneg = false);
    std::optional<int> find(const VarKey& key) const;
    const VarKey& key(int var) const { return keys_[static_cast<std::size_t>(var)]; }
    const std::vector<VarKey>& keys() const { return keys_; }
    int num_vars() const { return system.num_vars(); }

    std::string name(int var, const RelStructure& tmpl, const RelStructure& inst) const;
    std::string dump(const RelStructure& tmpl, const RelStructure& inst) const;

    LinSystem system;

private:
    std::vector<VarKey> keys_;
    std::unordered_map<VarKey, int, VarKeyHash> index_;
};

// For every X with |X| <= k a sorted set of maps X -> A (stored as value
// tuples parallel to X). Subset neighbourhoods are precomputed.
class KappaMap {
public:
    KappaMap() = default;
    KappaMap(int universe_size, int k);

    // Every homomorphism of inst[X] into tmpl.
    static KappaMap all_homs(const RelStructure& tmpl, const RelStructure& inst, int k);

    int k() const { return k_; }
    int universe_size() const { return n_; }
    std::size_t num_sets() const { return sets_.size(); }
    const ElementSet& set(std::size_t i) const { return sets_[i]; }
    std::optional<std::size_t> index_of(const ElementSet& x) const;

    const std::vector<Tuple>& maps(std::size_t i) const { return maps_[i]; }
    void set_maps(std::size_t i, std::vector<Tuple> maps);
    bool contains(std::size_t i, const Tuple& values) const;
    std::optional<std::size_t> position(std::size_t i, const Tuple& values) const;
    PartialHom hom(std::size_t i, std::size_t j) const { return {sets_[i], maps_[i][j]}; }
    std::size_t total_maps() const;

    // Index of X minus its p-th element.
    std::size_t down(std::size_t i, std::size_t p) const { return down_[i][p]; }
    // (element, index of X plus element) for every element outside X; empty when |X| = k.
    const std::vector<std::pair<int, std::size_t>>& up(std::size_t i) const { return up_[i]; }

    friend bool operator==(const KappaMap& a, const KappaMap& b) {
        return a.n_ == b.n_ && a.k_ == b.k_ && a.maps_ == b.maps_;
    }

private:
    int n_ = 0;
    int k_ = 0;
    std::vector<ElementSet> sets_;
    std::unordered_map<ElementSet, std::size_t, TupleHash> index_;
    std::vector<std::vector<Tuple>> maps_;
    std::vector<std::vector<std::size_t>> down_;
    std::vector<std::vector<std::pair<int, std::size_t>>> up_;
};

bool kappa_all_nonempty(const KappaMap& kappa);

LabeledSystem build_width_k(const RelStructure& tmpl, const RelStructure& inst, int k);

struct ZaffineOptions {
    // Marginals only for Y = X minus one element. Equivalent to the full set
    // whenever kappa is down-closed.
    bool one_point_marginals = false;
};
LabeledSystem build_zaffine(const RelStructure& tmpl, const RelStructure& inst, int k, const KappaMap& kappa,
                            ZaffineOptions opts = {});

LabeledSystem build_ipk(const RelStructure& tmpl, const RelStructure& inst, int k);

// Image of a width-k solution in IP^k. Requires k >= arity(tmpl).
Assignment translate_width_to_ipk(const RelStructure& tmpl, const RelStructure& inst, int k,
                                  const LabeledSystem& width, const Assignment& a, const LabeledSystem& ipk);

// Marginal identity over every nested pair Y subset X of domains carried by
// LHom or Lam variables; missing variables count as zero.
bool check_subset_marginals(const LabeledSystem& sys, const Assignment& a);
bool check_subset_marginals(const Assignment& a, const RelStructure& tmpl, const RelStructure& inst, int k);

}  // namespace acsp
