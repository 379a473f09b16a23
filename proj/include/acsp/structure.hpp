// Finite relational structures, partial homomorphisms and polymorphisms.
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace acsp {

struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Tuple = std::vector<int>;

struct TupleHash {
    std::size_t operator()(const std::vector<int>& t) const noexcept {
        std::size_t h = 0x9e3779b97f4a7c15ull ^ t.size();
        for (int v : t) h = (h ^ static_cast<std::size_t>(v + 0x51ed27)) * 0x100000001b3ull;
        return h;
    }
};

struct Symbol {
    std::string name;
    int arity = 1;
    friend bool operator==(const Symbol&, const Symbol&) = default;
};

class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<Symbol> symbols);

    const std::vector<Symbol>& symbols() const { return symbols_; }
    std::size_t size() const { return symbols_.size(); }
    const Symbol& operator[](std::size_t i) const { return symbols_[i]; }
    std::optional<std::size_t> find(const std::string& name) const;
    int max_arity() const;

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.symbols_ == b.symbols_; }

private:
    std::vector<Symbol> symbols_;
};

// Immutable after construction. Relations are stored sorted and deduplicated.
class RelStructure {
public:
    RelStructure() = default;
    RelStructure(Vocabulary vocab, std::vector<std::string> universe, std::vector<std::vector<Tuple>> relations);

    const Vocabulary& vocabulary() const { return vocab_; }
    const std::vector<std::string>& universe() const { return universe_; }
    int size() const { return static_cast<int>(universe_.size()); }
    const std::vector<Tuple>& relation(std::size_t sym) const { return relations_[sym]; }
    const std::vector<std::vector<Tuple>>& relations() const { return relations_; }
    bool contains(std::size_t sym, const Tuple& t) const { return lookup_[sym].count(t) != 0; }
    std::optional<int> element(const std::string& name) const;
    int element_or_throw(const std::string& name) const;

    // (symbol, tuple index) pairs whose tuple mentions the element.
    struct Incidence {
        std::size_t symbol;
        std::size_t tuple;
    };
    const std::vector<Incidence>& incidences(int element) const { return incidence_[element]; }

    friend bool operator==(const RelStructure& a, const RelStructure& b) {
        return a.vocab_ == b.vocab_ && a.universe_ == b.universe_ && a.relations_ == b.relations_;
    }

private:
    Vocabulary vocab_;
    std::vector<std::string> universe_;
    std::vector<std::vector<Tuple>> relations_;
    std::vector<std::unordered_set<Tuple, TupleHash>> lookup_;
    std::unordered_map<std::string, int> names_;
    std::vector<std::vector<Incidence>> incidence_;
};

// Partial map from instance elements (sorted domain) to template elements.
struct PartialHom {
    std::vector<int> domain;
    std::vector<int> values;

    std::optional<int> at(int element) const;
    friend bool operator==(const PartialHom&, const PartialHom&) = default;
    friend auto operator<=>(const PartialHom&, const PartialHom&) = default;
};

// Restriction of f to a subset of its domain.
PartialHom restrict_to(const PartialHom& f, std::span<const int> subset);

// Table of an m-ary operation on {0..n-1}; first argument most significant.
class OpTable {
public:
    OpTable(int universe_size, int arity, std::vector<int> table);
    static OpTable from_function(int universe_size, int arity, const std::function<int(std::span<const int>)>& fn);

    int arity() const { return arity_; }
    int universe_size() const { return n_; }
    int operator()(std::span<const int> args) const;
    int operator()(int x, int y, int z) const;
    const std::vector<int>& table() const { return table_; }

private:
    int n_;
    int arity_;
    std::vector<int> table_;
};

RelStructure induced_substructure(const RelStructure& s, std::span<const int> elements);
RelStructure induced_substructure(const RelStructure& s, const std::vector<std::string>& names);

bool is_homomorphism(const PartialHom& f, const RelStructure& instance, const RelStructure& tmpl);

struct OracleResult {
    bool satisfiable = false;
    std::vector<int> witness;  // template element per instance element
};
OracleResult oracle_decide(const RelStructure& tmpl, const RelStructure& instance);

// Homomorphisms of instance[domain] into tmpl, lexicographic by values.
std::vector<PartialHom> enumerate_partial_homs(const RelStructure& tmpl, const RelStructure& instance,
                                               std::span<const int> domain);

bool is_polymorphism(const OpTable& p, const RelStructure& tmpl);
bool check_maltsev(const OpTable& p);
OpTable alternating_from_maltsev(const OpTable& p, int arity);

}  // namespace acsp
