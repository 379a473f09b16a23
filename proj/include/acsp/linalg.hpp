// Exact linear systems: rational and integral solving, Hermite normal form,
// LP feasibility, relative interior points, p-solutions.
#pragma once

#include "acsp/numeric.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace acsp {

struct LinTerm {
    int var;
    Rational coef;
};

struct Equation {
    std::vector<LinTerm> terms;  // sorted by var, no zero coefficients
    Rational rhs;
};

class LinSystem {
public:
    LinSystem() = default;
    explicit LinSystem(int num_vars) : nonneg_(static_cast<std::size_t>(num_vars), false) {}

    int add_variable(bool nonneg = false);
    int num_vars() const { return static_cast<int>(nonneg_.size()); }

    // Duplicate variables are merged and zero coefficients dropped.
    void add_equation(std::vector<LinTerm> terms, Rational rhs);
    void add_equation(const std::vector<std::pair<int, int>>& terms, int rhs);
    const std::vector<Equation>& equations() const { return equations_; }

    void set_nonneg(int var, bool on = true);
    void set_all_nonneg(bool on = true);
    bool nonneg(int var) const { return nonneg_[static_cast<std::size_t>(var)]; }
    void clear_nonneg() { set_all_nonneg(false); }

    void pin(int var, Rational value);
    const std::map<int, Rational>& pins() const { return pins_; }

    // One equation per line: "coef*name ... = rhs".
    std::string dump(const std::function<std::string(int)>& name) const;

private:
    std::vector<Equation> equations_;
    std::vector<bool> nonneg_;
    std::map<int, Rational> pins_;
};

using Assignment = std::vector<Rational>;

bool check_solution(const LinSystem& sys, const Assignment& a, bool respect_nonneg = true);

// Some exact solution of equations and pins, ignoring nonneg flags.
std::optional<Assignment> solve_rational(const LinSystem& sys);

using IntMatrix = std::vector<std::vector<BigInt>>;

// Row-style Hermite normal form: U*M = H, U unimodular. H is in row echelon
// form; each pivot is positive and the entries above it lie in [0, pivot).
struct HermiteResult {
    IntMatrix h;
    IntMatrix u;
};
HermiteResult hermite_normal_form(const IntMatrix& m);
BigInt determinant(const IntMatrix& m);

// All integer solutions of a system as x = x0 + N t. Variables that the
// elimination left untouched are parameters; the rest are affine in them.
class IntegerLattice {
public:
    struct Expr {
        BigInt constant;
        std::vector<std::pair<int, BigInt>> terms;  // parameter id, coefficient
    };

    // nullopt when the system has no integer solution.
    static std::optional<IntegerLattice> solve(const LinSystem& sys);

    IntegerLattice(IntegerLattice&&) noexcept;
    IntegerLattice& operator=(IntegerLattice&&) noexcept;
    ~IntegerLattice();

    int num_vars() const;
    Assignment particular() const;
    // Affine expression of an original variable in the lattice parameters.
    const Expr& expression(int var) const;
    // Integer solvability with the given original variables fixed.
    bool feasible_with(std::span<const std::pair<int, BigInt>> fixes) const;

    struct Impl;

private:
    explicit IntegerLattice(std::unique_ptr<Impl> impl);
    std::unique_ptr<Impl> impl_;
};

// Integer-valued solution of equations and pins (nonneg ignored).
std::optional<Assignment> solve_integral(const LinSystem& sys);

// Exact feasible point honouring nonneg flags and pins.
std::optional<Assignment> lp_feasible(const LinSystem& sys);

// Feasible point with maximal support: a variable is nonzero iff some
// feasible point makes it nonzero.
std::optional<Assignment> relative_interior_point(const LinSystem& sys);

// Maximum of a linear objective, nullopt when infeasible; unbounded gives
// an engaged optional with no value.
struct LpOptimum {
    bool unbounded = false;
    Rational value;
    Assignment point;
};
std::optional<LpOptimum> lp_maximize(const LinSystem& sys, const std::vector<LinTerm>& objective);

bool is_p_solution(const Assignment& a, const BigInt& p);
// Every denominator is a power of p (the part of a p-solution the combiner needs).
bool has_power_denominators(const Assignment& a, const BigInt& p);

// lambda*phi_p + (1-lambda)*phi_q with lambda = 0 mod p^M and 1 mod q^M.
Assignment crt_combine(const LinSystem& sys, const Assignment& phi_p, const Assignment& phi_q, const BigInt& p,
                       const BigInt& q);
// The multiplier lambda used by crt_combine.
BigInt crt_multiplier(const Assignment& phi_p, const Assignment& phi_q, const BigInt& p, const BigInt& q);

}  // namespace acsp
