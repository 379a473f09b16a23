#include "acsp/linalg.hpp"
#include "acsp/structure.hpp"

#include "doctest.h"

#include <random>

using namespace acsp;

namespace {

LinSystem system_of(int vars, const std::vector<std::pair<std::vector<int>, int>>& rows) {
    LinSystem s(vars);
    for (const auto& [coefs, rhs] : rows) {
        std::vector<std::pair<int, int>> t;
        for (int v = 0; v < vars; ++v)
            if (coefs[static_cast<std::size_t>(v)] != 0) t.push_back({v, coefs[static_cast<std::size_t>(v)]});
        s.add_equation(t, rhs);
    }
    return s;
}

IntMatrix mul(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix c(a.size(), std::vector<BigInt>(b.empty() ? 0 : b[0].size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k)
            for (std::size_t j = 0; j < c[i].size(); ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

bool is_row_hermite(const IntMatrix& h) {
    int last = -1;
    bool zero_seen = false;
    for (std::size_t r = 0; r < h.size(); ++r) {
        int lead = -1;
        for (std::size_t c = 0; c < h[r].size(); ++c)
            if (h[r][c] != 0) {
                lead = static_cast<int>(c);
                break;
            }
        if (lead < 0) {
            zero_seen = true;
            continue;
        }
        if (zero_seen || lead <= last) return false;
        if (h[r][static_cast<std::size_t>(lead)] <= 0) return false;
        for (std::size_t above = 0; above < r; ++above) {
            const BigInt& x = h[above][static_cast<std::size_t>(lead)];
            if (x < 0 || x >= h[r][static_cast<std::size_t>(lead)]) return false;
        }
        last = lead;
    }
    return true;
}

// Integer box search for the completeness property.
bool box_has_solution(const std::vector<std::vector<int>>& a, const std::vector<int>& b, int n, int bound) {
    std::vector<int> x(static_cast<std::size_t>(n), -bound);
    while (true) {
        bool ok = true;
        for (std::size_t r = 0; r < a.size() && ok; ++r) {
            long s = 0;
            for (int j = 0; j < n; ++j) s += static_cast<long>(a[r][static_cast<std::size_t>(j)]) * x[static_cast<std::size_t>(j)];
            if (s != b[r]) ok = false;
        }
        if (ok) return true;
        int i = n - 1;
        while (i >= 0 && ++x[static_cast<std::size_t>(i)] > bound) x[static_cast<std::size_t>(i--)] = -bound;
        if (i < 0) return false;
    }
}

}  // namespace

TEST_CASE("check_solution") {
    CHECK(check_solution(LinSystem(), {}));
    LinSystem s = system_of(2, {{{1, 1}, 1}});
    CHECK(check_solution(s, {Rational(1, 2), Rational(1, 2)}));
    s.set_nonneg(0);
    CHECK_FALSE(check_solution(s, {Rational(-1), Rational(2)}));
    CHECK(check_solution(s, {Rational(-1), Rational(2)}, false));
    s.pin(1, 1);
    CHECK_FALSE(check_solution(s, {Rational(1, 2), Rational(1, 2)}));
}

TEST_CASE("solve_rational") {
    auto one = solve_rational(system_of(1, {{{2}, 1}}));
    REQUIRE(one);
    CHECK((*one)[0] == Rational(1, 2));
    CHECK_FALSE(solve_rational(system_of(1, {{{1}, 1}, {{1}, 2}})));
    LinSystem s = system_of(2, {{{1, 1}, 1}});
    auto sol = solve_rational(s);
    REQUIRE(sol);
    CHECK(check_solution(s, *sol));
}

TEST_CASE("solve_rational on random consistent systems") {
    std::mt19937 rng(7);
    for (int round = 0; round < 100; ++round) {
        const int n = 1 + static_cast<int>(rng() % 6), m = 1 + static_cast<int>(rng() % 6);
        std::vector<int> x(static_cast<std::size_t>(n));
        for (auto& v : x) v = static_cast<int>(rng() % 11) - 5;
        LinSystem s(n);
        for (int r = 0; r < m; ++r) {
            std::vector<std::pair<int, int>> t;
            int rhs = 0;
            for (int j = 0; j < n; ++j) {
                int c = static_cast<int>(rng() % 7) - 3;
                if (c) t.push_back({j, c});
                rhs += c * x[static_cast<std::size_t>(j)];
            }
            s.add_equation(t, rhs);
        }
        auto sol = solve_rational(s);
        REQUIRE(sol);
        CHECK(check_solution(s, *sol, false));
    }
}

TEST_CASE("hermite_normal_form") {
    IntMatrix id{{1, 0}, {0, 1}};
    auto r = hermite_normal_form(id);
    CHECK(r.h == id);
    CHECK(r.u == id);
    IntMatrix m{{2, 4}, {1, 3}};
    auto r2 = hermite_normal_form(m);
    CHECK(r2.h[0][0] == 1);
    CHECK(mul(r2.u, m) == r2.h);
    IntMatrix z{{0, 0, 0}, {0, 0, 0}};
    auto r3 = hermite_normal_form(z);
    CHECK(r3.h == z);
    CHECK(r3.u == id);
}

TEST_CASE("hermite round trip on random matrices") {
    std::mt19937 rng(13);
    for (int round = 0; round < 200; ++round) {
        const std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 8;
        IntMatrix m(rows, std::vector<BigInt>(cols));
        for (auto& row : m)
            for (auto& x : row) x = static_cast<int>(rng() % 11) - 5;
        auto r = hermite_normal_form(m);
        CHECK(mul(r.u, m) == r.h);
        CHECK(abs(determinant(r.u)) == 1);
        CHECK(is_row_hermite(r.h));
    }
}

TEST_CASE("solve_integral") {
    auto a = solve_integral(system_of(1, {{{1}, 2}}));
    REQUIRE(a);
    CHECK((*a)[0] == 2);
    CHECK_FALSE(solve_integral(system_of(1, {{{2}, 1}})));
    auto b = solve_integral(system_of(2, {{{1, 1}, 1}, {{1, -1}, 1}}));
    REQUIRE(b);
    CHECK((*b)[0] == 1);
    CHECK((*b)[1] == 0);
    // gcd rotation path: 6x + 10y + 15z = 1
    LinSystem g = system_of(3, {{{6, 10, 15}, 1}});
    auto c = solve_integral(g);
    REQUIRE(c);
    CHECK(check_solution(g, *c));
    LinSystem pinned = system_of(2, {{{1, 1}, 1}});
    pinned.pin(0, Rational(1, 2));
    CHECK_FALSE(solve_integral(pinned));
}

TEST_CASE("solve_integral completeness against box search") {
    std::mt19937 rng(17);
    int solvable = 0;
    for (int round = 0; round < 300; ++round) {
        const int n = 1 + static_cast<int>(rng() % 4), m = 1 + static_cast<int>(rng() % 3);
        std::vector<std::vector<int>> a(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(n)));
        std::vector<int> b(static_cast<std::size_t>(m));
        for (auto& row : a)
            for (auto& x : row) x = static_cast<int>(rng() % 7) - 3;
        for (auto& x : b) x = static_cast<int>(rng() % 9) - 4;
        std::vector<std::pair<std::vector<int>, int>> rows;
        for (int r = 0; r < m; ++r) rows.push_back({a[static_cast<std::size_t>(r)], b[static_cast<std::size_t>(r)]});
        LinSystem s = system_of(n, rows);
        auto sol = solve_integral(s);
        const int bound = n <= 3 ? 20 : 8;
        if (box_has_solution(a, b, n, bound)) {
            ++solvable;
            CHECK(sol.has_value());
        }
        if (sol) {
            CHECK(check_solution(s, *sol));
            for (const auto& v : *sol) CHECK(is_integer(v));
        }
    }
    CHECK(solvable > 20);
}

TEST_CASE("integer lattice fixes") {
    // x + y + z = 1 over the integers; x = 1 forces y + z = 0.
    LinSystem s = system_of(3, {{{1, 1, 1}, 1}});
    auto lat = IntegerLattice::solve(s);
    REQUIRE(lat);
    std::vector<std::pair<int, BigInt>> fix1{{0, 1}, {1, 5}};
    CHECK(lat->feasible_with(fix1));
    std::vector<std::pair<int, BigInt>> fix2{{0, 1}, {1, 5}, {2, 5}};
    CHECK_FALSE(lat->feasible_with(fix2));
    // 2x + 2y = 2z: z - x - y = 0 and parity of fixes.
    LinSystem t = system_of(3, {{{2, 2, -2}, 0}, {{1, 0, 0}, 0}});
    auto lat2 = IntegerLattice::solve(t);
    REQUIRE(lat2);
    std::vector<std::pair<int, BigInt>> fix3{{1, 3}, {2, 3}};
    CHECK(lat2->feasible_with(fix3));
    std::vector<std::pair<int, BigInt>> fix4{{1, 3}, {2, 4}};
    CHECK_FALSE(lat2->feasible_with(fix4));
}

TEST_CASE("lp_feasible") {
    LinSystem s = system_of(2, {{{1, 1}, 1}});
    s.set_all_nonneg();
    auto p = lp_feasible(s);
    REQUIRE(p);
    CHECK(check_solution(s, *p));
    LinSystem neg = system_of(1, {{{1}, -1}});
    neg.set_all_nonneg();
    CHECK_FALSE(lp_feasible(neg));
    auto empty = lp_feasible(LinSystem(3));
    REQUIRE(empty);
    for (const auto& v : *empty) CHECK(v == 0);
    // x - y = 1, x + y = 0 needs negative y.
    LinSystem t = system_of(2, {{{1, -1}, 1}, {{1, 1}, 0}});
    t.set_all_nonneg();
    CHECK_FALSE(lp_feasible(t));
    t.set_nonneg(1, false);
    auto q = lp_feasible(t);
    REQUIRE(q);
    CHECK((*q)[1] == Rational(-1, 2));
}

TEST_CASE("relative_interior_point examples") {
    LinSystem s = system_of(2, {{{1, 1}, 1}});
    s.set_all_nonneg();
    auto p = relative_interior_point(s);
    REQUIRE(p);
    CHECK((*p)[0] > 0);
    CHECK((*p)[1] > 0);
    LinSystem t = system_of(2, {{{1, 1}, 1}, {{0, 1}, 0}});
    t.set_all_nonneg();
    auto q = relative_interior_point(t);
    REQUIRE(q);
    CHECK((*q)[0] == 1);
    CHECK((*q)[1] == 0);
    LinSystem u = system_of(1, {{{1}, -1}});
    u.set_all_nonneg();
    CHECK_FALSE(relative_interior_point(u));
}

TEST_CASE("relative interior support contract on random systems") {
    std::mt19937 rng(23);
    for (int round = 0; round < 40; ++round) {
        const int n = 2 + static_cast<int>(rng() % 6), m = 1 + static_cast<int>(rng() % 4);
        LinSystem s(n);
        s.set_all_nonneg();
        // Feasible by construction from a sparse nonnegative point.
        std::vector<int> x(static_cast<std::size_t>(n));
        for (auto& v : x) v = rng() % 3 == 0 ? static_cast<int>(rng() % 3) : 0;
        for (int r = 0; r < m; ++r) {
            std::vector<std::pair<int, int>> t;
            int rhs = 0;
            for (int j = 0; j < n; ++j) {
                int c = static_cast<int>(rng() % 5) - 1;
                if (c) t.push_back({j, c});
                rhs += c * x[static_cast<std::size_t>(j)];
            }
            s.add_equation(t, rhs);
        }
        if (rng() % 2) s.set_nonneg(static_cast<int>(rng() % static_cast<unsigned>(n)), false);
        auto p = relative_interior_point(s);
        REQUIRE(p);
        CHECK(check_solution(s, *p));
        for (int v = 0; v < n; ++v) {
            if ((*p)[static_cast<std::size_t>(v)] != 0) continue;
            for (int dir : {1, -1}) {
                auto opt = lp_maximize(s, {LinTerm{v, Rational(dir)}});
                REQUIRE(opt);
                CHECK_FALSE(opt->unbounded);
                CHECK(opt->value == 0);
            }
        }
    }
}

TEST_CASE("p-solutions") {
    CHECK(is_p_solution({0, 0}, 2));
    CHECK(is_p_solution({Rational(1, 2), Rational(1, 2)}, 2));
    CHECK_FALSE(is_p_solution({Rational(1, 3), Rational(2, 3)}, 2));
    CHECK(is_p_solution({Rational(4), Rational(1, 8), Rational(0)}, 2));
    CHECK_FALSE(is_p_solution({Rational(3)}, 2));
    CHECK_THROWS_AS(is_p_solution({}, 1), ContractError);
}

TEST_CASE("crt_combine") {
    LinSystem s = system_of(2, {{{1, 1}, 1}});
    Assignment phi2{Rational(1, 2), Rational(1, 2)}, phi3{Rational(1, 3), Rational(2, 3)};
    CHECK(crt_multiplier(phi2, phi3, 2, 3) == 4);
    auto c = crt_combine(s, phi2, phi3, 2, 3);
    CHECK(c == Assignment{Rational(1), Rational(0)});
    Assignment integral{Rational(3), Rational(-2)};
    CHECK(crt_combine(s, integral, integral, 2, 3) == integral);
    CHECK_THROWS_AS(crt_combine(s, phi2, phi3, 2, 4), ContractError);
    CHECK_THROWS_AS(crt_combine(s, phi3, phi2, 2, 3), ContractError);
}
