#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cpnv/linalg.hpp"
#include "cpnv/rational.hpp"

using namespace cpnv;

namespace {
RatFn m() { return RatFn::var(); }
}  // namespace

TEST_CASE("rationals are canonical") {
    Rat a = rat(2, 4);
    CHECK(a.get_num() == 1);
    CHECK(a.get_den() == 2);
    CHECK(rat(-3, -6) == rat(1, 2));
    CHECK(rat(3, -6) == rat(-1, 2));
    CHECK(rat(3, -6).get_den() == 2);
    CHECK(rat(1, 3) + rat(1, 6) == rat(1, 2));
    CHECK_THROWS_AS(rat(1, 0), std::domain_error);
}

TEST_CASE("rational function arithmetic is exact and canonical") {
    RatFn inv_m = rfn(1) / m();
    CHECK((inv_m + (-inv_m)).is_zero());

    RatFn f = (m() - rfn(2)) / (rfn(3) * m() + rfn(2));
    CHECK(f.eval(2) == rat(0));

    // Quadratic-over-linear coefficient evaluated at m = 2: -(16+2-2)/8 = -2.
    RatFn g = -(rfn(4) * m() * m() + m() - rfn(2)) / (rfn(3) * m() + rfn(2));
    CHECK(g.eval(2) == rat(-2));

    // Common factors cancel.
    RatFn h = (m() * m() - rfn(1)) / (m() - rfn(1));
    CHECK(h == m() + rfn(1));
    CHECK(h.den().degree() == 0);

    // Canonical integer coefficients, positive leading denominator.
    RatFn q = (rfn(1, 2) * m()) / (rfn(1, 3) - m());
    CHECK(q.den().leading() > 0);
    for (const Rat& c : q.num().coeffs()) CHECK(c.get_den() == 1);
    for (const Rat& c : q.den().coeffs()) CHECK(c.get_den() == 1);

    CHECK_THROWS_AS(rfn(1) / RatFn(), std::domain_error);
}

TEST_CASE("eval commutes with arithmetic at random points") {
    std::vector<RatFn> pool = {
        m(), rfn(1) / (m() + rfn(1)), (m() * m() - rfn(3)) / (rfn(2) * m() + rfn(5)),
        -(m() + rfn(7)) / (m() * m() + rfn(1)), rfn(3, 4) * m() * m() * m() - rfn(1, 2)};
    for (long m0 = 2; m0 <= 21; ++m0) {
        Rat x = rat(m0);
        for (size_t i = 0; i < pool.size(); ++i)
            for (size_t j = 0; j < pool.size(); ++j) {
                const RatFn &a = pool[i], &b = pool[j];
                CHECK((a + b).eval(x) == a.eval(x) + b.eval(x));
                CHECK((a - b).eval(x) == a.eval(x) - b.eval(x));
                CHECK((a * b).eval(x) == a.eval(x) * b.eval(x));
                if (!b.eval(x) == 0 && !b.is_zero()) CHECK((a / b).eval(x) == a.eval(x) / b.eval(x));
            }
    }
}

TEST_CASE("polynomial printing") {
    Poly p = Poly::from_coeffs({rat(-2), rat(1), rat(4)});
    CHECK(p.str() == "4*m^2 + m - 2");
    CHECK(RatFn(p, Poly::var().shift_var(rat(0)) * rat(3) + Poly(rat(2))).str() ==
          "(4*m^2 + m - 2)/(3*m + 2)");
}

TEST_CASE("positivity certificate by shifting") {
    // 4m^3 - m^2 + m + 2 > 0 for all m >= 2 (and in fact m >= 1).
    Poly p = Poly::from_coeffs({rat(2), rat(1), rat(-1), rat(4)});
    CHECK(poly_positive_from(p, rat(2)));
    CHECK(poly_positive_from(p, rat(1)));
    // m - 3 is not positive from 2.
    CHECK_FALSE(poly_positive_from(Poly::from_coeffs({rat(-3), rat(1)}), rat(2)));
}

TEST_CASE("solve_linear on the identity returns the rhs") {
    RatMatrix id = RatMatrix::identity(3);
    std::vector<RatFn> b = {m(), rfn(1) / m(), m() * m() - rfn(4)};
    CHECK(solve_linear(id, b) == b);
}

TEST_CASE("solve_linear reproduces the conformal second-order scalar system") {
    // Lower-triangular action of (Delta + 1/2) on span{u^2, lam^2}:
    //   [ -(3/2 + 1/m)   0  ]
    //   [  1/m          1/2 ]
    RatMatrix a(2, 2);
    a.at(0, 0) = -(rfn(3, 2) + rfn(1) / m());
    a.at(0, 1) = RatFn();
    a.at(1, 0) = rfn(1) / m();
    a.at(1, 1) = rfn(1, 2);
    std::vector<RatFn> rhs = {rfn(2) * m() - rfn(1) / m() + rfn(1, 2), rfn(1) / m() - rfn(3, 2)};
    std::vector<RatFn> x = solve_linear(a, rhs);

    RatFn den = rfn(3) * m() + rfn(2);
    CHECK(x[0] == -(rfn(4) * m() * m() + m() - rfn(2)) / den);
    CHECK(x[1] == -(m() - rfn(2)) / den);
}

TEST_CASE("inverse is exact and validated by multiplication") {
    RatMatrix a(3, 3);
    a.at(0, 0) = m();
    a.at(0, 1) = rfn(1);
    a.at(0, 2) = rfn(2);
    a.at(1, 0) = RatFn();
    a.at(1, 1) = m() + rfn(1);
    a.at(1, 2) = rfn(1) / m();
    a.at(2, 0) = rfn(3);
    a.at(2, 1) = RatFn();
    a.at(2, 2) = m() * m();
    RatMatrix inv = invert(a);
    CHECK(a * inv == RatMatrix::identity(3));
    CHECK(inv * a == RatMatrix::identity(3));
}

TEST_CASE("singular solves report the vanishing pivot") {
    RatMatrix a(2, 2);
    a.at(0, 0) = m() - m();  // identically zero column
    a.at(1, 0) = RatFn();
    a.at(0, 1) = rfn(1);
    a.at(1, 1) = rfn(1);
    std::vector<RatFn> b = {rfn(1), rfn(1)};
    CHECK_THROWS_AS(solve_linear(a, b), SingularMatrixError);
    try {
        solve_linear(a, b);
    } catch (const SingularMatrixError& e) {
        CHECK(e.column() == 0);
    }
}
