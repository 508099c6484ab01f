#include <doctest.h>

#include "test_util.hpp"

using namespace ncpn;
using testutil::Gen;

namespace {

PolyVector bracket_word(const Quiver& q, const std::vector<Sym>& l, const std::vector<Sym>& r) {
    // ordinary commutator of two raw words, normalized
    PathPoly raw(q);
    std::vector<Sym> lr = l, rl = r;
    lr.insert(lr.end(), r.begin(), r.end());
    rl.insert(rl.end(), l.begin(), l.end());
    if (auto w = make_word(q, lr)) raw.add(*w, 1);
    if (auto w = make_word(q, rl)) raw.add(*w, -1);
    return necklace_normalize(q, raw);
}

} // namespace

TEST_CASE("open paths vanish, closed ones survive") {
    Quiver d = double_quiver(testutil::gh_base());
    int x = d.arrow_index("x");
    Word wx = arrow_word(d, x);
    CHECK(necklace_of(d, wx).zero()); // open path x dies in VQ

    int a = d.arrow_index("a");
    CHECK(!necklace_of(d, arrow_word(d, a)).zero());
}

TEST_CASE("graded cyclic relation") {
    Quiver d = double_quiver(testutil::one_loop());
    int a = d.arrow_index("a"), as = d.arrow_index("a^");

    // ∂_{a*} ∂_a = -∂_a ∂_{a*}
    auto left = make_word(d, {d.partial_sym(as), d.partial_sym(a)});
    auto right = make_word(d, {d.partial_sym(a), d.partial_sym(as)});
    REQUIRE(left);
    REQUIRE(right);
    CHECK(necklace_of(d, *left) == necklace_of(d, *right).scaled(-1));

    // odd-odd anticommutation: P∂_a R∂_b + R∂_b P∂_a normalizes to zero
    Gen g(3);
    Quiver dg = double_quiver(testutil::gh_base());
    for (int rep = 0; rep < 30; ++rep) {
        auto p = g.word(dg, 1 + g.pick(3), false);
        auto r = g.word(dg, 1 + g.pick(3), false);
        if (!p || !r) continue;
        for (int b1 = 0; b1 < dg.arrow_count(); ++b1)
            for (int b2 = 0; b2 < dg.arrow_count(); ++b2) {
                std::vector<Sym> l = p->syms;
                l.push_back(dg.partial_sym(b1));
                std::vector<Sym> rr = r->syms;
                rr.push_back(dg.partial_sym(b2));
                std::vector<Sym> lr = l, rl = rr;
                lr.insert(lr.end(), rr.begin(), rr.end());
                rl.insert(rl.end(), l.begin(), l.end());
                PathPoly raw(dg);
                if (auto w = make_word(dg, lr)) raw.add(*w, 1);
                if (auto w = make_word(dg, rl)) raw.add(*w, 1); // plus: anticommutator
                CHECK(necklace_normalize(dg, raw).zero());
            }
    }
}

TEST_CASE("necklace normalization is idempotent") {
    Quiver d = double_quiver(testutil::gh_base());
    Gen g(17);
    for (int rep = 0; rep < 50; ++rep) {
        PolyVector v = g.polyvector(d, g.pick(3), 4, 6);
        PathPoly raw(d);
        for (auto& [w, c] : v.terms()) raw.add(w, c);
        CHECK(necklace_normalize(d, raw) == v);
    }
}

TEST_CASE("directional superderivative oracles") {
    Quiver d = double_quiver(testutil::one_loop());
    int a = d.arrow_index("a"), as = d.arrow_index("a^");

    // D_{∂_a}(∂_{a*}∂_a) = ∂_{a*}
    auto w = make_word(d, {d.partial_sym(as), d.partial_sym(a)});
    REQUIRE(w);
    PathPoly res = directional_derivative_word(d, d.partial_sym(a), *w);
    PathPoly expect(d);
    expect.add(*make_word(d, {d.partial_sym(as)}), 1);
    CHECK(res == expect);

    // y absent -> 0
    CHECK(directional_derivative_word(d, d.partial_sym(as), power_word(d, a, 3)).zero());

    // D_a(a^k) = k a^{k-1}
    for (int k = 1; k <= 5; ++k) {
        PathPoly dk = directional_derivative_word(d, d.arrow_sym(a), power_word(d, a, k));
        PathPoly want = path_of(d, power_word(d, a, k - 1)).scaled(k);
        CHECK(dk == want);
    }
}

TEST_CASE("necklace derivative") {
    Quiver d = double_quiver(testutil::one_loop());
    int a = d.arrow_index("a"), as = d.arrow_index("a^");
    for (int k = 1; k <= 5; ++k) {
        PolyVector f = necklace_of(d, power_word(d, a, k));
        CHECK(necklace_derivative(f, a) == path_of(d, power_word(d, a, k - 1)).scaled(k));
        CHECK(necklace_derivative(f, as).zero());
    }
    // ∂(a^{l-1} a*)/∂a* = a^{l-1}
    for (int l = 1; l <= 4; ++l) {
        Word w = power_word(d, a, l - 1);
        w.syms.push_back(d.arrow_sym(as));
        w.vertex = -1;
        PolyVector f = necklace_of(d, w);
        CHECK(necklace_derivative(f, as) == path_of(d, power_word(d, a, l - 1)));
    }
}

TEST_CASE("schouten: grade arithmetic and pi0 self-bracket") {
    Quiver d = double_quiver(testutil::one_loop());
    int a = d.arrow_index("a"), as = d.arrow_index("a^");
    PolyVector pi0 = bracket_word(d, {d.partial_sym(as)}, {d.partial_sym(a)});
    CHECK(pi0.grade() == 2);
    CHECK(!pi0.zero());
    CHECK(schouten(pi0, pi0).zero());

    // grade-0 functions commute
    Gen g(5);
    PolyVector f = g.polyvector(d, 0, 3, 4);
    PolyVector h = g.polyvector(d, 0, 3, 4);
    CHECK(schouten(f, h).zero());
}

TEST_CASE("schouten: graded antisymmetry") {
    Quiver d = double_quiver(testutil::gh_base());
    Gen g(23);
    int checked = 0;
    for (int rep = 0; rep < 120 && checked < 60; ++rep) {
        int p = g.pick(3), q = g.pick(3);
        PolyVector l = g.polyvector(d, p, 3, 6);
        PolyVector r = g.polyvector(d, q, 3, 6);
        if (l.zero() || r.zero()) continue;
        PolyVector lhs = schouten(l, r);
        PolyVector rhs = schouten(r, l);
        int sign = (((p + 1) * (q + 1)) % 2 != 0) ? -1 : 1;
        CHECK(lhs == rhs.scaled(-sign));
        ++checked;
    }
    CHECK(checked >= 40);
}

TEST_CASE("schouten: graded Jacobi identity") {
    Quiver d = double_quiver(testutil::gh_base());
    Gen g(29);
    int checked = 0;
    for (int rep = 0; rep < 200 && checked < 40; ++rep) {
        int p = g.pick(3), q = g.pick(3), r = g.pick(3);
        PolyVector A = g.polyvector(d, p, 2, 4);
        PolyVector B = g.polyvector(d, q, 2, 4);
        PolyVector C = g.polyvector(d, r, 2, 4);
        if (A.zero() || B.zero() || C.zero()) continue;
        int d1 = p + 1, d2 = q + 1, d3 = r + 1;
        PolyVector t1 = schouten(A, schouten(B, C)).scaled((d1 * d3) % 2 ? -1 : 1);
        PolyVector t2 = schouten(B, schouten(C, A)).scaled((d2 * d1) % 2 ? -1 : 1);
        PolyVector t3 = schouten(C, schouten(A, B)).scaled((d3 * d2) % 2 ? -1 : 1);
        CHECK((t1 + t2 + t3).zero());
        ++checked;
    }
    CHECK(checked >= 25);
}

TEST_CASE("parallel schouten matches the serial reference") {
    Quiver d = double_quiver(testutil::gh_base());
    Gen g(31);
    for (int rep = 0; rep < 10; ++rep) {
        PolyVector l = g.polyvector(d, 2, 6, 6);
        PolyVector r = g.polyvector(d, 1 + g.pick(2), 6, 6);
        CHECK(schouten_parallel(l, r) == schouten_serial(l, r));
    }
}
