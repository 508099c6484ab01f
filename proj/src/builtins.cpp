#include "ncpn/builtins.hpp"

namespace ncpn {
namespace builtins {

const Quiver& cm_quiver() {
    static const Quiver q = double_quiver(Quiver("cm", {"v"}, {{"a", "v", "v"}}));
    return q;
}

const Quiver& gh_quiver() {
    static const Quiver q = double_quiver(
        Quiver("gh", {"v1", "v2"}, {{"a", "v1", "v1"}, {"x", "v2", "v1"}, {"y", "v1", "v2"}}));
    return q;
}

Symplectic cm_symplectic() { return Symplectic::canonical(cm_quiver()); }
Symplectic gh_symplectic() { return Symplectic::canonical(gh_quiver()); }

Bivector cm_pi0() { return cm_symplectic().poisson_bivector(); }
Bivector gh_pi0() { return gh_symplectic().poisson_bivector(); }

namespace {

Word pw(const Quiver& q, std::initializer_list<const char*> arrows) {
    std::vector<Sym> syms;
    for (const char* n : arrows) syms.push_back(q.arrow_sym(q.arrow_index(n)));
    auto w = make_word(q, syms);
    if (!w) throw Error("builtin word does not compose");
    return *w;
}

Word loop_pow(const Quiver& q, const char* name, int k) {
    return power_word(q, q.arrow_index(name), k);
}

} // namespace

Bivector cm_pi1() {
    const Quiver& q = cm_quiver();
    int a = q.arrow_index("a"), as = q.arrow_index("a^");
    std::vector<PresTerm> pres;
    pres.push_back({1, pw(q, {"a"}), as, trivial_word(0), a});
    pres.push_back({1, pw(q, {"a^"}), as, trivial_word(0), as});
    return Bivector::from_presentation(q, std::move(pres));
}

Bivector cm_pi_general(int m) {
    const Quiver& q = cm_quiver();
    int a = q.arrow_index("a"), as = q.arrow_index("a^");
    std::vector<PresTerm> pres;
    pres.push_back({1, loop_pow(q, "a", m), as, trivial_word(0), a});
    for (int i = 1; i <= m; ++i) {
        auto left = word_concat(q, pw(q, {"a^"}), loop_pow(q, "a", m - i));
        pres.push_back({1, *left, as, loop_pow(q, "a", i - 1), as});
    }
    return Bivector::from_presentation(q, std::move(pres));
}

RegularEndo cm_N() {
    const Quiver& q = cm_quiver();
    int a = q.arrow_index("a");
    std::map<int, PathPoly> coeff;
    coeff.emplace(a, path_of(q, pw(q, {"a^", "a"})));
    return complete_lift(q, one_form(q, coeff));
}

RegularEndo cm_N_alt() { return alt_cm_endo(cm_quiver()); }

DRForm gh_lambda_prime() {
    const Quiver& q = gh_quiver();
    std::map<int, PathPoly> coeff;
    coeff.emplace(q.arrow_index("a"), path_of(q, pw(q, {"a^", "a"})));
    coeff.emplace(q.arrow_index("x"), path_of(q, pw(q, {"x^", "a"})));
    coeff.emplace(q.arrow_index("y^"), path_of(q, pw(q, {"y", "a"})).scaled(-1));
    return one_form(q, coeff);
}

RegularEndo gh_N() { return complete_lift(gh_quiver(), gh_lambda_prime()); }

Bivector gh_pi1() {
    const Quiver& q = gh_quiver();
    int a = q.arrow_index("a"), as = q.arrow_index("a^");
    int x = q.arrow_index("x"), xs = q.arrow_index("x^");
    int y = q.arrow_index("y"), ys = q.arrow_index("y^");
    int v1 = q.vertex_index("v1"), v2 = q.vertex_index("v2");
    std::vector<PresTerm> pres;
    // π1 = [a∂_{a*},∂_a] + [a*∂_{a*},∂_{a*}] + [a∂_{x*},∂_x]
    //      + [x*∂_{a*},∂_{x*}] + [∂_{y*},a∂_y] + [y∂_{a*},∂_y]
    pres.push_back({1, pw(q, {"a"}), as, trivial_word(v1), a});
    pres.push_back({1, pw(q, {"a^"}), as, trivial_word(v1), as});
    pres.push_back({1, pw(q, {"a"}), xs, trivial_word(v2), x});
    pres.push_back({1, pw(q, {"x^"}), as, trivial_word(v1), xs});
    pres.push_back({1, trivial_word(v2), ys, pw(q, {"a"}), y});
    pres.push_back({1, pw(q, {"y"}), as, trivial_word(v1), y});
    return Bivector::from_presentation(q, std::move(pres));
}

PolyVector cm_I(int k) {
    const Quiver& q = cm_quiver();
    return necklace_of(q, loop_pow(q, "a", k), rat(1, k));
}

PolyVector cm_J(int l) {
    const Quiver& q = cm_quiver();
    return necklace_of(q, *word_concat(q, loop_pow(q, "a", l - 1), pw(q, {"a^"})));
}

PolyVector cm_H(int k) {
    const Quiver& q = cm_quiver();
    return necklace_of(q, loop_pow(q, "a^", k), rat(1, k));
}

PolyVector cm_K(int l) {
    const Quiver& q = cm_quiver();
    return necklace_of(q, *word_concat(q, loop_pow(q, "a^", l - 1), pw(q, {"a"})));
}

PolyVector gh_I(int k) {
    const Quiver& q = gh_quiver();
    return necklace_of(q, loop_pow(q, "a", k), rat(1, k));
}

PolyVector gh_I2(int k) {
    const Quiver& q = gh_quiver();
    PolyVector out(q, 0);
    Word ak = loop_pow(q, "a", k);
    out.add_word(*word_concat(q, ak, pw(q, {"x", "x^"})), 1);
    out.add_word(*word_concat(q, ak, pw(q, {"y^", "y"})), 1);
    return out;
}

PolyVector gh_J(int l) {
    const Quiver& q = gh_quiver();
    return necklace_of(q, *word_concat(q, loop_pow(q, "a", l - 1), pw(q, {"a^"})));
}

PolyVector gh_J2(int l) {
    const Quiver& q = gh_quiver();
    return necklace_of(q, *word_concat(q, loop_pow(q, "a", l), pw(q, {"x", "y"})), -1);
}

PolyVector cm_bracket_m(const PolyVector& f, const PolyVector& g, int m) {
    const Quiver& q = cm_quiver();
    int a = q.arrow_index("a"), as = q.arrow_index("a^");
    PathPoly fa = necklace_derivative(f, a), fas = necklace_derivative(f, as);
    PathPoly ga = necklace_derivative(g, a), gas = necklace_derivative(g, as);
    PathPoly am = path_of(q, loop_pow(q, "a", m));
    PathPoly acc = am * (fas * ga - gas * fa);
    for (int i = 1; i <= m; ++i) {
        PathPoly pre = path_of(q, *word_concat(q, pw(q, {"a^"}), loop_pow(q, "a", m - i)));
        PathPoly mid = path_of(q, loop_pow(q, "a", i - 1));
        acc += pre * (fas * mid * gas - gas * mid * fas);
    }
    return dr0_class(q, acc);
}

} // namespace builtins
} // namespace ncpn
