#pragma once

#include "ncpn/path_poly.hpp"

#include <functional>

namespace ncpn {

// Canonical rotation of a closed word under the graded cyclic relation
// P R = (-1)^{pr} R P, grading by degree-1 symbols (@a in polyvector words,
// "d a" in de Rham words). Returns nullopt when the word is zero in the
// quotient: not closed, or equal to minus itself under rotation.
std::optional<std::pair<Word, int>> cyclic_canonical(const Quiver& q, const Word& w);

// Graded polyvector fields: grade-homogeneous combinations of necklaces in
// canonical form. Grade 0 doubles as DR^0, the space of cyclic functions.
class PolyVector {
public:
    PolyVector() = default;
    PolyVector(const Quiver& q, int grade) : q_(&q), grade_(grade) {}

    const Quiver& quiver() const {
        if (!q_) throw Error("uninitialized PolyVector");
        return *q_;
    }
    int grade() const { return grade_; }
    bool zero() const { return terms_.empty(); }
    const PathPoly::Terms& terms() const { return terms_; }

    // Adds the class of a raw word (normalizing it); words of other grades
    // are rejected.
    void add_word(const Word& w, const Rational& c);
    void add(const PolyVector& o, const Rational& c = 1);
    // move-merge: splices nodes out of `o` instead of copying coefficients
    void absorb(PolyVector&& o);

    PolyVector operator+(const PolyVector& o) const;
    PolyVector operator-(const PolyVector& o) const;
    PolyVector scaled(const Rational& c) const;
    bool operator==(const PolyVector& o) const;
    bool operator!=(const PolyVector& o) const { return !(*this == o); }

    std::string str() const;

private:
    const Quiver* q_ = nullptr;
    int grade_ = 0;
    PathPoly::Terms terms_;
};

// Class of a raw combination of doubled-alphabet words; every monomial must
// have the same ∂-count.
PolyVector necklace_normalize(const Quiver& q, const PathPoly& raw);
PolyVector necklace_of(const Quiver& q, const Word& w, const Rational& c = 1);

// DR^0 class of an element of kQ (cyclic words; open paths die).
PolyVector dr0_class(const Quiver& q, const PathPoly& p);

// Directional superderivative D_y along an arrow or ∂ symbol: deletes each
// occurrence, rotates the remainder to start just after it, and applies the
// graded sign. The output lives in the raw word algebra and is deliberately
// not renormalized.
PathPoly directional_derivative(const Quiver& q, const Sym& y, const PolyVector& p);
PathPoly directional_derivative_word(const Quiver& q, const Sym& y, const Word& w);

// Schouten bracket on polyvectors. The OpenMP kernel and the serial
// reference compute identical canonical results; the default entry point
// dispatches to the serial kernel, which wins at the term counts the
// built-in structures produce (see tools/bench.cpp for the comparison).
PolyVector schouten(const PolyVector& a, const PolyVector& b);
PolyVector schouten_serial(const PolyVector& a, const PolyVector& b);
PolyVector schouten_parallel(const PolyVector& a, const PolyVector& b);

// Necklace derivative of a grade-0 class: rotate each occurrence of the
// arrow to the front and delete it; a genuine path polynomial from h(a)
// to t(a).
PathPoly necklace_derivative(const PolyVector& f, int arrow);

} // namespace ncpn
