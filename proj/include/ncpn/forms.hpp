#pragma once

#include "ncpn/polyvec.hpp"

namespace ncpn {

// A B-linear derivation kQ -> kQ in canonical form: the image of every
// arrow (a path polynomial parallel to it), with idempotents sent to zero.
class Derivation {
public:
    Derivation() = default;
    explicit Derivation(const Quiver& q) : q_(&q) {}

    const Quiver& quiver() const {
        if (!q_) throw Error("uninitialized Derivation");
        return *q_;
    }
    bool zero() const { return img_.empty(); }
    const std::map<int, PathPoly>& images() const { return img_; }

    void set(int arrow, const PathPoly& value);
    void accumulate(int arrow, const PathPoly& value);
    PathPoly of(int arrow) const;

    // Leibniz extension to paths and polynomials (vertices map to 0).
    PathPoly apply(const Word& w) const;
    PathPoly apply(const PathPoly& p) const;

    Derivation operator+(const Derivation& o) const;
    Derivation operator-(const Derivation& o) const;
    Derivation scaled(const Rational& c) const;
    bool operator==(const Derivation& o) const;
    bool operator!=(const Derivation& o) const { return !(*this == o); }

    // Σ_a p_a ∂_a as a grade-1 polyvector class.
    PolyVector to_polyvector() const;
    std::string str() const;

private:
    const Quiver* q_ = nullptr;
    std::map<int, PathPoly> img_;
};

Derivation partial_derivation(const Quiver& q, int arrow); // ∂_a
Derivation derivation_from_polyvector(const PolyVector& v);

// An element of Ω^r(Q): sum of tensor words [p0 ⊗ p1 ⊗ ... ⊗ pr] with p0 a
// path (possibly trivial) and each later slot a nontrivial path, composable
// across slots. Incomposable or B-degenerate words vanish on insertion.
class FormWord {
public:
    using Tensor = std::vector<Word>;
    using Terms = std::map<Tensor, Rational>;

    FormWord() = default;
    FormWord(const Quiver& q, int degree) : q_(&q), degree_(degree) {}

    const Quiver& quiver() const {
        if (!q_) throw Error("uninitialized FormWord");
        return *q_;
    }
    int degree() const { return degree_; }
    bool zero() const { return terms_.empty(); }
    const Terms& terms() const { return terms_; }

    void add(const Tensor& t, const Rational& c);
    FormWord operator+(const FormWord& o) const;
    FormWord operator-(const FormWord& o) const;
    FormWord& operator+=(const FormWord& o);
    FormWord scaled(const Rational& c) const;
    bool operator==(const FormWord& o) const;

    std::string str() const;

private:
    const Quiver* q_ = nullptr;
    int degree_ = 0;
    Terms terms_;
};

FormWord form_zero(const Quiver& q, int degree);
FormWord form_of_poly(const Quiver& q, const PathPoly& p); // degree 0
FormWord form_d_arrow(const Quiver& q, int arrow);         // d a = [e ⊗ a]

// Graded product of the DG algebra (alternating contraction of slots).
FormWord form_product(const FormWord& u, const FormWord& v);

// d [p0 ⊗ ...] = [1 ⊗ p0 ⊗ ...] with the unit expanded over idempotents.
FormWord differential(const FormWord& u);

// i_θ with signs (-1)^{j-1}; degree drops by one, zero on degree 0.
FormWord contract(const Derivation& th, const FormWord& u);

// Cartan formula  L_θ = d ∘ i_θ + i_θ ∘ d.
FormWord lie_derivative(const Derivation& th, const FormWord& u);

// PathPoly view of a degree-0 form.
PathPoly form_to_poly(const FormWord& u);

// A class in DR^r(Q), stored as graded-cyclic words over the extended
// alphabet {arrows} ∪ {d-arrows}. Degree-1 words keep their d-symbol last,
// which is exactly the canonical Σ r_a d a presentation.
class DRForm {
public:
    DRForm() = default;
    DRForm(const Quiver& q, int degree) : q_(&q), degree_(degree) {}

    const Quiver& quiver() const {
        if (!q_) throw Error("uninitialized DRForm");
        return *q_;
    }
    int degree() const { return degree_; }
    bool zero() const { return terms_.empty(); }
    const PathPoly::Terms& terms() const { return terms_; }

    void add_extended_word(const Word& w, const Rational& c);
    DRForm operator+(const DRForm& o) const;
    DRForm operator-(const DRForm& o) const;
    DRForm scaled(const Rational& c) const;
    bool operator==(const DRForm& o) const;
    bool operator!=(const DRForm& o) const { return !(*this == o); }

    // Degree-1 canonical coefficients r_a (empty polys omitted).
    std::map<int, PathPoly> one_form_coefficients() const;

    // A representative in Ω^r; degree ≤ 1 only (higher forms are consumed
    // as FormWords before normalization).
    FormWord lift() const;

    std::string str() const;

private:
    const Quiver* q_ = nullptr;
    int degree_ = 0;
    PathPoly::Terms terms_;
};

// Canonical representative in DR^r; two words congruent modulo graded
// commutators normalize identically.
DRForm dr_normalize(const FormWord& u);

DRForm one_form(const Quiver& q, const std::map<int, PathPoly>& coeffs);
DRForm d_of_function(const PolyVector& f); // via necklace derivatives

// <α, θ> = Σ_a r_a p_a as a DR^0 class.
PolyVector pair_form(const DRForm& alpha, const Derivation& th);

PolyVector dr0_of(const DRForm& f); // degree-0 DRForm as PolyVector

} // namespace ncpn
