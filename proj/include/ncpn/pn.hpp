#pragma once

#include "ncpn/forms.hpp"

#include <functional>

namespace ncpn {

// One commutator [P ∂_a, R ∂_b] of a bivector presentation, scaled.
struct PresTerm {
    Rational coeff;
    Word P;
    int a;
    Word R;
    int b;
};

class PoissonMap;

// A noncommutative bivector: grade-2 necklace class together with a
// commutator presentation Σ c_j [P_j ∂_{a_j}, R_j ∂_{b_j}]. The presentation
// is primary storage; the necklace normal form is derived from it.
class Bivector {
public:
    Bivector() = default;
    static Bivector from_presentation(const Quiver& q, std::vector<PresTerm> terms);
    // reads each necklace monomial u ∂_a v ∂_b back as (1/2)[u ∂_a, v ∂_b]
    static Bivector from_polyvector(const PolyVector& v);

    const Quiver& quiver() const {
        if (!q_) throw Error("uninitialized Bivector");
        return *q_;
    }
    const std::vector<PresTerm>& presentation() const { return pres_; }
    const PolyVector& normal() const { return normal_; }
    bool zero() const { return normal_.zero(); }
    bool operator==(const Bivector& o) const { return normal_ == o.normal_; }

    PoissonMap to_map() const;
    std::string str() const { return normal_.str(); }

private:
    const Quiver* q_ = nullptr;
    std::vector<PresTerm> pres_;
    PolyVector normal_;
};

// The map π~ : DR^1 -> Der attached to a presentation;
// π~(Σ S_c d c) = Σ_j c_j (P_j S_{a_j} R_j ∂_{b_j} - R_j S_{b_j} P_j ∂_{a_j}).
class PoissonMap {
public:
    PoissonMap() = default;
    PoissonMap(const Quiver& q, std::vector<PresTerm> pres) : q_(&q), pres_(std::move(pres)) {}

    const Quiver& quiver() const {
        if (!q_) throw Error("uninitialized PoissonMap");
        return *q_;
    }
    const std::vector<PresTerm>& presentation() const { return pres_; }

    Derivation apply(const DRForm& alpha) const;
    Derivation apply_coeffs(const std::map<int, PathPoly>& coeffs) const;

    // π(α, β) = <β, π~(α)>
    PolyVector pairing(const DRForm& alpha, const DRForm& beta) const;

private:
    const Quiver* q_ = nullptr;
    std::vector<PresTerm> pres_;
};

// A regular endomorphism N of Der(Q), stored through its derivation
// d^N : kQ -> Ω^1, one degree-1 form per arrow. N(θ)(a) = i_θ(d^N a) and
// N*(d a) = class of d^N a.
class RegularEndo {
public:
    RegularEndo() = default;
    static RegularEndo from_dN(const Quiver& q, std::map<int, FormWord> dN);
    static RegularEndo identity(const Quiver& q);
    static RegularEndo zero(const Quiver& q);

    const Quiver& quiver() const {
        if (!q_) throw Error("uninitialized RegularEndo");
        return *q_;
    }
    const FormWord& dN(int arrow) const;

    Derivation apply(const Derivation& th) const;
    DRForm transpose(const DRForm& alpha) const;

private:
    const Quiver* q_ = nullptr;
    std::map<int, FormWord> dN_;
};

// The canonical symplectic structure ω = Σ_a d a* d a on a doubled quiver,
// with its musical maps.
class Symplectic {
public:
    Symplectic() = default;
    static Symplectic canonical(const Quiver& doubled);

    const Quiver& quiver() const {
        if (!q_) throw Error("uninitialized Symplectic");
        return *q_;
    }
    const FormWord& form() const { return omega_; }
    DRForm dr_class() const;

    DRForm flat(const Derivation& th) const;     // ω♭(θ) = i_θ(ω)
    Derivation sharp(const DRForm& alpha) const; // inverse, by the S-coefficient pattern

    // π0 with π~0 = -ω♯, presented as Σ_a [∂_{a*}, ∂_a]
    Bivector poisson_bivector() const;

private:
    const Quiver* q_ = nullptr;
    FormWord omega_;
};

// ---- derivation-level operations ------------------------------------------

Derivation commutator(const Derivation& th, const Derivation& et);
Derivation deformed_bracket(const RegularEndo& N, const Derivation& th, const Derivation& et);
Derivation torsion(const RegularEndo& N, const Derivation& th, const Derivation& et);

// ---- brackets of 1-forms ---------------------------------------------------

// {α,β}_π = L_{π~α}(β) - L_{π~β}(α) - d(π(α,β))
DRForm bracket_1forms(const PoissonMap& pi, const DRForm& alpha, const DRForm& beta);

// the N*-deformation of {.,.}_π
DRForm deformed_bracket_1forms_v1(const PoissonMap& pi, const RegularEndo& N,
                                  const DRForm& alpha, const DRForm& beta);
// the deformation through d^N / L^N, written out with L and N*
DRForm deformed_bracket_1forms_v2(const PoissonMap& pi, const RegularEndo& N,
                                  const DRForm& alpha, const DRForm& beta);

// C_{(π,N)} = (1/2)({α,β}_{π,N*} - {α,β}_π')
DRForm magri_morosi(const PoissonMap& pi, const RegularEndo& N,
                    const DRForm& alpha, const DRForm& beta);
// the direct expansion of the concomitant, kept as an internal cross-check
DRForm magri_morosi_expanded(const PoissonMap& pi, const RegularEndo& N,
                             const DRForm& alpha, const DRForm& beta);

// torsion of N* on 1-forms with respect to {.,.}_π
DRForm transpose_torsion(const PoissonMap& pi, const RegularEndo& N,
                         const DRForm& alpha, const DRForm& beta);

// per-triple residue of the compatibility identity
// <T_{N*}(α,β),θ> + <α, T_N(π~β,θ)> - <C(N*α,β),θ> + <C(α,β),Nθ>
PolyVector ksm_identity_check(const PoissonMap& pi, const RegularEndo& N,
                              const DRForm& alpha, const DRForm& beta, const Derivation& th);

// ---- structure-level operations -------------------------------------------

struct PoissonVerdict {
    bool pass;
    PolyVector witness; // the nonzero Schouten residue on failure
};
PoissonVerdict is_double_poisson(const Bivector& pi);

PoissonMap bivector_to_map(const Bivector& pi);

// Reconstructs a bivector from any linear map DR^1 -> Der evaluated on
// marker one-forms; throws when the round-trip fails (non-skew input).
using OneFormMap = std::function<Derivation(const std::map<int, PathPoly>&)>;
Bivector map_to_bivector(const Quiver& q, const OneFormMap& m);

// π~_j = N^j ∘ π~ for j = 0..k, each reconstructed into presentation form.
std::vector<Bivector> hierarchy(const Bivector& pi, const RegularEndo& N, int k);

struct LenardResult {
    bool pass;
    std::vector<Derivation> residues; // one per consecutive link
};
LenardResult lenard_check(const PoissonMap& lo, const PoissonMap& hi,
                          const std::vector<PolyVector>& chain);

Symplectic canonical_symplectic(const Quiver& doubled);
Derivation hamiltonian_derivation(const Symplectic& om, const PolyVector& f);

// Complete lift of the deformation λ' (a 1-form on the double): the unique
// regular N with i_{N(θ)}(ω) = i_θ(dλ').
RegularEndo complete_lift(const Quiver& doubled, const DRForm& lambda_prime);

// The alternative Calogero-Moser tensor of the one-loop double:
// N(θ)(a, a*) = ([θ(a*),a] + a*θ(a), θ(a*)a*)
RegularEndo alt_cm_endo(const Quiver& cm_double);

// ---- bounded test families and sweep checks --------------------------------

struct FamilyMember {
    int arrow;
    Word coeff;
    int len;
};

struct TestFamily {
    const Quiver* q = nullptr;
    std::vector<FamilyMember> derivations; // p ∂_a
    std::vector<FamilyMember> one_forms;   // p d a

    Derivation derivation(size_t i) const;
    DRForm one_form_at(size_t i) const;
    std::string der_desc(size_t i) const;
    std::string form_desc(size_t i) const;
};

std::vector<Word> paths_from_to(const Quiver& q, int tail, int head, int maxlen);
TestFamily make_test_family(const Quiver& q, int maxlen);

struct CheckOutcome {
    bool pass = true;
    long cases = 0;
    std::string member;  // description of the first failing member
    std::string residue; // its canonical residue
};

CheckOutcome check_torsion(const RegularEndo& N, const TestFamily& fam);
CheckOutcome check_concomitant(const PoissonMap& pi, const RegularEndo& N, const TestFamily& fam);
CheckOutcome check_algebraic_compat(const PoissonMap& pi, const RegularEndo& N,
                                    const TestFamily& fam);
CheckOutcome check_skew(const PoissonMap& pi, const TestFamily& fam);
// triple sweep over (α, β, θ) with |α|+|β|+|θ| ≤ total_len
CheckOutcome check_ksm(const PoissonMap& pi, const RegularEndo& N, const TestFamily& fam,
                       int total_len);

} // namespace ncpn
