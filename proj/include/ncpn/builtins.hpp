#pragma once

#include "ncpn/pn.hpp"

namespace ncpn {
namespace builtins {

// The doubled one-loop quiver (vertex v, loop a) and the doubled
// Bielawski-Pidstrygach quiver (vertices v1, v2; loop a at v1, x: v2 -> v1,
// y: v1 -> v2). Both live for the program's lifetime.
const Quiver& cm_quiver();
const Quiver& gh_quiver();

Symplectic cm_symplectic();
Symplectic gh_symplectic();

Bivector cm_pi0();
Bivector cm_pi1();           // [a ∂_{a*}, ∂_a] + [a* ∂_{a*}, ∂_{a*}]
Bivector cm_pi_general(int m); // the closed-form m-th bivector of the hierarchy
RegularEndo cm_N();          // complete lift of a* a d a
RegularEndo cm_N_alt();

Bivector gh_pi0();
Bivector gh_pi1();           // the six-commutator bivector
RegularEndo gh_N();          // complete lift of a* a d a + x* a d x - y a d y*
DRForm gh_lambda_prime();

// necklace Hamiltonians
PolyVector cm_I(int k);  // a^k / k
PolyVector cm_J(int l);  // a^{l-1} a*
PolyVector cm_H(int k);  // a*^k / k
PolyVector cm_K(int l);  // a*^{l-1} a
PolyVector gh_I(int k);  // a^k / k
PolyVector gh_I2(int k); // a^k (x x* + y* y)
PolyVector gh_J(int l);  // a^{l-1} a*
PolyVector gh_J2(int l); // -a^l x y

// the Calogero-Moser bracket hierarchy computed through necklace
// derivatives: {f,g}_m of the displayed formula
PolyVector cm_bracket_m(const PolyVector& f, const PolyVector& g, int m);

} // namespace builtins
} // namespace ncpn
