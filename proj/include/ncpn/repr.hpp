#pragma once

#include "ncpn/pn.hpp"
#include "ncpn/qmatrix.hpp"

#include <random>

namespace ncpn {

// Dimension vector: one count per vertex, at least one positive.
struct DimVector {
    std::vector<int> n; // by vertex index
    int total() const;
};

// Seeded generator for random rational matrix entries p/q with p in [-9,9]
// and q in [1,4], as the reports record.
struct RatRng {
    std::mt19937_64 rng;
    explicit RatRng(uint64_t seed) : rng(seed) {}
    Rational entry();
    int uniform(int lo, int hi);
};

// A representation point: one rational matrix per arrow, block-shaped by the
// dimension vector. Internally everything is evaluated through the embedded
// |n| x |n| matrices τ̃.
class RepPoint {
public:
    RepPoint() = default;
    static RepPoint make(const Quiver& q, DimVector dims, std::vector<QMatrix> blocks);
    static RepPoint random(const Quiver& q, DimVector dims, RatRng& rng);

    const Quiver& quiver() const {
        if (!q_) throw Error("uninitialized RepPoint");
        return *q_;
    }
    const DimVector& dims() const { return dims_; }
    int total() const { return total_; }
    int offset(int vertex) const { return offsets_[vertex]; }
    const QMatrix& block(int arrow) const { return blocks_[arrow]; }

    QMatrix embed_arrow(int arrow) const;  // τ̃_a
    QMatrix embed_vertex(int vertex) const; // τ̃_i

    QMatrix eval_word(const Word& w) const;
    QMatrix eval(const PathPoly& p) const;

    // conjugated point g . τ . g^{-1} for block-diagonal invertible g
    RepPoint conjugate(const std::vector<QMatrix>& g_blocks) const;

private:
    const Quiver* q_ = nullptr;
    DimVector dims_;
    int total_ = 0;
    std::vector<int> offsets_;
    std::vector<QMatrix> blocks_;
};

// trace of the evaluated cyclic word; vertex classes give n_i
Rational trace_fn(const PolyVector& f, const RepPoint& x);

using RepTangent = std::vector<QMatrix>; // embedded matrices, one per arrow

RepTangent induced_field(const Derivation& th, const RepPoint& x);

// directional derivative of the induced function along an (embedded)
// tangent, computed exactly through the product rule
Rational directional_derivative(const PolyVector& f, const RepPoint& x, const RepTangent& t);

// {f,g}(x) = trace of pair(d g, π~(d f)) at x
Rational induced_bracket(const PoissonMap& pi, const PolyVector& f, const PolyVector& g,
                         const RepPoint& x);

// <α̂, θ̌>(x) computed on the matrix side, arrow by arrow
Rational matrix_pairing(const DRForm& alpha, const Derivation& th, const RepPoint& x);

struct PointCheck {
    bool pass = true;
    std::string detail;  // first failing combination
    Rational residue = 0;
};

// Σ_cyc {{f,g},h} over all sample triples, brackets symbolic, evaluated at x
PointCheck jacobi_check(const PoissonMap& pi, const RepPoint& x,
                        const std::vector<PolyVector>& sample);

// ---- coordinate (matrix-entry) machinery -----------------------------------

// Flattened coordinates: arrows in declaration order, entries row-major per
// block. Component and derivative tensors are evaluated at a point.
struct CoordSystem {
    const Quiver* q = nullptr;
    struct Coord {
        int arrow;
        int row; // embedded indices
        int col;
    };
    std::vector<Coord> coords;
    std::vector<int> arrow_offset; // first coordinate of each arrow block

    static CoordSystem make(const RepPoint& x);
};

// gradient of a trace function: one entry per coordinate
std::vector<Rational> trace_gradient(const PolyVector& f, const RepPoint& x,
                                     const CoordSystem& cs);

// the induced bivector of a presentation, contracted with two gradients
Rational bivector_contract(const std::vector<PresTerm>& pres, const RepPoint& x,
                           const std::vector<Rational>& df, const std::vector<Rational>& dg,
                           const CoordSystem& cs);

// the coordinate Schouten bracket [π̌, ρ̌] contracted with three gradients
Rational schouten_contract(const std::vector<PresTerm>& pi, const std::vector<PresTerm>& rho,
                           const RepPoint& x, const std::vector<Rational>& df,
                           const std::vector<Rational>& dg, const std::vector<Rational>& dh,
                           const CoordSystem& cs);

PointCheck induced_schouten_check(const Bivector& pi, const Bivector& rho, const RepPoint& x,
                                  const std::vector<PolyVector>& sample);

// ---- Gibbons-Hermsen observables -------------------------------------------

struct GHObservable {
    int k = 0;
    QMatrix alpha; // 2x2 parameter matrix
};

// tr X^k v α w with X = τ_a, v = (-τ_x  τ_{y*}), w = (τ_{x*}; τ_y);
// requires dimension vector (n, 1)
Rational gh_observable(const GHObservable& o, const RepPoint& x);

// the necklace word inducing H_{k,α}
PolyVector gh_observable_necklace(const Quiver& gh, int k, const QMatrix& alpha);

} // namespace ncpn
