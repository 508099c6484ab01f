#include "ncpn/repr.hpp"

namespace ncpn {

int DimVector::total() const {
    int t = 0;
    for (int k : n) t += k;
    return t;
}

Rational RatRng::entry() {
    int num = uniform(-9, 9);
    int den = uniform(1, 4);
    return rat(num, den);
}

int RatRng::uniform(int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(rng);
}

RepPoint RepPoint::make(const Quiver& q, DimVector dims, std::vector<QMatrix> blocks) {
    if ((int)dims.n.size() != q.vertex_count()) throw Error("dimension vector size mismatch");
    bool positive = false;
    for (int k : dims.n) {
        if (k < 0) throw Error("negative dimension");
        if (k > 0) positive = true;
    }
    if (!positive) throw Error("dimension vector must have a positive entry");
    if ((int)blocks.size() != q.arrow_count()) throw Error("one matrix per arrow required");
    RepPoint x;
    x.q_ = &q;
    x.dims_ = std::move(dims);
    x.offsets_.resize(q.vertex_count(), 0);
    int off = 0;
    for (int v = 0; v < q.vertex_count(); ++v) {
        x.offsets_[v] = off;
        off += x.dims_.n[v];
    }
    x.total_ = off;
    for (int a = 0; a < q.arrow_count(); ++a) {
        int want_r = x.dims_.n[q.arrow(a).head];
        int want_c = x.dims_.n[q.arrow(a).tail];
        if (blocks[a].rows() != want_r || blocks[a].cols() != want_c)
            throw Error("matrix shape mismatch for arrow " + q.arrow(a).name);
    }
    x.blocks_ = std::move(blocks);
    return x;
}

RepPoint RepPoint::random(const Quiver& q, DimVector dims, RatRng& rng) {
    std::vector<QMatrix> blocks;
    for (int a = 0; a < q.arrow_count(); ++a) {
        QMatrix m(dims.n[q.arrow(a).head], dims.n[q.arrow(a).tail]);
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) m.at(i, j) = rng.entry();
        blocks.push_back(std::move(m));
    }
    return make(q, std::move(dims), std::move(blocks));
}

QMatrix RepPoint::embed_arrow(int arrow) const {
    QMatrix m(total_, total_);
    const Arrow& a = q_->arrow(arrow);
    int ro = offsets_[a.head], co = offsets_[a.tail];
    const QMatrix& b = blocks_[arrow];
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) m.at(ro + i, co + j) = b.at(i, j);
    return m;
}

QMatrix RepPoint::embed_vertex(int vertex) const {
    QMatrix m(total_, total_);
    for (int i = 0; i < dims_.n[vertex]; ++i) m.at(offsets_[vertex] + i, offsets_[vertex] + i) = 1;
    return m;
}

QMatrix RepPoint::eval_word(const Word& w) const {
    if (w.trivial()) return embed_vertex(w.vertex);
    QMatrix m;
    bool first = true;
    for (const Sym& s : w.syms) {
        if (s.kind != SymKind::Arrow) throw Error("evaluation of a non-path symbol");
        QMatrix e = embed_arrow(s.id);
        m = first ? e : m * e;
        first = false;
    }
    return m;
}

QMatrix RepPoint::eval(const PathPoly& p) const {
    QMatrix acc(total_, total_);
    for (auto& [w, c] : p.terms()) acc = acc + eval_word(w).scaled(c);
    return acc;
}

RepPoint RepPoint::conjugate(const std::vector<QMatrix>& g_blocks) const {
    const Quiver& q = *q_;
    std::vector<QMatrix> nb;
    std::vector<QMatrix> ginv;
    for (int v = 0; v < q.vertex_count(); ++v) {
        auto inv = g_blocks[v].inverse();
        if (!inv) throw Error("conjugation by a singular matrix");
        ginv.push_back(*inv);
    }
    for (int a = 0; a < q.arrow_count(); ++a)
        nb.push_back(g_blocks[q.arrow(a).head] * blocks_[a] * ginv[q.arrow(a).tail]);
    return make(q, dims_, std::move(nb));
}

Rational trace_fn(const PolyVector& f, const RepPoint& x) {
    if (f.grade() != 0 && !f.zero()) throw Error("trace_fn expects a grade-0 class");
    Rational t = 0;
    for (auto& [w, c] : f.terms()) t += x.eval_word(w).trace() * c;
    return t;
}

RepTangent induced_field(const Derivation& th, const RepPoint& x) {
    const Quiver& q = x.quiver();
    RepTangent t;
    for (int a = 0; a < q.arrow_count(); ++a) t.push_back(x.eval(th.of(a)));
    return t;
}

Rational directional_derivative(const PolyVector& f, const RepPoint& x, const RepTangent& t) {
    Rational out = 0;
    for (auto& [w, c] : f.terms()) {
        if (w.trivial()) continue;
        for (size_t i = 0; i < w.syms.size(); ++i) {
            QMatrix m = t[w.syms[i].id];
            for (size_t j = i + 1; j < w.syms.size(); ++j) m = m * x.embed_arrow(w.syms[j].id);
            for (size_t j = i; j-- > 0;) m = x.embed_arrow(w.syms[j].id) * m;
            out += m.trace() * c;
        }
    }
    return out;
}

Rational induced_bracket(const PoissonMap& pi, const PolyVector& f, const PolyVector& g,
                         const RepPoint& x) {
    return trace_fn(pair_form(d_of_function(g), pi.apply(d_of_function(f))), x);
}

Rational matrix_pairing(const DRForm& alpha, const Derivation& th, const RepPoint& x) {
    Rational t = 0;
    for (auto& [arrow, r] : alpha.one_form_coefficients())
        t += (x.eval(r) * x.eval(th.of(arrow))).trace();
    return t;
}

PointCheck jacobi_check(const PoissonMap& pi, const RepPoint& x,
                        const std::vector<PolyVector>& sample) {
    PointCheck out;
    auto br = [&](const PolyVector& f, const PolyVector& g) {
        return pair_form(d_of_function(g), pi.apply(d_of_function(f)));
    };
    for (size_t i = 0; i < sample.size(); ++i)
        for (size_t j = 0; j < sample.size(); ++j)
            for (size_t k = 0; k < sample.size(); ++k) {
                PolyVector s = br(br(sample[i], sample[j]), sample[k]);
                s.add(br(br(sample[j], sample[k]), sample[i]));
                s.add(br(br(sample[k], sample[i]), sample[j]));
                Rational v = trace_fn(s, x);
                if (sgn(v) != 0) {
                    out.pass = false;
                    out.detail = "triple (" + std::to_string(i) + "," + std::to_string(j) + "," +
                                 std::to_string(k) + ")";
                    out.residue = v;
                    return out;
                }
            }
    return out;
}

// ------------------------------------------------------ coordinate machinery

CoordSystem CoordSystem::make(const RepPoint& x) {
    const Quiver& q = x.quiver();
    CoordSystem cs;
    cs.q = &q;
    for (int a = 0; a < q.arrow_count(); ++a) {
        cs.arrow_offset.push_back((int)cs.coords.size());
        const Arrow& ar = q.arrow(a);
        int ro = x.offset(ar.head), co = x.offset(ar.tail);
        for (int i = 0; i < x.dims().n[ar.head]; ++i)
            for (int j = 0; j < x.dims().n[ar.tail]; ++j)
                cs.coords.push_back({a, ro + i, co + j});
    }
    return cs;
}

std::vector<Rational> trace_gradient(const PolyVector& f, const RepPoint& x,
                                     const CoordSystem& cs) {
    const Quiver& q = x.quiver();
    std::vector<Rational> g(cs.coords.size(), Rational(0));
    for (int a = 0; a < q.arrow_count(); ++a) {
        PathPoly df = necklace_derivative(f, a);
        if (df.zero()) continue;
        QMatrix m = x.eval(df);
        // ∂ tr(ŵ)/∂(τ_a)_{rc} = eval(∂w/∂a)_{cr}
        for (size_t k = 0; k < cs.coords.size(); ++k) {
            const auto& co = cs.coords[k];
            if (co.arrow != a) continue;
            g[k] = m.at(co.col, co.row);
        }
    }
    return g;
}

namespace {

// gradient entries reshaped as matrices G_c with (G_c)_{uv} = grad[(c, v, u)],
// i.e. exactly eval(∂f/∂c); the trace formulas below consume this shape.
std::vector<QMatrix> gradient_matrices(const RepPoint& x, const CoordSystem& cs,
                                       const std::vector<Rational>& grad) {
    const Quiver& q = x.quiver();
    std::vector<QMatrix> out;
    for (int a = 0; a < q.arrow_count(); ++a) {
        QMatrix m(x.total(), x.total());
        out.push_back(m);
    }
    for (size_t k = 0; k < cs.coords.size(); ++k) {
        const auto& co = cs.coords[k];
        if (sgn(grad[k]) != 0) out[co.arrow].at(co.col, co.row) = grad[k];
    }
    return out;
}

} // namespace

Rational bivector_contract(const std::vector<PresTerm>& pres, const RepPoint& x,
                           const std::vector<Rational>& df, const std::vector<Rational>& dg,
                           const CoordSystem& cs) {
    std::vector<QMatrix> F = gradient_matrices(x, cs, df);
    std::vector<QMatrix> G = gradient_matrices(x, cs, dg);
    Rational out = 0;
    for (const auto& t : pres) {
        QMatrix P = x.eval_word(t.P);
        QMatrix R = x.eval_word(t.R);
        out += (P * F[t.a] * R * G[t.b]).trace() * t.coeff;
        out -= (R * F[t.b] * P * G[t.a]).trace() * t.coeff;
    }
    return out;
}

namespace {

// Σ_l A[l] * S[l] where A is the "vector field" index family of u(df, .)
// and S[l] = Σ_{JK} ∂_l w^{JK} g_J h_K. Both are families of matrices per
// arrow; the contraction is a trace pairing per arrow.
struct ArrowMatrices {
    std::vector<QMatrix> m; // per arrow, embedded size
};

// V[L] with scalar u(df, dh) = Σ_L V[L] h_L: per arrow b a matrix W_b with
// V[(b, r, c)] = (W_b)_{cr}
ArrowMatrices field_of(const std::vector<PresTerm>& pres, const RepPoint& x,
                       const std::vector<QMatrix>& F) {
    const Quiver& q = x.quiver();
    ArrowMatrices W;
    for (int a = 0; a < q.arrow_count(); ++a) W.m.emplace_back(x.total(), x.total());
    for (const auto& t : pres) {
        QMatrix P = x.eval_word(t.P);
        QMatrix R = x.eval_word(t.R);
        W.m[t.b] = W.m[t.b] + (P * F[t.a] * R).scaled(t.coeff);
        W.m[t.a] = W.m[t.a] - (R * F[t.b] * P).scaled(t.coeff);
    }
    return W;
}

// S[l] for l = (c, u, v): Σ_terms coeff ( ∂_l tr(P̂ G R̂ H) - ∂_l tr(R̂ G' P̂ H') )
// differentiating only the presentation paths. Returned as matrices per
// arrow with S[(c, u, v)] = (S_c)_{vu}.
ArrowMatrices component_derivative_contraction(const std::vector<PresTerm>& pres,
                                               const RepPoint& x,
                                               const std::vector<QMatrix>& G,
                                               const std::vector<QMatrix>& H) {
    const Quiver& q = x.quiver();
    ArrowMatrices S;
    for (int a = 0; a < q.arrow_count(); ++a) S.m.emplace_back(x.total(), x.total());
    auto accumulate = [&](const Word& path, const QMatrix& around, const Rational& coeff) {
        // d tr(patĥ * around)/d(τ_c)_{uv} = Σ_occ (post̂ * around * prê)_{vu}
        if (path.trivial()) return;
        for (size_t i = 0; i < path.syms.size(); ++i) {
            int c = path.syms[i].id;
            QMatrix pre = QMatrix::identity(x.total());
            for (size_t j = 0; j < i; ++j) pre = pre * x.embed_arrow(path.syms[j].id);
            QMatrix post = QMatrix::identity(x.total());
            for (size_t j = i + 1; j < path.syms.size(); ++j)
                post = post * x.embed_arrow(path.syms[j].id);
            S.m[c] = S.m[c] + (post * around * pre).scaled(coeff);
        }
    };
    for (const auto& t : pres) {
        QMatrix P = x.eval_word(t.P);
        QMatrix R = x.eval_word(t.R);
        // term 1: tr(P̂ G_a R̂ H_b): occurrences in P and in R
        accumulate(t.P, G[t.a] * R * H[t.b], t.coeff);
        accumulate(t.R, H[t.b] * P * G[t.a], t.coeff);
        // term 2: -tr(R̂ G_b P̂ H_a)
        accumulate(t.R, G[t.b] * P * H[t.a], -t.coeff);
        accumulate(t.P, H[t.a] * R * G[t.b], -t.coeff);
    }
    return S;
}

Rational arrow_trace_pair(const ArrowMatrices& A, const ArrowMatrices& S) {
    // Σ_l A[l] S[l] with A[(b,r,c)] = (W_b)_{cr} and S[(c,u,v)] = (S_c)_{vu}:
    // Σ_{r,c} (W)_{cr} (S)_{rc} = tr(W S)
    Rational out = 0;
    for (size_t a = 0; a < A.m.size(); ++a) out += (A.m[a] * S.m[a]).trace();
    return out;
}

} // namespace

Rational schouten_contract(const std::vector<PresTerm>& pi, const std::vector<PresTerm>& rho,
                           const RepPoint& x, const std::vector<Rational>& df,
                           const std::vector<Rational>& dg, const std::vector<Rational>& dh,
                           const CoordSystem& cs) {
    std::vector<QMatrix> F = gradient_matrices(x, cs, df);
    std::vector<QMatrix> G = gradient_matrices(x, cs, dg);
    std::vector<QMatrix> H = gradient_matrices(x, cs, dh);

    // [u,w]^{IJK} f_I g_J h_K with the symmetric cyclic expansion
    // Σ_cyc Σ_l ( u^{lI} f_I ∂_l w^{JK} g_J h_K + w^{lI} f_I ∂_l u^{JK} g_J h_K ).
    // u^{lI} f_I = -V_u,f[l] by antisymmetry.
    auto term = [&](const std::vector<PresTerm>& u, const std::vector<PresTerm>& w,
                    const std::vector<QMatrix>& A, const std::vector<QMatrix>& B,
                    const std::vector<QMatrix>& C) -> Rational {
        ArrowMatrices vf = field_of(u, x, A);
        ArrowMatrices s = component_derivative_contraction(w, x, B, C);
        return -arrow_trace_pair(vf, s);
    };
    Rational out = 0;
    out += term(pi, rho, F, G, H) + term(rho, pi, F, G, H);
    out += term(pi, rho, G, H, F) + term(rho, pi, G, H, F);
    out += term(pi, rho, H, F, G) + term(rho, pi, H, F, G);
    return out;
}

PointCheck induced_schouten_check(const Bivector& pi, const Bivector& rho, const RepPoint& x,
                                  const std::vector<PolyVector>& sample) {
    PointCheck out;
    CoordSystem cs = CoordSystem::make(x);
    std::vector<std::vector<Rational>> grads;
    for (const auto& f : sample) grads.push_back(trace_gradient(f, x, cs));
    for (size_t i = 0; i < sample.size(); ++i)
        for (size_t j = i; j < sample.size(); ++j)
            for (size_t k = j; k < sample.size(); ++k) {
                Rational v = schouten_contract(pi.presentation(), rho.presentation(), x,
                                               grads[i], grads[j], grads[k], cs);
                if (sgn(v) != 0) {
                    out.pass = false;
                    out.detail = "triple (" + std::to_string(i) + "," + std::to_string(j) + "," +
                                 std::to_string(k) + ")";
                    out.residue = v;
                    return out;
                }
            }
    return out;
}

// ------------------------------------------------------------ GH observables

Rational gh_observable(const GHObservable& o, const RepPoint& x) {
    const Quiver& q = x.quiver();
    if (!q.doubled() || q.vertex_count() != 2) throw Error("gh_observable needs the GH double");
    int v2 = 1;
    if (x.dims().n[v2] != 1) throw Error("gh_observable needs dimension vector (n,1)");
    if (o.alpha.rows() != 2 || o.alpha.cols() != 2) throw Error("alpha must be 2x2");
    int n = x.dims().n[0];
    const QMatrix& X = x.block(q.arrow_index("a"));
    QMatrix v(n, 2), w(2, n);
    const QMatrix& tx = x.block(q.arrow_index("x"));
    const QMatrix& tys = x.block(q.arrow_index("y^"));
    const QMatrix& txs = x.block(q.arrow_index("x^"));
    const QMatrix& ty = x.block(q.arrow_index("y"));
    for (int i = 0; i < n; ++i) {
        v.at(i, 0) = -tx.at(i, 0);
        v.at(i, 1) = tys.at(i, 0);
        w.at(0, i) = txs.at(0, i);
        w.at(1, i) = ty.at(0, i);
    }
    QMatrix xp = QMatrix::identity(n);
    for (int i = 0; i < o.k; ++i) xp = xp * X;
    return (xp * v * o.alpha * w).trace();
}

PolyVector gh_observable_necklace(const Quiver& gh, int k, const QMatrix& alpha) {
    // tr X^k v α w = -α11 tr(a^k x x^) - α12 tr(a^k x y) + α21 tr(a^k y^ x^)
    //                + α22 tr(a^k y^ y)
    auto neck = [&](std::initializer_list<const char*> tail_syms) {
        Word w = power_word(gh, gh.arrow_index("a"), k);
        std::vector<Sym> syms = w.syms;
        for (const char* nm : tail_syms) syms.push_back(gh.arrow_sym(gh.arrow_index(nm)));
        auto full = make_word(gh, syms);
        if (!full) throw Error("gh observable word does not compose");
        return *full;
    };
    PolyVector out(gh, 0);
    out.add_word(neck({"x", "x^"}), -alpha.at(0, 0));
    out.add_word(neck({"x", "y"}), -alpha.at(0, 1));
    out.add_word(neck({"y^", "x^"}), alpha.at(1, 0));
    out.add_word(neck({"y^", "y"}), alpha.at(1, 1));
    return out;
}

} // namespace ncpn
