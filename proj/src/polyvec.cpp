#include "ncpn/polyvec.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <vector>

namespace ncpn {

std::optional<std::pair<Word, int>> cyclic_canonical(const Quiver& q, const Word& w) {
    if (w.trivial()) return std::make_pair(w, 1);
    if (!word_closed(q, w)) return std::nullopt;
    const size_t n = w.syms.size();
    const int total = word_degree(w);

    // Walk all rotations once, keeping the lexicographic minimum. `best` is
    // always the minimum over rotations seen so far, so any later rotation
    // equal to the eventual minimum is compared against the right sign.
    Word best = w;
    int best_sign = 1;
    bool clash = false;
    Word cur = w;
    int sign = 1;
    for (size_t step = 1; step < n; ++step) {
        int d = Quiver::sym_degree(cur.syms.front());
        if ((d * (total - d)) % 2 != 0) sign = -sign;
        std::rotate(cur.syms.begin(), cur.syms.begin() + 1, cur.syms.end());
        if (cur == best) {
            if (sign != best_sign) clash = true;
        } else if (cur < best) {
            best = cur;
            best_sign = sign;
            clash = false;
        }
    }
    if (clash) return std::nullopt; // equal to its own negative
    return std::make_pair(best, best_sign);
}

void PolyVector::add_word(const Word& w, const Rational& c) {
    if (ncpn::is_zero(c)) return;
    if (word_degree(w) != grade_) throw Error("word grade mismatch in PolyVector");
    auto canon = cyclic_canonical(*q_, w);
    if (!canon) return;
    auto [cw, sign] = *canon;
    auto [it, fresh] = terms_.emplace(cw, sign * c);
    if (!fresh) {
        it->second += sign * c;
        if (ncpn::is_zero(it->second)) terms_.erase(it);
    }
}

void PolyVector::add(const PolyVector& o, const Rational& c) {
    if (o.terms_.empty()) return;
    if (!q_ || terms_.empty()) {
        q_ = q_ ? q_ : o.q_;
        grade_ = o.grade_;
    }
    if (q_ != o.q_) throw Error("operands belong to different quivers");
    if (grade_ != o.grade_) throw Error("grade mismatch");
    for (auto& [w, k] : o.terms_) {
        auto [it, fresh] = terms_.emplace(w, k * c);
        if (!fresh) {
            it->second += k * c;
            if (ncpn::is_zero(it->second)) terms_.erase(it);
        }
    }
}

void PolyVector::absorb(PolyVector&& o) {
    if (o.terms_.empty()) return;
    if (!q_ || terms_.empty()) {
        q_ = q_ ? q_ : o.q_;
        grade_ = o.grade_;
    }
    if (q_ != o.q_) throw Error("operands belong to different quivers");
    if (grade_ != o.grade_) throw Error("grade mismatch");
    terms_.merge(o.terms_);
    // keys left behind collided; accumulate them
    for (auto& [w, c] : o.terms_) {
        auto it = terms_.find(w);
        it->second += c;
        if (ncpn::is_zero(it->second)) terms_.erase(it);
    }
    o.terms_.clear();
}

PolyVector PolyVector::operator+(const PolyVector& o) const {
    PolyVector r = *this;
    r.add(o);
    return r;
}

PolyVector PolyVector::operator-(const PolyVector& o) const {
    PolyVector r = *this;
    r.add(o, -1);
    return r;
}

PolyVector PolyVector::scaled(const Rational& c) const {
    PolyVector r(*q_, grade_);
    if (ncpn::is_zero(c)) return r;
    for (auto& [w, k] : terms_) r.terms_.emplace(w, k * c);
    return r;
}

bool PolyVector::operator==(const PolyVector& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    auto it = terms_.begin();
    auto jt = o.terms_.begin();
    for (; it != terms_.end(); ++it, ++jt)
        if (!(it->first == jt->first) || it->second != jt->second) return false;
    return true;
}

std::string PolyVector::str() const {
    PathPoly p(*q_);
    for (auto& [w, c] : terms_) p.add(w, c);
    return p.str();
}

PolyVector necklace_normalize(const Quiver& q, const PathPoly& raw) {
    int grade = -1;
    for (auto& [w, c] : raw.terms()) {
        int g = word_degree(w);
        if (grade < 0) grade = g;
        else if (g != grade) throw Error("mixed grades in necklace_normalize");
    }
    PolyVector out(q, grade < 0 ? 0 : grade);
    for (auto& [w, c] : raw.terms()) out.add_word(w, c);
    return out;
}

PolyVector necklace_of(const Quiver& q, const Word& w, const Rational& c) {
    PolyVector out(q, word_degree(w));
    out.add_word(w, c);
    return out;
}

PolyVector dr0_class(const Quiver& q, const PathPoly& p) {
    PolyVector out(q, 0);
    for (auto& [w, c] : p.terms()) out.add_word(w, c);
    return out;
}

PathPoly directional_derivative_word(const Quiver& q, const Sym& y, const Word& w) {
    PathPoly out(q);
    if (w.trivial()) return out;
    const size_t n = w.syms.size();
    const int total = word_degree(w);
    int before = 0; // ∂-count among syms[0..i]
    for (size_t i = 0; i < n; ++i) {
        before += Quiver::sym_degree(w.syms[i]);
        if (w.syms[i] != y) continue;
        int after = total - before;
        int sign = ((before * after) % 2 != 0) ? -1 : 1;
        std::vector<Sym> rest;
        rest.insert(rest.end(), w.syms.begin() + i + 1, w.syms.end());
        rest.insert(rest.end(), w.syms.begin(), w.syms.begin() + i);
        if (rest.empty()) {
            out.add(trivial_word(q.sym_tail(y)), sign);
        } else {
            Word r;
            r.syms = std::move(rest);
            out.add(r, sign);
        }
    }
    return out;
}

PathPoly directional_derivative(const Quiver& q, const Sym& y, const PolyVector& p) {
    PathPoly out(q);
    for (auto& [w, c] : p.terms()) out += directional_derivative_word(q, y, w).scaled(c);
    return out;
}

namespace {

// [λ, ξ] = Σ_a D_{∂a}(λ) D_a(ξ) - (-1)^{(p+1)(q+1)} D_{∂a}(ξ) D_a(λ)
//
// The directional derivatives of every monomial are computed once per arrow;
// the quadratic product phase then multiplies precomputed polynomials. The
// product tasks are independent and carry the per-task canonicalization, so
// the parallel kernel and the serial reference share everything but the loop.
struct DTable {
    std::vector<PathPoly> dpartial; // per (arrow, term)
    std::vector<PathPoly> darrow;
};

DTable d_table(const Quiver& q, const PolyVector& v) {
    DTable t;
    const int n = q.arrow_count();
    t.dpartial.reserve((size_t)n * v.terms().size());
    t.darrow.reserve((size_t)n * v.terms().size());
    for (int c = 0; c < n; ++c) {
        Sym ds = q.partial_sym(c);
        Sym as = q.arrow_sym(c);
        for (auto& [w, coeff] : v.terms()) {
            t.dpartial.push_back(directional_derivative_word(q, ds, w).scaled(coeff));
            t.darrow.push_back(directional_derivative_word(q, as, w));
        }
    }
    return t;
}

PolyVector schouten_impl(const PolyVector& a, const PolyVector& b, bool parallel) {
    const Quiver& q = a.quiver();
    if (&q != &b.quiver()) throw Error("operands belong to different quivers");
    const int p = a.grade(), r = b.grade();
    const int swap_sign = (((p + 1) * (r + 1)) % 2 != 0) ? -1 : 1;
    PolyVector out(q, p + r - 1 < 0 ? 0 : p + r - 1);
    if (a.zero() || b.zero()) return out;

    DTable ta = d_table(q, a);
    DTable tb = d_table(q, b);
    const size_t na = a.terms().size(), nb = b.terms().size();
    std::vector<Rational> cb;
    for (auto& [w, c] : b.terms()) cb.push_back(c);
    std::vector<Rational> ca;
    for (auto& [w, c] : a.terms()) ca.push_back(c);

    // one task per (arrow, monomial of λ): multiplies against every monomial
    // of ξ in both bracket slots, canonicalizing as it goes
    struct Task {
        int arrow;
        size_t i;
    };
    std::vector<Task> tasks;
    const int n = q.arrow_count();
    for (int c = 0; c < n; ++c)
        for (size_t i = 0; i < na; ++i) tasks.push_back({c, i});

    auto run_task = [&](const Task& t) {
        PolyVector piece(q, out.grade());
        const size_t c = (size_t)t.arrow;
        const PathPoly& dl = ta.dpartial[c * na + t.i];
        const PathPoly& dra = ta.darrow[c * na + t.i];
        for (size_t j = 0; j < nb; ++j) {
            if (!dl.zero()) {
                const PathPoly& dr = tb.darrow[c * nb + j];
                if (!dr.zero()) {
                    PathPoly prod = dl * dr;
                    for (auto& [w, k] : prod.terms()) piece.add_word(w, k * cb[j]);
                }
            }
            if (!dra.zero()) {
                const PathPoly& dl2 = tb.dpartial[c * nb + j];
                if (!dl2.zero()) {
                    PathPoly prod = dl2 * dra;
                    Rational factor = ca[t.i] * (-swap_sign);
                    for (auto& [w, k] : prod.terms()) piece.add_word(w, k * factor);
                }
            }
        }
        return piece;
    };

#ifdef _OPENMP
    if (parallel && tasks.size() >= 16) {
        int nt = omp_get_max_threads();
        std::vector<PolyVector> acc((size_t)nt, PolyVector(q, out.grade()));
#pragma omp parallel for schedule(dynamic, 2)
        for (long i = 0; i < (long)tasks.size(); ++i)
            acc[(size_t)omp_get_thread_num()].absorb(run_task(tasks[(size_t)i]));
        for (auto& t : acc) out.absorb(std::move(t));
        return out;
    }
#else
    (void)parallel;
#endif
    for (auto& t : tasks) out.absorb(run_task(t));
    return out;
}

} // namespace

PolyVector schouten(const PolyVector& a, const PolyVector& b) {
    return schouten_impl(a, b, false);
}

PolyVector schouten_serial(const PolyVector& a, const PolyVector& b) {
    return schouten_impl(a, b, false);
}

PolyVector schouten_parallel(const PolyVector& a, const PolyVector& b) {
    return schouten_impl(a, b, true);
}

PathPoly necklace_derivative(const PolyVector& f, int arrow) {
    if (f.grade() != 0) throw Error("necklace_derivative expects a grade-0 class");
    const Quiver& q = f.quiver();
    PathPoly out(q);
    Sym a = q.arrow_sym(arrow);
    for (auto& [w, c] : f.terms()) out += directional_derivative_word(q, a, w).scaled(c);
    return out;
}

} // namespace ncpn
