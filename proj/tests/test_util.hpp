#pragma once

#include "ncpn/path_poly.hpp"
#include "ncpn/polyvec.hpp"

#include <random>

namespace ncpn::testutil {

// Random walks on the quiver: deterministic for a fixed seed.
struct Gen {
    std::mt19937_64 rng;
    explicit Gen(uint64_t seed) : rng(seed) {}

    int pick(int n) { return (int)(rng() % (uint64_t)n); }

    Rational small_rat() {
        static const int nums[] = {-3, -2, -1, 1, 1, 2, 3, 5};
        static const int dens[] = {1, 1, 1, 2, 3};
        return rat(nums[pick(8)], dens[pick(5)]);
    }

    // random composable word of exactly `len` symbols starting anywhere;
    // with_partials mixes @ symbols in
    std::optional<Word> word(const Quiver& q, int len, bool with_partials) {
        if (len == 0) return trivial_word(pick(q.vertex_count()));
        for (int attempt = 0; attempt < 60; ++attempt) {
            std::vector<Sym> syms;
            int need_head = -1;
            bool ok = true;
            for (int i = 0; i < len; ++i) {
                std::vector<Sym> cands;
                for (int a = 0; a < q.arrow_count(); ++a) {
                    Sym s = q.arrow_sym(a);
                    if (need_head < 0 || q.sym_head(s) == need_head) cands.push_back(s);
                    if (with_partials) {
                        Sym p = q.partial_sym(a);
                        if (need_head < 0 || q.sym_head(p) == need_head) cands.push_back(p);
                    }
                }
                if (cands.empty()) {
                    ok = false;
                    break;
                }
                Sym s = cands[pick((int)cands.size())];
                syms.push_back(s);
                need_head = q.sym_tail(s);
            }
            if (!ok) continue;
            if (auto w = make_word(q, syms)) return w;
        }
        return std::nullopt;
    }

    // random closed word (necklace candidate)
    std::optional<Word> closed_word(const Quiver& q, int len, bool with_partials) {
        for (int attempt = 0; attempt < 120; ++attempt) {
            auto w = word(q, len, with_partials);
            if (w && word_closed(q, *w)) return w;
        }
        return std::nullopt;
    }

    PathPoly poly(const Quiver& q, int terms, int maxlen) {
        PathPoly p(q);
        for (int i = 0; i < terms; ++i) {
            int len = pick(maxlen + 1);
            if (len == 0) {
                p.add(trivial_word(pick(q.vertex_count())), small_rat());
            } else if (auto w = word(q, len, false)) {
                p.add(*w, small_rat());
            }
        }
        return p;
    }

    // grade-homogeneous polyvector: necklaces with exactly `grade` partials
    PolyVector polyvector(const Quiver& q, int grade, int terms, int maxlen) {
        PolyVector v(q, grade);
        int added = 0;
        for (int attempt = 0; attempt < 200 && added < terms; ++attempt) {
            int len = grade + pick(std::max(1, maxlen - grade + 1));
            auto w = closed_word(q, std::max(len, grade), true);
            if (!w || word_degree(*w) != grade) continue;
            v.add_word(*w, small_rat());
            ++added;
        }
        return v;
    }
};

inline Quiver one_loop() {
    return Quiver("loop", {"v"}, {{"a", "v", "v"}});
}

inline Quiver gh_base() {
    return Quiver("gh", {"v1", "v2"}, {{"a", "v1", "v1"}, {"x", "v2", "v1"}, {"y", "v1", "v2"}});
}

} // namespace ncpn::testutil
