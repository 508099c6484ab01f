#include "ncpn/path_poly.hpp"

namespace ncpn {

void PathPoly::add(const Word& w, const Rational& c) {
    if (ncpn::is_zero(c)) return;
    auto [it, fresh] = terms_.emplace(w, c);
    if (!fresh) {
        it->second += c;
        if (ncpn::is_zero(it->second)) terms_.erase(it);
    }
}

void PathPoly::check_mixed(const PathPoly& o) const {
    if (q_ && o.q_ && q_ != o.q_) throw Error("operands belong to different quivers");
}

PathPoly& PathPoly::operator+=(const PathPoly& o) {
    check_mixed(o);
    if (!q_) q_ = o.q_;
    for (auto& [w, c] : o.terms_) add(w, c);
    return *this;
}

PathPoly& PathPoly::operator-=(const PathPoly& o) {
    check_mixed(o);
    if (!q_) q_ = o.q_;
    for (auto& [w, c] : o.terms_) add(w, -c);
    return *this;
}

PathPoly PathPoly::operator+(const PathPoly& o) const {
    PathPoly r = *this;
    r += o;
    return r;
}

PathPoly PathPoly::operator-(const PathPoly& o) const {
    PathPoly r = *this;
    r -= o;
    return r;
}

PathPoly PathPoly::operator-() const {
    PathPoly r = *this;
    for (auto& [w, c] : r.terms_) c = -c;
    return r;
}

PathPoly PathPoly::scaled(const Rational& c) const {
    PathPoly r = *this;
    if (ncpn::is_zero(c)) {
        r.terms_.clear();
        return r;
    }
    for (auto& [w, k] : r.terms_) k *= c;
    return r;
}

PathPoly PathPoly::operator*(const PathPoly& o) const {
    check_mixed(o);
    const Quiver* q = q_ ? q_ : o.q_;
    PathPoly r;
    if (q) r = PathPoly(*q);
    for (auto& [wa, ca] : terms_)
        for (auto& [wb, cb] : o.terms_)
            if (auto w = word_concat(*q, wa, wb)) r.add(*w, ca * cb);
    return r;
}

bool PathPoly::operator==(const PathPoly& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    auto it = terms_.begin();
    auto jt = o.terms_.begin();
    for (; it != terms_.end(); ++it, ++jt)
        if (!(it->first == jt->first) || it->second != jt->second) return false;
    return true;
}

std::string PathPoly::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto& [w, c] : terms_) {
        Rational a = abs(c);
        if (first) {
            if (sgn(c) < 0) s += "- ";
            first = false;
        } else {
            s += sgn(c) < 0 ? " - " : " + ";
        }
        if (a != 1) s += rat_str(a) + " ";
        s += word_str(*q_, w);
    }
    return s;
}

PathPoly path_zero(const Quiver& q) { return PathPoly(q); }

PathPoly path_one(const Quiver& q) {
    PathPoly p(q);
    for (int v = 0; v < q.vertex_count(); ++v) p.add(trivial_word(v), 1);
    return p;
}

PathPoly path_of(const Quiver& q, const Word& w) { return PathPoly(q, w); }

PathPoly idempotent(const Quiver& q, int vertex) { return PathPoly(q, trivial_word(vertex)); }

PathPoly concat(const Quiver& q, const Word& p, const Word& r) {
    PathPoly out(q);
    if (auto w = word_concat(q, p, r)) out.add(*w, 1);
    return out;
}

Word power_word(const Quiver& q, int arrow, int k) {
    if (k == 0) return trivial_word(q.arrow(arrow).tail);
    Word w;
    for (int i = 0; i < k; ++i) w.syms.push_back(q.arrow_sym(arrow));
    if (q.arrow(arrow).tail != q.arrow(arrow).head && k > 1)
        throw Error("power of a non-loop arrow");
    return w;
}

} // namespace ncpn
