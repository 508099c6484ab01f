#include "ncpn/forms.hpp"

namespace ncpn {

// ---------------------------------------------------------------- Derivation

void Derivation::set(int arrow, const PathPoly& value) {
    if (value.zero()) img_.erase(arrow);
    else img_[arrow] = value;
}

void Derivation::accumulate(int arrow, const PathPoly& value) {
    if (value.zero()) return;
    auto it = img_.find(arrow);
    if (it == img_.end()) img_.emplace(arrow, value);
    else {
        it->second += value;
        if (it->second.zero()) img_.erase(it);
    }
}

PathPoly Derivation::of(int arrow) const {
    auto it = img_.find(arrow);
    return it == img_.end() ? PathPoly(*q_) : it->second;
}

PathPoly Derivation::apply(const Word& w) const {
    PathPoly out(*q_);
    if (w.trivial()) return out;
    for (size_t i = 0; i < w.syms.size(); ++i) {
        const Sym& s = w.syms[i];
        if (s.kind != SymKind::Arrow) continue; // markers and idempotents die
        auto it = img_.find(s.id);
        if (it == img_.end()) continue;
        Word prefix, suffix;
        prefix.syms.assign(w.syms.begin(), w.syms.begin() + i);
        suffix.syms.assign(w.syms.begin() + i + 1, w.syms.end());
        if (prefix.syms.empty()) prefix.vertex = q_->sym_head(s);
        if (suffix.syms.empty()) suffix.vertex = q_->sym_tail(s);
        out += path_of(*q_, prefix) * it->second * path_of(*q_, suffix);
    }
    return out;
}

PathPoly Derivation::apply(const PathPoly& p) const {
    PathPoly out(*q_);
    for (auto& [w, c] : p.terms()) out += apply(w).scaled(c);
    return out;
}

Derivation Derivation::operator+(const Derivation& o) const {
    Derivation r = *this;
    for (auto& [a, v] : o.img_) r.accumulate(a, v);
    return r;
}

Derivation Derivation::operator-(const Derivation& o) const {
    Derivation r = *this;
    for (auto& [a, v] : o.img_) r.accumulate(a, v.scaled(-1));
    return r;
}

Derivation Derivation::scaled(const Rational& c) const {
    Derivation r(*q_);
    if (ncpn::is_zero(c)) return r;
    for (auto& [a, v] : img_) r.img_.emplace(a, v.scaled(c));
    return r;
}

bool Derivation::operator==(const Derivation& o) const {
    if (img_.size() != o.img_.size()) return false;
    auto it = img_.begin();
    auto jt = o.img_.begin();
    for (; it != img_.end(); ++it, ++jt)
        if (it->first != jt->first || !(it->second == jt->second)) return false;
    return true;
}

PolyVector Derivation::to_polyvector() const {
    PolyVector out(*q_, 1);
    for (auto& [a, v] : img_) {
        Sym ps = q_->partial_sym(a);
        for (auto& [w, c] : v.terms()) {
            std::vector<Sym> syms = w.syms;
            syms.push_back(ps);
            if (auto nw = make_word(*q_, syms)) out.add_word(*nw, c);
        }
    }
    return out;
}

std::string Derivation::str() const {
    if (img_.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto& [a, v] : img_) {
        if (!first) s += "  ";
        first = false;
        s += "(" + v.str() + ") @" + q_->arrow(a).name;
    }
    return s;
}

Derivation partial_derivation(const Quiver& q, int arrow) {
    Derivation th(q);
    th.set(arrow, idempotent(q, q.arrow(arrow).head));
    return th;
}

Derivation derivation_from_polyvector(const PolyVector& v) {
    if (v.grade() != 1) throw Error("derivation_from_polyvector expects grade 1");
    const Quiver& q = v.quiver();
    Derivation th(q);
    for (auto& [w, c] : v.terms()) {
        // rotate the single ∂ symbol to the back (rotations are free in grade 1)
        size_t pos = 0;
        while (pos < w.syms.size() && w.syms[pos].kind != SymKind::Partial) ++pos;
        Word coeff;
        coeff.syms.insert(coeff.syms.end(), w.syms.begin() + pos + 1, w.syms.end());
        coeff.syms.insert(coeff.syms.end(), w.syms.begin(), w.syms.begin() + pos);
        int arrow = w.syms[pos].id;
        if (coeff.syms.empty()) coeff.vertex = q.arrow(arrow).head;
        th.accumulate(arrow, PathPoly(q, coeff, c));
    }
    return th;
}

// ------------------------------------------------------------------ FormWord

namespace {

bool tensor_valid(const Quiver& q, const FormWord::Tensor& t) {
    for (size_t i = 1; i < t.size(); ++i) {
        if (t[i].trivial()) return false; // d-slot entries live in A/B
        if (word_tail(q, t[i - 1]) != word_head(q, t[i])) return false;
    }
    return true;
}

} // namespace

void FormWord::add(const Tensor& t, const Rational& c) {
    if (ncpn::is_zero(c)) return;
    if ((int)t.size() != degree_ + 1) throw Error("tensor degree mismatch");
    if (!tensor_valid(*q_, t)) return;
    auto [it, fresh] = terms_.emplace(t, c);
    if (!fresh) {
        it->second += c;
        if (ncpn::is_zero(it->second)) terms_.erase(it);
    }
}

FormWord FormWord::operator+(const FormWord& o) const {
    FormWord r = *this;
    r += o;
    return r;
}

FormWord& FormWord::operator+=(const FormWord& o) {
    if (o.zero()) return *this;
    if (!q_ || terms_.empty()) {
        // the zero form carries no degree of its own
        q_ = o.q_;
        degree_ = o.degree_;
    }
    if (degree_ != o.degree_) throw Error("form degree mismatch");
    for (auto& [t, c] : o.terms_) add(t, c);
    return *this;
}

FormWord FormWord::operator-(const FormWord& o) const {
    FormWord r = *this;
    r += o.scaled(-1);
    return r;
}

FormWord FormWord::scaled(const Rational& c) const {
    FormWord r(*q_, degree_);
    if (ncpn::is_zero(c)) return r;
    for (auto& [t, k] : terms_) r.terms_.emplace(t, k * c);
    return r;
}

bool FormWord::operator==(const FormWord& o) const {
    return degree_ == o.degree_ && terms_ == o.terms_;
}

std::string FormWord::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto& [t, c] : terms_) {
        Rational a = abs(c);
        if (first) {
            if (sgn(c) < 0) s += "- ";
            first = false;
        } else {
            s += sgn(c) < 0 ? " - " : " + ";
        }
        if (a != 1) s += rat_str(a) + " ";
        s += "[" + word_str(*q_, t[0]);
        for (size_t i = 1; i < t.size(); ++i) s += " | " + word_str(*q_, t[i]);
        s += "]";
    }
    return s;
}

FormWord form_zero(const Quiver& q, int degree) { return FormWord(q, degree); }

FormWord form_of_poly(const Quiver& q, const PathPoly& p) {
    FormWord f(q, 0);
    for (auto& [w, c] : p.terms()) f.add({w}, c);
    return f;
}

FormWord form_d_arrow(const Quiver& q, int arrow) {
    FormWord f(q, 1);
    f.add({trivial_word(q.arrow(arrow).head), arrow_word(q, arrow)}, 1);
    return f;
}

FormWord form_product(const FormWord& u, const FormWord& v) {
    const Quiver& q = u.quiver();
    if (&q != &v.quiver()) throw Error("operands belong to different quivers");
    const int r = u.degree();
    FormWord out(q, u.degree() + v.degree());
    for (auto& [tu, cu] : u.terms()) {
        for (auto& [tv, cv] : v.terms()) {
            // the unmerged junction between the blocks must compose
            if (word_tail(q, tu.back()) != word_head(q, tv.front())) continue;
            Rational c = cu * cv;
            for (int i = 0; i <= r; ++i) {
                auto merged = word_concat(q, tu[i], i + 1 <= r ? tu[i + 1] : tv[0]);
                if (!merged) continue; // only possible at i == r
                FormWord::Tensor t;
                t.reserve(tu.size() + tv.size() - 1);
                t.insert(t.end(), tu.begin(), tu.begin() + i);
                t.push_back(*merged);
                if (i + 1 <= r) {
                    t.insert(t.end(), tu.begin() + i + 2, tu.end());
                    t.insert(t.end(), tv.begin(), tv.end());
                } else {
                    t.insert(t.end(), tv.begin() + 1, tv.end());
                }
                int sign = ((r - i) % 2 != 0) ? -1 : 1;
                out.add(t, c * sign);
            }
        }
    }
    return out;
}

FormWord differential(const FormWord& u) {
    const Quiver& q = u.quiver();
    FormWord out(q, u.degree() + 1);
    for (auto& [t, c] : u.terms()) {
        if (t[0].trivial()) continue; // slot-1 entry would be idempotent, zero in A/B
        FormWord::Tensor nt;
        nt.reserve(t.size() + 1);
        nt.push_back(trivial_word(word_head(q, t[0])));
        nt.insert(nt.end(), t.begin(), t.end());
        out.add(nt, c);
    }
    return out;
}

FormWord contract(const Derivation& th, const FormWord& u) {
    const Quiver& q = u.quiver();
    const int r = u.degree();
    FormWord out(q, r > 0 ? r - 1 : 0);
    if (r == 0) return out;
    for (auto& [t, c] : u.terms()) {
        for (int j = 1; j <= r; ++j) {
            PathPoly img = th.apply(path_of(q, t[j]));
            if (img.zero()) continue;
            // left part [p0 ⊗ .. ⊗ p_{j-1}], right part [e ⊗ p_{j+1} ⊗ ..]
            FormWord left(q, j - 1);
            left.add(FormWord::Tensor(t.begin(), t.begin() + j), 1);
            FormWord mid = form_of_poly(q, img);
            FormWord rest(q, r - j);
            if (j < r) {
                FormWord::Tensor rt;
                rt.push_back(trivial_word(word_head(q, t[j + 1])));
                rt.insert(rt.end(), t.begin() + j + 1, t.end());
                rest.add(rt, 1);
                mid = form_product(mid, rest);
            }
            int sign = ((j - 1) % 2 != 0) ? -1 : 1;
            out += form_product(left, mid).scaled(c * sign);
        }
    }
    return out;
}

FormWord lie_derivative(const Derivation& th, const FormWord& u) {
    return differential(contract(th, u)) + contract(th, differential(u));
}

PathPoly form_to_poly(const FormWord& u) {
    if (u.degree() != 0) throw Error("form_to_poly expects degree 0");
    PathPoly p(u.quiver());
    for (auto& [t, c] : u.terms()) p.add(t[0], c);
    return p;
}

// -------------------------------------------------------------------- DRForm

void DRForm::add_extended_word(const Word& w, const Rational& c) {
    if (ncpn::is_zero(c)) return;
    if (word_degree(w) != degree_) throw Error("word degree mismatch in DRForm");
    auto canon = cyclic_canonical(*q_, w);
    if (!canon) return;
    auto [cw, sign] = *canon;
    if (degree_ == 1 && !cw.trivial()) {
        // rotate the single d-symbol to the back: canonical Σ r_a d a shape
        size_t pos = 0;
        while (pos < cw.syms.size() && cw.syms[pos].kind != SymKind::DForm) ++pos;
        std::rotate(cw.syms.begin(), cw.syms.begin() + pos + 1, cw.syms.end());
    }
    auto [it, fresh] = terms_.emplace(cw, sign * c);
    if (!fresh) {
        it->second += sign * c;
        if (ncpn::is_zero(it->second)) terms_.erase(it);
    }
}

DRForm DRForm::operator+(const DRForm& o) const {
    DRForm r = *this;
    if (o.zero()) return r;
    if (!r.q_ || r.terms_.empty()) return o;
    if (r.degree_ != o.degree_) throw Error("DR degree mismatch");
    for (auto& [w, c] : o.terms_) {
        auto [it, fresh] = r.terms_.emplace(w, c);
        if (!fresh) {
            it->second += c;
            if (ncpn::is_zero(it->second)) r.terms_.erase(it);
        }
    }
    return r;
}

DRForm DRForm::operator-(const DRForm& o) const { return *this + o.scaled(-1); }

DRForm DRForm::scaled(const Rational& c) const {
    DRForm r(*q_, degree_);
    if (ncpn::is_zero(c)) return r;
    for (auto& [w, k] : terms_) r.terms_.emplace(w, k * c);
    return r;
}

bool DRForm::operator==(const DRForm& o) const {
    return degree_ == o.degree_ && terms_ == o.terms_;
}

std::map<int, PathPoly> DRForm::one_form_coefficients() const {
    if (degree_ != 1) throw Error("one_form_coefficients expects degree 1");
    std::map<int, PathPoly> out;
    for (auto& [w, c] : terms_) {
        const Sym& last = w.syms.back();
        Word coeff;
        coeff.syms.assign(w.syms.begin(), w.syms.end() - 1);
        if (coeff.syms.empty()) coeff.vertex = q_->sym_head(last);
        auto [it, fresh] = out.emplace(last.id, PathPoly(*q_, coeff, c));
        if (!fresh) it->second.add(coeff, c);
    }
    return out;
}

FormWord DRForm::lift() const {
    if (degree_ == 0) {
        PathPoly p(*q_);
        for (auto& [w, c] : terms_) p.add(w, c);
        return form_of_poly(*q_, p);
    }
    if (degree_ != 1) throw Error("lift implemented for degrees 0 and 1");
    FormWord f(*q_, 1);
    for (auto& [arrow, r] : one_form_coefficients())
        f += form_product(form_of_poly(*q_, r), form_d_arrow(*q_, arrow));
    return f;
}

std::string DRForm::str() const {
    PathPoly p(*q_);
    for (auto& [w, c] : terms_) p.add(w, c);
    return p.str();
}

DRForm dr_normalize(const FormWord& u) {
    const Quiver& q = u.quiver();
    DRForm out(q, u.degree());
    // Words where the Leibniz expansion put a d on a marker symbol are kept
    // aside: for well-formed input they cancel in total (guard used by
    // complete_lift extraction).
    PathPoly marker_d(q);
    for (auto& [t, c] : u.terms()) {
        const size_t nslots = t.size() - 1;
        if (nslots == 0) {
            out.add_extended_word(t[0], c);
            continue;
        }
        // odometer over the d position chosen in each slot
        std::vector<size_t> pick(nslots, 0);
        while (true) {
            std::vector<Sym> syms(t[0].syms.begin(), t[0].syms.end());
            bool dmark = false;
            for (size_t s = 0; s < nslots; ++s) {
                const auto& ws = t[s + 1].syms;
                for (size_t k = 0; k < ws.size(); ++k) {
                    if (k == pick[s] && ws[k].kind == SymKind::Arrow) {
                        syms.push_back(q.dform_sym(ws[k].id));
                    } else {
                        if (k == pick[s]) dmark = true;
                        syms.push_back(ws[k]);
                    }
                }
            }
            if (auto w = make_word(q, syms)) {
                if (dmark) marker_d.add(*w, c);
                else out.add_extended_word(*w, c);
            }
            size_t s = nslots;
            while (s > 0 && ++pick[s - 1] == t[s].syms.size()) pick[--s] = 0;
            if (s == 0) break;
        }
    }
    if (!marker_d.zero())
        throw Error("normalization produced d-terms on marker symbols");
    return out;
}

DRForm one_form(const Quiver& q, const std::map<int, PathPoly>& coeffs) {
    DRForm out(q, 1);
    for (auto& [arrow, r] : coeffs) {
        Sym ds = q.dform_sym(arrow);
        for (auto& [w, c] : r.terms()) {
            std::vector<Sym> syms = w.syms;
            syms.push_back(ds);
            if (auto nw = make_word(q, syms)) out.add_extended_word(*nw, c);
        }
    }
    return out;
}

DRForm d_of_function(const PolyVector& f) {
    if (f.grade() != 0) throw Error("d_of_function expects a grade-0 class");
    const Quiver& q = f.quiver();
    std::map<int, PathPoly> coeffs;
    for (int a = 0; a < q.arrow_count(); ++a) {
        PathPoly da = necklace_derivative(f, a);
        if (!da.zero()) coeffs.emplace(a, da);
    }
    return one_form(q, coeffs);
}

PolyVector pair_form(const DRForm& alpha, const Derivation& th) {
    const Quiver& q = alpha.quiver();
    PolyVector out(q, 0);
    for (auto& [arrow, r] : alpha.one_form_coefficients()) {
        PathPoly prod = r * th.of(arrow);
        for (auto& [w, c] : prod.terms()) out.add_word(w, c);
    }
    return out;
}

PolyVector dr0_of(const DRForm& f) {
    if (f.degree() != 0) throw Error("dr0_of expects degree 0");
    const Quiver& q = f.quiver();
    PolyVector out(q, 0);
    for (auto& [w, c] : f.terms()) out.add_word(w, c);
    return out;
}

} // namespace ncpn
