#include "ncpn/quiver.hpp"
#include "ncpn/rational.hpp"

#include <algorithm>
#include <cctype>

namespace ncpn {

Rational rat_parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    Rational r;
    if (r.set_str(text, 10) != 0)
        throw std::invalid_argument("bad rational literal: " + text);
    r.canonicalize();
    return r;
}

Quiver::Quiver(std::string name_, std::vector<std::string> vertices,
               std::vector<std::tuple<std::string, std::string, std::string>> arrows) {
    name = std::move(name_);
    vertices_ = std::move(vertices);
    for (size_t i = 0; i < vertices_.size(); ++i) {
        if (!vertex_by_name_.emplace(vertices_[i], (int)i).second)
            throw Error("duplicate vertex name: " + vertices_[i]);
    }
    for (auto& [an, tn, hn] : arrows) {
        Arrow a;
        a.name = an;
        auto t = vertex_by_name_.find(tn);
        auto h = vertex_by_name_.find(hn);
        if (t == vertex_by_name_.end()) throw Error("arrow " + an + ": unknown vertex " + tn);
        if (h == vertex_by_name_.end()) throw Error("arrow " + an + ": unknown vertex " + hn);
        a.tail = t->second;
        a.head = h->second;
        arrows_.push_back(std::move(a));
    }
    index();
}

void Quiver::index() {
    arrow_by_name_.clear();
    for (size_t i = 0; i < arrows_.size(); ++i) {
        if (vertex_by_name_.count(arrows_[i].name))
            throw Error("arrow name clashes with vertex: " + arrows_[i].name);
        if (!arrow_by_name_.emplace(arrows_[i].name, (int)i).second)
            throw Error("duplicate arrow name: " + arrows_[i].name);
    }
    // ranks: name order within each class
    auto rank_names = [](std::vector<std::pair<std::string, int>>& v, std::vector<uint32_t>& out) {
        std::sort(v.begin(), v.end());
        for (size_t i = 0; i < v.size(); ++i) out[v[i].second] = (uint32_t)i;
    };
    vertex_rank_.assign(vertices_.size(), 0);
    {
        std::vector<std::pair<std::string, int>> v;
        for (size_t i = 0; i < vertices_.size(); ++i) v.emplace_back(vertices_[i], (int)i);
        rank_names(v, vertex_rank_);
    }
    arrow_rank_.assign(arrows_.size(), 0);
    {
        std::vector<std::pair<std::string, int>> orig, dual;
        for (size_t i = 0; i < arrows_.size(); ++i)
            (arrows_[i].is_dual ? dual : orig).emplace_back(arrows_[i].name, (int)i);
        rank_names(orig, arrow_rank_);
        rank_names(dual, arrow_rank_);
    }
}

int Quiver::vertex_index(const std::string& n) const {
    auto it = vertex_by_name_.find(n);
    if (it == vertex_by_name_.end()) throw Error("unknown vertex: " + n);
    return it->second;
}

std::optional<int> Quiver::find_vertex(const std::string& n) const {
    auto it = vertex_by_name_.find(n);
    if (it == vertex_by_name_.end()) return std::nullopt;
    return it->second;
}

int Quiver::arrow_index(const std::string& n) const {
    auto it = arrow_by_name_.find(n);
    if (it == arrow_by_name_.end()) throw Error("unknown arrow: " + n);
    return it->second;
}

std::optional<int> Quiver::find_arrow(const std::string& n) const {
    auto it = arrow_by_name_.find(n);
    if (it == arrow_by_name_.end()) return std::nullopt;
    return it->second;
}

Sym Quiver::make(SymKind k, int id) const {
    // class codes: vertex 0 < original arrow 1 < dual arrow 2, then the
    // non-path symbol classes in a fixed order.
    uint32_t cls = 0;
    switch (k) {
        case SymKind::Vertex: cls = 0; break;
        case SymKind::Arrow: cls = arrows_[id].is_dual ? 2 : 1; break;
        case SymKind::DForm: cls = arrows_[id].is_dual ? 4 : 3; break;
        case SymKind::Partial: cls = arrows_[id].is_dual ? 6 : 5; break;
        case SymKind::Marker: cls = 7; break;
        case SymKind::Theta: cls = 8; break;
    }
    uint32_t within = (k == SymKind::Vertex) ? vertex_rank_[id] : arrow_rank_[id];
    return Sym{k, id, (cls << 24) | within};
}

int Quiver::sym_tail(const Sym& s) const {
    switch (s.kind) {
        case SymKind::Vertex: return s.id;
        case SymKind::Arrow:
        case SymKind::DForm:
        case SymKind::Theta: return arrows_[s.id].tail;
        case SymKind::Partial:
        case SymKind::Marker: return arrows_[s.id].head;
    }
    return -1;
}

int Quiver::sym_head(const Sym& s) const {
    switch (s.kind) {
        case SymKind::Vertex: return s.id;
        case SymKind::Arrow:
        case SymKind::DForm:
        case SymKind::Theta: return arrows_[s.id].head;
        case SymKind::Partial:
        case SymKind::Marker: return arrows_[s.id].tail;
    }
    return -1;
}

std::string Quiver::sym_str(const Sym& s) const {
    switch (s.kind) {
        case SymKind::Vertex: return vertices_[s.id];
        case SymKind::Arrow: return arrows_[s.id].name;
        case SymKind::Partial: return "@" + arrows_[s.id].name;
        case SymKind::DForm: return "d " + arrows_[s.id].name;
        case SymKind::Marker: return "$" + arrows_[s.id].name;
        case SymKind::Theta: return "#" + arrows_[s.id].name;
    }
    return "?";
}

Quiver double_quiver(const Quiver& q) {
    if (q.doubled()) throw Error("quiver already doubled: " + q.name);
    Quiver d;
    d.name = q.name + "^";
    d.vertices_ = q.vertices_;
    d.vertex_by_name_ = q.vertex_by_name_;
    d.arrows_ = q.arrows_;
    int n = (int)q.arrows_.size();
    for (int i = 0; i < n; ++i) {
        Arrow a;
        a.name = q.arrows_[i].name + "^";
        a.tail = q.arrows_[i].head;
        a.head = q.arrows_[i].tail;
        a.is_dual = true;
        a.dual = i;
        d.arrows_.push_back(a);
        d.arrows_[i].dual = n + i;
    }
    d.doubled_ = true;
    d.base_arrows_ = n;
    d.index();
    return d;
}

bool operator==(const Word& a, const Word& b) {
    if (a.syms.size() != b.syms.size()) return false;
    if (a.trivial()) return a.vertex == b.vertex;
    for (size_t i = 0; i < a.syms.size(); ++i)
        if (a.syms[i].key != b.syms[i].key) return false;
    return true;
}

bool operator<(const Word& a, const Word& b) {
    if (a.syms.size() != b.syms.size()) return a.syms.size() < b.syms.size();
    if (a.trivial()) return a.vertex < b.vertex;
    for (size_t i = 0; i < a.syms.size(); ++i)
        if (a.syms[i].key != b.syms[i].key) return a.syms[i].key < b.syms[i].key;
    return false;
}

std::optional<Word> make_word(const Quiver& q, const std::vector<Sym>& syms) {
    Word w;
    int prev_tail = -1; // tail of the word built so far (acts later than what follows)
    for (const Sym& s : syms) {
        if (s.kind == SymKind::Vertex) {
            if (prev_tail >= 0 && prev_tail != s.id) return std::nullopt;
            prev_tail = s.id;
            if (w.vertex < 0 && w.syms.empty()) w.vertex = s.id;
            continue;
        }
        if (prev_tail >= 0 && prev_tail != q.sym_head(s)) return std::nullopt;
        w.syms.push_back(s);
        prev_tail = q.sym_tail(s);
    }
    if (w.syms.empty()) {
        if (w.vertex < 0) throw Error("empty word without vertex");
    } else {
        w.vertex = -1;
    }
    return w;
}

int word_tail(const Quiver& q, const Word& w) {
    return w.trivial() ? w.vertex : q.sym_tail(w.syms.back());
}

int word_head(const Quiver& q, const Word& w) {
    return w.trivial() ? w.vertex : q.sym_head(w.syms.front());
}

bool word_closed(const Quiver& q, const Word& w) {
    return word_tail(q, w) == word_head(q, w);
}

int word_degree(const Word& w) {
    int d = 0;
    for (const Sym& s : w.syms) d += Quiver::sym_degree(s);
    return d;
}

std::optional<Word> word_concat(const Quiver& q, const Word& p, const Word& r) {
    if (word_tail(q, p) != word_head(q, r)) return std::nullopt;
    if (p.trivial()) return r;
    if (r.trivial()) return p;
    Word w = p;
    w.syms.insert(w.syms.end(), r.syms.begin(), r.syms.end());
    return w;
}

std::string word_str(const Quiver& q, const Word& w) {
    if (w.trivial()) return q.vertex_name(w.vertex);
    std::string s;
    for (size_t i = 0; i < w.syms.size(); ++i) {
        if (i) s += ' ';
        s += q.sym_str(w.syms[i]);
    }
    return s;
}

Word trivial_word(int vertex) {
    Word w;
    w.vertex = vertex;
    return w;
}

Word arrow_word(const Quiver& q, int arrow) {
    Word w;
    w.syms.push_back(q.arrow_sym(arrow));
    return w;
}

} // namespace ncpn
