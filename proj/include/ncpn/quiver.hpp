#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace ncpn {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Symbols occurring in words over a fixed quiver.
//
//   Vertex   e_i           trivial path / idempotent
//   Arrow    a             an arrow of the quiver (original or dual)
//   Partial  @a            the polyvector generator dual to a (travels like a*)
//   DForm    d a           a differential slot in an extended de Rham word
//   Marker   one-form coefficient placeholder, travels like a* (map reconstruction)
//   Theta    derivation image placeholder, travels like a (endomorphism extraction)
//
// Markers never appear in user-visible values; they are scaffolding for
// map_to_bivector and complete_lift.
enum class SymKind : uint8_t { Vertex, Arrow, Partial, DForm, Marker, Theta };

struct Sym {
    SymKind kind;
    int32_t id;    // vertex index or arrow index
    uint32_t key;  // total-order key assigned by the owning quiver

    friend bool operator==(const Sym& a, const Sym& b) { return a.key == b.key; }
    friend bool operator!=(const Sym& a, const Sym& b) { return a.key != b.key; }
    friend bool operator<(const Sym& a, const Sym& b) { return a.key < b.key; }
};

struct Arrow {
    std::string name;
    int tail = -1;
    int head = -1;
    int dual = -1;        // index of the paired arrow in a doubled quiver, -1 otherwise
    bool is_dual = false; // true for the a* half of a doubled quiver
};

// A finite quiver. Vertex and arrow names are unique; a doubled quiver
// stores the originals first and one reversed dual per original after them.
//
// The canonical monomial order compares symbols by class
// (vertices < original arrows < dual arrows < ...) and by name bytes within
// a class; the per-symbol keys are precomputed here.
class Quiver {
public:
    std::string name;

    Quiver() = default;
    Quiver(std::string name, std::vector<std::string> vertices,
           std::vector<std::tuple<std::string, std::string, std::string>> arrows);

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int arrow_count() const { return static_cast<int>(arrows_.size()); }
    const std::string& vertex_name(int v) const { return vertices_[v]; }
    const Arrow& arrow(int a) const { return arrows_[a]; }

    int vertex_index(const std::string& n) const;
    int arrow_index(const std::string& n) const; // accepts "a" and "a^"
    std::optional<int> find_vertex(const std::string& n) const;
    std::optional<int> find_arrow(const std::string& n) const;

    bool doubled() const { return doubled_; }
    int base_arrow_count() const { return base_arrows_; }
    int dual_of(int a) const { return arrows_[a].dual; }

    Sym vertex_sym(int v) const { return make(SymKind::Vertex, v); }
    Sym arrow_sym(int a) const { return make(SymKind::Arrow, a); }
    Sym partial_sym(int a) const { return make(SymKind::Partial, a); }
    Sym dform_sym(int a) const { return make(SymKind::DForm, a); }
    Sym marker_sym(int a) const { return make(SymKind::Marker, a); }
    Sym theta_sym(int a) const { return make(SymKind::Theta, a); }

    // tail = start vertex, head = end vertex; words compose right-to-left
    // (the rightmost symbol acts first), so in a word "b a" the junction
    // condition is tail(b) == head(a).
    int sym_tail(const Sym& s) const;
    int sym_head(const Sym& s) const;
    static int sym_degree(const Sym& s) {
        return (s.kind == SymKind::Partial || s.kind == SymKind::DForm) ? 1 : 0;
    }

    std::string sym_str(const Sym& s) const;

private:
    std::vector<std::string> vertices_;
    std::vector<Arrow> arrows_;
    std::unordered_map<std::string, int> vertex_by_name_;
    std::unordered_map<std::string, int> arrow_by_name_;
    std::vector<uint32_t> vertex_rank_;
    std::vector<uint32_t> arrow_rank_; // rank within (original|dual) class
    bool doubled_ = false;
    int base_arrows_ = 0;

    Sym make(SymKind k, int id) const;
    void index();

    friend Quiver double_quiver(const Quiver&);
};

// Attaches one reversed dual arrow per original; dual names carry a '^' suffix.
Quiver double_quiver(const Quiver& q);

// A word over the symbol alphabet. Trivial words record the vertex they sit
// at; nonempty words never contain Vertex symbols (idempotents are absorbed
// at construction).
struct Word {
    int vertex = -1;
    std::vector<Sym> syms;

    bool trivial() const { return syms.empty(); }
    size_t size() const { return syms.size(); }
};

bool operator==(const Word& a, const Word& b);
bool operator<(const Word& a, const Word& b); // length, then lex on symbol keys

// Builds a word from raw symbols, absorbing idempotents and checking
// junctions; nullopt means the word is zero (incomposable).
std::optional<Word> make_word(const Quiver& q, const std::vector<Sym>& syms);

int word_tail(const Quiver& q, const Word& w);
int word_head(const Quiver& q, const Word& w);
bool word_closed(const Quiver& q, const Word& w);
int word_degree(const Word& w); // number of degree-1 symbols

// Concatenation p . q (q acts first); nullopt if the junction fails.
std::optional<Word> word_concat(const Quiver& q, const Word& p, const Word& r);

std::string word_str(const Quiver& q, const Word& w);

Word trivial_word(int vertex);
Word arrow_word(const Quiver& q, int arrow);

} // namespace ncpn
