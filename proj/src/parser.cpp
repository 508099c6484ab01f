#include "ncpn/parser.hpp"

#include <cctype>

namespace ncpn {

namespace {

struct Token {
    enum Kind { Name, Number, Punct, End } kind;
    std::string text;
    int line, col;
};

struct Lexer {
    const std::string& src;
    size_t pos = 0;
    int line = 1, col = 1;

    explicit Lexer(const std::string& s) : src(s) {}

    void advance(size_t n) {
        for (size_t i = 0; i < n && pos < src.size(); ++i, ++pos) {
            if (src[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    }

    Token next() {
        while (pos < src.size() && (std::isspace((unsigned char)src[pos]) || src[pos] == '#')) {
            if (src[pos] == '#') {
                while (pos < src.size() && src[pos] != '\n') advance(1);
            } else {
                advance(1);
            }
        }
        if (pos >= src.size()) return {Token::End, "", line, col};
        int l = line, c = col;
        char ch = src[pos];
        if (std::isdigit((unsigned char)ch)) {
            size_t start = pos;
            while (pos < src.size() && std::isdigit((unsigned char)src[pos])) advance(1);
            if (pos < src.size() && src[pos] == '/' && pos + 1 < src.size() &&
                std::isdigit((unsigned char)src[pos + 1])) {
                advance(1);
                while (pos < src.size() && std::isdigit((unsigned char)src[pos])) advance(1);
            }
            return {Token::Number, src.substr(start, pos - start), l, c};
        }
        if (std::isalpha((unsigned char)ch) || ch == '_') {
            size_t start = pos;
            while (pos < src.size() &&
                   (std::isalnum((unsigned char)src[pos]) || src[pos] == '_'))
                advance(1);
            std::string name = src.substr(start, pos - start);
            if (pos < src.size() && src[pos] == '^') {
                advance(1);
                name += '^';
            }
            return {Token::Name, name, l, c};
        }
        if (src.compare(pos, 2, "->") == 0) {
            advance(2);
            return {Token::Punct, "->", l, c};
        }
        advance(1);
        return {Token::Punct, std::string(1, ch), l, c};
    }
};

// Values during evaluation: raw words in the doubled alphabet (possibly with
// @-symbols) or homogeneous forms. Mixing @ and d is rejected.
struct EvalValue {
    bool is_form = false;
    PathPoly words; // valid when !is_form
    FormWord form;  // valid when is_form

    bool zero() const { return is_form ? form.zero() : words.zero(); }
};

struct Parser {
    Lexer lex;
    Token tok;
    const Quiver& q;
    std::vector<std::string>& warnings;

    Parser(const std::string& src, const Quiver& q_, std::vector<std::string>& warn)
        : lex(src), q(q_), warnings(warn) {
        tok = lex.next();
    }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, tok.line, tok.col); }

    void eat() { tok = lex.next(); }

    bool punct(const char* p) const { return tok.kind == Token::Punct && tok.text == p; }

    EvalValue to_form(const EvalValue& v) {
        if (v.is_form) return v;
        for (auto& [w, c] : v.words.terms())
            for (const Sym& s : w.syms)
                if (s.kind == SymKind::Partial) fail("cannot mix @-symbols with differentials");
        EvalValue out;
        out.is_form = true;
        out.form = form_of_poly(q, v.words);
        return out;
    }

    EvalValue mul(const EvalValue& a, const EvalValue& b, int line, int col) {
        EvalValue out;
        bool was_nonzero = !a.zero() && !b.zero();
        if (a.is_form || b.is_form) {
            EvalValue fa = to_form(a), fb = to_form(b);
            out.is_form = true;
            out.form = form_product(fa.form, fb.form);
        } else {
            out.words = a.words * b.words;
        }
        if (was_nonzero && out.zero())
            warnings.push_back("incomposable product is zero at " + std::to_string(line) + ":" +
                               std::to_string(col));
        return out;
    }

    EvalValue add(const EvalValue& a, const EvalValue& b) {
        if (a.zero()) return b;
        if (b.zero()) return a;
        EvalValue out;
        if (a.is_form || b.is_form) {
            if (!a.is_form || !b.is_form) fail("cannot add a form and a non-form");
            if (a.form.degree() != b.form.degree()) fail("cannot add forms of different degrees");
            out.is_form = true;
            out.form = a.form + b.form;
        } else {
            out.words = a.words + b.words;
        }
        return out;
    }

    EvalValue scale(const EvalValue& a, const Rational& c) {
        EvalValue out = a;
        if (out.is_form) out.form = out.form.scaled(c);
        else out.words = out.words.scaled(c);
        return out;
    }

    EvalValue unit_value() {
        EvalValue v;
        v.words = path_one(q);
        return v;
    }

    EvalValue atom_value(const std::string& name) {
        if (auto a = q.find_arrow(name)) {
            EvalValue v;
            v.words = path_of(q, arrow_word(q, *a));
            return v;
        }
        if (auto ver = q.find_vertex(name)) {
            EvalValue v;
            v.words = idempotent(q, *ver);
            return v;
        }
        fail("unknown arrow or vertex: " + name);
    }

    EvalValue parse_factor() {
        if (punct("(")) {
            eat();
            EvalValue v = parse_expr();
            if (!punct(")")) fail("expected ')'");
            eat();
            return v;
        }
        if (punct("[")) {
            eat();
            int l = tok.line, c = tok.col;
            EvalValue x = parse_expr();
            if (!punct(",")) fail("expected ',' in commutator");
            eat();
            EvalValue y = parse_expr();
            if (!punct("]")) fail("expected ']'");
            eat();
            EvalValue xy = mul(x, y, l, c);
            EvalValue yx = mul(y, x, l, c);
            return add(xy, scale(yx, -1));
        }
        if (punct("@")) {
            eat();
            if (tok.kind != Token::Name) fail("expected an arrow name after '@'");
            auto a = q.find_arrow(tok.text);
            if (!a) fail("unknown arrow: " + tok.text);
            eat();
            EvalValue v;
            Word w;
            w.syms.push_back(q.partial_sym(*a));
            v.words = path_of(q, w);
            return v;
        }
        if (tok.kind == Token::Name && tok.text == "d") {
            eat();
            if (punct("(")) {
                eat();
                EvalValue inner = parse_expr();
                if (!punct(")")) fail("expected ')'");
                eat();
                EvalValue f = to_form(inner);
                EvalValue out;
                out.is_form = true;
                out.form = differential(f.form);
                return out;
            }
            if (tok.kind != Token::Name) fail("expected an arrow after 'd'");
            auto a = q.find_arrow(tok.text);
            if (!a) {
                if (q.find_vertex(tok.text)) { // d of an idempotent is zero
                    eat();
                    EvalValue out;
                    out.is_form = true;
                    out.form = FormWord(q, 1);
                    return out;
                }
                fail("unknown arrow: " + tok.text);
            }
            eat();
            EvalValue out;
            out.is_form = true;
            out.form = form_d_arrow(q, *a);
            return out;
        }
        if (tok.kind == Token::Name) {
            std::string name = tok.text;
            eat();
            return atom_value(name);
        }
        fail("expected a factor");
    }

    bool starts_factor() const {
        return tok.kind == Token::Name || punct("(") || punct("[") || punct("@");
    }

    EvalValue parse_term() {
        Rational coeff = 1;
        bool have_coeff = false;
        if (tok.kind == Token::Number) {
            coeff = rat_parse(tok.text);
            have_coeff = true;
            eat();
        }
        if (!starts_factor()) {
            if (!have_coeff) fail("expected a term");
            return scale(unit_value(), coeff); // bare rational: multiple of Σ e_i
        }
        int l = tok.line, c = tok.col;
        EvalValue v = parse_factor();
        while (starts_factor() || tok.kind == Token::Number) {
            if (tok.kind == Token::Number) fail("rational literal in the middle of a product");
            EvalValue f = parse_factor();
            v = mul(v, f, l, c);
        }
        return scale(v, coeff);
    }

    EvalValue parse_expr() {
        int sign = 1;
        if (punct("-")) {
            sign = -1;
            eat();
        } else if (punct("+")) {
            eat();
        }
        EvalValue v = scale(parse_term(), sign);
        while (punct("+") || punct("-")) {
            int s = punct("-") ? -1 : 1;
            eat();
            v = add(v, scale(parse_term(), s));
        }
        return v;
    }
};

} // namespace

ParseResult parse_expression(const std::string& src, const Quiver& q) {
    ParseResult res;
    Parser p(src, q, res.warnings);
    EvalValue v = p.parse_expr();
    if (!(p.tok.kind == Token::End)) p.fail("unexpected trailing input");
    if (v.is_form) {
        res.value = dr_normalize(v.form);
        return res;
    }
    bool has_partial = false;
    for (auto& [w, c] : v.words.terms())
        for (const Sym& s : w.syms)
            if (s.kind == SymKind::Partial) has_partial = true;
    if (has_partial) {
        res.value = necklace_normalize(q, v.words);
    } else {
        res.value = v.words;
    }
    return res;
}

Quiver parse_quiver_file(const std::string& text) {
    Lexer lex(text);
    Token tok = lex.next();
    auto expect_name = [&](const char* what) {
        if (tok.kind != Token::Name) throw ParseError(std::string("expected ") + what, tok.line, tok.col);
        std::string n = tok.text;
        tok = lex.next();
        return n;
    };
    auto expect_punct = [&](const char* p) {
        if (!(tok.kind == Token::Punct && tok.text == p))
            throw ParseError(std::string("expected '") + p + "'", tok.line, tok.col);
        tok = lex.next();
    };
    if (tok.kind != Token::Name || tok.text != "quiver")
        throw ParseError("expected 'quiver'", tok.line, tok.col);
    tok = lex.next();
    std::string name = expect_name("quiver name");
    expect_punct("{");
    std::vector<std::string> vertices;
    std::vector<std::tuple<std::string, std::string, std::string>> arrows;
    while (!(tok.kind == Token::Punct && tok.text == "}")) {
        std::string kw = expect_name("'vertex' or 'arrow'");
        if (kw == "vertex") {
            vertices.push_back(expect_name("vertex name"));
            expect_punct(";");
        } else if (kw == "arrow") {
            std::string an = expect_name("arrow name");
            expect_punct(":");
            std::string tn = expect_name("tail vertex");
            expect_punct("->");
            std::string hn = expect_name("head vertex");
            expect_punct(";");
            arrows.emplace_back(an, tn, hn);
        } else {
            throw ParseError("expected 'vertex' or 'arrow', got '" + kw + "'", tok.line, tok.col);
        }
    }
    return Quiver(name, std::move(vertices), std::move(arrows));
}

std::string print_value(const ParsedValue& v, const Quiver& q) {
    if (std::holds_alternative<PathPoly>(v)) return std::get<PathPoly>(v).str();
    if (std::holds_alternative<PolyVector>(v)) return std::get<PolyVector>(v).str();
    const DRForm& f = std::get<DRForm>(v);
    if (f.zero()) return "0";
    // print as a sum of extended words: "coeff sym sym d sym ..."
    PathPoly p(q);
    for (auto& [w, c] : f.terms()) p.add(w, c);
    return p.str();
}

} // namespace ncpn
