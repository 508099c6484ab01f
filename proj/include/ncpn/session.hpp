#pragma once

#include "ncpn/builtins.hpp"
#include "ncpn/parser.hpp"
#include "ncpn/repr.hpp"

#include <variant>

namespace ncpn {

using NamedValue = std::variant<PathPoly, PolyVector, DRForm, Bivector, RegularEndo>;

// Resolves registry names: cm.pi0, cm.pi1, cm.N, cm.N_alt, cm.I3, cm.J2,
// cm.H2, cm.K1, gh.pi0, gh.pi1, gh.N, gh.I2, gh.I2_3, gh.J2_1, ...
std::optional<NamedValue> builtin_value(const std::string& name);
const Quiver* builtin_quiver(const std::string& prefix); // "cm" or "gh"

// A batch session: one active quiver, named values, configuration.
class Session {
public:
    int bound = 3;
    int depth = 4;
    uint64_t seed = 12345;
    std::string format = "text"; // or "json"

    void use_quiver(const Quiver* q) { quiver_ = q; }
    void use_quiver_file(const std::string& text, bool doubled);
    const Quiver& quiver() const;
    bool has_quiver() const { return quiver_ != nullptr; }

    void define(const std::string& name, NamedValue v);
    // looks up a definition or a builtin; infers the quiver from cm./gh.
    // prefixes when none is active
    NamedValue resolve(const std::string& name);
    // parses an expression against the active quiver
    ParseResult parse(const std::string& src);

    // typed coercions with friendly errors
    Bivector as_bivector(const std::string& name);
    RegularEndo as_endo(const std::string& name);
    PolyVector as_function(const std::string& name);

private:
    const Quiver* quiver_ = nullptr;
    std::optional<Quiver> owned_;
    std::map<std::string, NamedValue> defs_;
};

struct CheckReport {
    std::string check;
    std::vector<std::pair<std::string, std::string>> params;
    bool pass = true;
    std::string residue; // canonical form of the first nonzero residue
    double elapsed_ms = 0;
};

std::string report_text(const CheckReport& r);
std::string report_json(const CheckReport& r); // versioned with "schema": 1

// Script = ordered define/check/report commands, parsed fully before running.
struct ScriptCommand {
    enum Kind { Quiver, Define, Check, Report } kind;
    std::vector<std::string> args; // raw tokens after the keyword
    std::string expr;              // rhs for define
    int line = 0;
};

std::vector<ScriptCommand> parse_script(const std::string& text);

} // namespace ncpn
