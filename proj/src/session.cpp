#include "ncpn/session.hpp"

#include <json.hpp>

#include <sstream>

namespace ncpn {

namespace {

bool parse_int_suffix(const std::string& s, const std::string& prefix, int& out) {
    if (s.rfind(prefix, 0) != 0) return false;
    std::string digits = s.substr(prefix.size());
    if (digits.empty()) return false;
    for (char c : digits)
        if (!isdigit((unsigned char)c)) return false;
    out = std::stoi(digits);
    return true;
}

} // namespace

const Quiver* builtin_quiver(const std::string& prefix) {
    if (prefix == "cm") return &builtins::cm_quiver();
    if (prefix == "gh") return &builtins::gh_quiver();
    return nullptr;
}

std::optional<NamedValue> builtin_value(const std::string& name) {
    using namespace builtins;
    int k = 0;
    if (name == "cm.pi0") return NamedValue(cm_pi0());
    if (name == "cm.pi1") return NamedValue(cm_pi1());
    if (parse_int_suffix(name, "cm.pi", k)) return NamedValue(cm_pi_general(k));
    if (name == "cm.N") return NamedValue(cm_N());
    if (name == "cm.N_alt") return NamedValue(cm_N_alt());
    if (parse_int_suffix(name, "cm.I", k) && k >= 1) return NamedValue(cm_I(k));
    if (parse_int_suffix(name, "cm.J", k) && k >= 1) return NamedValue(cm_J(k));
    if (parse_int_suffix(name, "cm.H", k) && k >= 1) return NamedValue(cm_H(k));
    if (parse_int_suffix(name, "cm.K", k) && k >= 1) return NamedValue(cm_K(k));
    if (name == "gh.pi0") return NamedValue(gh_pi0());
    if (name == "gh.pi1") return NamedValue(gh_pi1());
    if (name == "gh.N") return NamedValue(gh_N());
    if (parse_int_suffix(name, "gh.I2_", k)) return NamedValue(gh_I2(k));
    if (parse_int_suffix(name, "gh.J2_", k)) return NamedValue(gh_J2(k));
    if (parse_int_suffix(name, "gh.I", k) && k >= 1) return NamedValue(gh_I(k));
    if (parse_int_suffix(name, "gh.J", k) && k >= 1) return NamedValue(gh_J(k));
    return std::nullopt;
}

void Session::use_quiver_file(const std::string& text, bool doubled) {
    Quiver q = parse_quiver_file(text);
    owned_ = doubled ? double_quiver(q) : std::move(q);
    quiver_ = &*owned_;
}

const Quiver& Session::quiver() const {
    if (!quiver_) throw Error("no quiver loaded (use --quiver cm|gh|file.q)");
    return *quiver_;
}

void Session::define(const std::string& name, NamedValue v) {
    if (builtin_value(name)) throw Error("name shadows a builtin: " + name);
    if (!defs_.emplace(name, std::move(v)).second) throw Error("name already defined: " + name);
}

NamedValue Session::resolve(const std::string& name) {
    auto it = defs_.find(name);
    if (it != defs_.end()) return it->second;
    if (auto b = builtin_value(name)) {
        auto dot = name.find('.');
        const Quiver* bq = builtin_quiver(name.substr(0, dot));
        if (!quiver_) quiver_ = bq;
        else if (bq && bq != quiver_)
            throw Error("builtin " + name + " belongs to a different quiver than the session");
        return *b;
    }
    throw Error("unknown name: " + name);
}

ParseResult Session::parse(const std::string& src) { return parse_expression(src, quiver()); }

Bivector Session::as_bivector(const std::string& name) {
    NamedValue v = resolve(name);
    if (std::holds_alternative<Bivector>(v)) return std::get<Bivector>(v);
    if (std::holds_alternative<PolyVector>(v))
        return Bivector::from_polyvector(std::get<PolyVector>(v));
    throw Error(name + " is not a bivector");
}

RegularEndo Session::as_endo(const std::string& name) {
    NamedValue v = resolve(name);
    if (std::holds_alternative<RegularEndo>(v)) return std::get<RegularEndo>(v);
    throw Error(name + " is not a (1,1)-tensor");
}

PolyVector Session::as_function(const std::string& name) {
    NamedValue v = resolve(name);
    if (std::holds_alternative<PolyVector>(v)) {
        const PolyVector& p = std::get<PolyVector>(v);
        if (p.grade() == 0 || p.zero()) return p;
        throw Error(name + " is not a grade-0 class");
    }
    if (std::holds_alternative<PathPoly>(v))
        return dr0_class(quiver(), std::get<PathPoly>(v));
    throw Error(name + " is not a function");
}

std::string report_text(const CheckReport& r) {
    std::ostringstream os;
    os << (r.pass ? "[PASS] " : "[FAIL] ") << r.check;
    if (!r.params.empty()) {
        os << " (";
        bool first = true;
        for (auto& [k, v] : r.params) {
            if (!first) os << ", ";
            first = false;
            os << k << "=" << v;
        }
        os << ")";
    }
    if (!r.pass && !r.residue.empty()) os << "\n       residue: " << r.residue;
    return os.str();
}

std::string report_json(const CheckReport& r) {
    nlohmann::json j;
    j["schema"] = 1;
    j["check"] = r.check;
    nlohmann::json params = nlohmann::json::object();
    for (auto& [k, v] : r.params) params[k] = v;
    j["params"] = params;
    j["verdict"] = r.pass ? "pass" : "fail";
    if (r.residue.empty()) j["residue"] = nullptr;
    else j["residue"] = r.residue;
    j["elapsed_ms"] = r.elapsed_ms;
    return j.dump();
}

std::vector<ScriptCommand> parse_script(const std::string& text) {
    std::vector<ScriptCommand> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        // strip and skip blanks
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        ScriptCommand cmd;
        cmd.line = lineno;
        if (word == "quiver") {
            cmd.kind = ScriptCommand::Quiver;
            std::string rest;
            while (ls >> rest) cmd.args.push_back(rest);
            if (cmd.args.empty())
                throw ParseError("quiver needs an argument", lineno, 1);
        } else if (word == "define") {
            cmd.kind = ScriptCommand::Define;
            std::string name, eq;
            if (!(ls >> name >> eq) || eq != "=")
                throw ParseError("define NAME = EXPR", lineno, 1);
            cmd.args.push_back(name);
            std::getline(ls, cmd.expr);
        } else if (word == "check") {
            cmd.kind = ScriptCommand::Check;
            std::string rest;
            while (ls >> rest) cmd.args.push_back(rest);
            if (cmd.args.empty()) throw ParseError("check needs a kind", lineno, 1);
        } else if (word == "report") {
            cmd.kind = ScriptCommand::Report;
        } else {
            throw ParseError("unknown script command: " + word, lineno, 1);
        }
        out.push_back(std::move(cmd));
    }
    return out;
}

} // namespace ncpn
