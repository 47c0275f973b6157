#pragma once

// Flat `key = value` configuration files.
//
//   geometry = two_semi_infinite        # or two_finite, three_infinite, three_finite
//   sigma_left = 0.02
//   left.initial = exp_poly: 1 x^2 e^{625x}; -0.5 e^{3x}
//   bc.left = dirichlet 0.3             # or neumann 0, robin A B V (rejected)
//   grid.x = -0.02:0.02:400             # lo:hi:count, or a comma list
//   grid.t = 0.005, 0.01, 0.02
//
// Initial data: `zero`, `constant: v`, or `exp_poly:` with terms
// `c [x^m] [e^{r x}]` separated by ';' (r may be complex, written (p+qi)).

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "fokas_heat/core.hpp"
#include "fokas_heat/solution.hpp"

namespace fokas_heat {

enum class Command { Solve, Verify, Steady };

struct RunManifest {
    std::string config_path;
    Command command = Command::Solve;
    std::vector<double> xs;
    std::vector<double> ts;
    double tolerance = 1e-10;
    double radius = 1.0;
    std::string out_path;
};

struct ParsedConfig {
    ProblemConfig problem;
    RunManifest manifest;
    SolverOptions options;
};

/// All problems found while parsing, each tagged with its line.
class ConfigError : public Error {
public:
    struct Item {
        int line;
        ErrorCode code;
        std::string message;
    };

    explicit ConfigError(std::vector<Item> items) : Error(items.front().code, join(items)), items_(std::move(items)) {}

    const std::vector<Item>& items() const { return items_; }

private:
    static std::string join(const std::vector<Item>& items) {
        std::string s;
        for (const auto& it : items) {
            if (!s.empty()) s += "; ";
            s += "line " + std::to_string(it.line) + ": " + std::string(to_string(it.code)) + ": " + it.message;
        }
        return s;
    }
    std::vector<Item> items_;
};

namespace config_detail {

inline std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

inline std::optional<double> to_double(std::string_view s) {
    const std::string t = trim(s);
    if (t.empty()) return std::nullopt;
    double v = 0.0;
    const char* first = t.data();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
    return v;
}

/// "p", "qi", "p+qi", "p-qi".
inline std::optional<cplx> to_complex(std::string_view s) {
    std::string t;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty()) return std::nullopt;
    if (t.back() != 'i') {
        if (auto v = to_double(t)) return cplx{*v, 0.0};
        return std::nullopt;
    }
    t.pop_back();
    // Split at the last sign that is not an exponent sign or the first char.
    std::size_t split = std::string::npos;
    for (std::size_t i = t.size(); i-- > 1;) {
        if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto im_of = [](const std::string& u) -> std::optional<double> {
        if (u.empty() || u == "+") return 1.0;
        if (u == "-") return -1.0;
        return to_double(u);
    };
    if (split == std::string::npos) {
        const auto im = im_of(t);
        if (!im) return std::nullopt;
        return cplx{0.0, *im};
    }
    const auto re = to_double(t.substr(0, split));
    const auto im = im_of(t.substr(split));
    if (!re || !im) return std::nullopt;
    return cplx{*re, *im};
}

inline std::optional<ExpPolynomial> parse_exp_poly(const std::string& body, std::string& err) {
    ExpPolynomial p;
    static const std::regex term_re(
        R"(^\s*([+-]?[0-9.eE+-]+)?\s*\*?\s*(x(\^\s*([0-9]+))?)?\s*\*?\s*(e\^\{\s*(\(([^)]*)\)|([+-]?[0-9.eE]*))\s*\*?\s*x\s*\})?\s*$)");
    std::stringstream ss(body);
    std::string piece;
    while (std::getline(ss, piece, ';')) {
        if (trim(piece).empty()) continue;
        std::smatch m;
        if (!std::regex_match(piece, m, term_re) || (!m[1].matched && !m[2].matched && !m[5].matched)) {
            err = "cannot read exp_poly term '" + trim(piece) + "'";
            return std::nullopt;
        }
        ExpPolyTerm t{1.0, 0, 0.0};
        if (m[1].matched) {
            const auto v = to_double(m[1].str());
            if (!v) {
                err = "bad coefficient '" + m[1].str() + "'";
                return std::nullopt;
            }
            t.coef = *v;
        }
        if (m[2].matched) t.power = m[4].matched ? std::stoi(m[4].str()) : 1;
        if (m[5].matched) {
            std::string r = m[7].matched ? m[7].str() : m[8].str();
            if (r.empty() || r == "+") r = "1";
            if (r == "-") r = "-1";
            const auto v = to_complex(r);
            if (!v) {
                err = "bad rate '" + r + "'";
                return std::nullopt;
            }
            t.rate = *v;
        }
        p.terms.push_back(t);
    }
    if (p.terms.empty()) {
        err = "exp_poly needs at least one term";
        return std::nullopt;
    }
    return p;
}

inline std::optional<std::vector<double>> parse_list(const std::string& v, std::string& err) {
    std::vector<double> out;
    if (v.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(v);
        std::string s;
        while (std::getline(ss, s, ':')) parts.push_back(s);
        const auto lo = parts.size() == 3 ? to_double(parts[0]) : std::nullopt;
        const auto hi = parts.size() == 3 ? to_double(parts[1]) : std::nullopt;
        const auto n = parts.size() == 3 ? to_double(parts[2]) : std::nullopt;
        if (!lo || !hi || !n || *n < 1 || *n != std::floor(*n)) {
            err = "range must be lo:hi:count";
            return std::nullopt;
        }
        const auto count = static_cast<std::size_t>(*n);
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(count == 1 ? *lo : *lo + (*hi - *lo) * static_cast<double>(i) / static_cast<double>(count - 1));
        return out;
    }
    std::stringstream ss(v);
    std::string s;
    while (std::getline(ss, s, ',')) {
        const auto d = to_double(s);
        if (!d) {
            err = "bad number '" + trim(s) + "'";
            return std::nullopt;
        }
        out.push_back(*d);
    }
    if (out.empty()) {
        err = "empty list";
        return std::nullopt;
    }
    return out;
}

}  // namespace config_detail

/// Parses and validates a configuration.  Throws ConfigError listing every
/// problem with its line number.
inline ParsedConfig parse_config(const std::string& text) {
    using namespace config_detail;
    std::vector<ConfigError::Item> errs;
    std::map<std::string, std::pair<std::string, int>> kv;
    static const std::vector<std::string> known{
        "geometry",      "sigma_left",      "sigma_middle",     "sigma_right",   "a",         "b",
        "c",             "gamma_left",      "gamma_right",      "left.initial",  "middle.initial",
        "right.initial", "bc.left",         "bc.right",         "contour.radius", "contour.tolerance",
        "grid.x",        "grid.t",          "solver.path",      "solver.variant", "solver.corrected"};

    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errs.push_back({no, ErrorCode::ParseError, "expected 'key = value'"});
            continue;
        }
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            errs.push_back({no, ErrorCode::UnknownKey, "unknown key '" + key + "'"});
            continue;
        }
        if (kv.count(key)) errs.push_back({no, ErrorCode::ParseError, "duplicate key '" + key + "'"});
        kv[key] = {value, no};
    }
    if (kv.empty() && errs.empty()) errs.push_back({std::max(no, 1), ErrorCode::ParseError, "configuration is empty"});
    if (!errs.empty()) throw ConfigError(errs);

    auto line_of = [&](const std::string& k) { return kv.count(k) ? kv[k].second : 0; };
    auto num = [&](const std::string& k, std::optional<double> def = std::nullopt) -> double {
        if (!kv.count(k)) {
            if (def) return *def;
            errs.push_back({0, ErrorCode::ParseError, "missing key '" + k + "'"});
            return 0.0;
        }
        const auto v = to_double(kv[k].first);
        if (!v) {
            errs.push_back({kv[k].second, ErrorCode::ParseError, "'" + k + "' is not a number"});
            return 0.0;
        }
        return *v;
    };
    auto initial = [&](const std::string& k) -> TransformSource {
        if (!kv.count(k)) return TransformSource::zero();
        const std::string v = kv[k].first;
        const int ln = kv[k].second;
        if (v == "zero") return TransformSource::zero();
        const auto colon = v.find(':');
        const std::string kind = trim(v.substr(0, colon));
        const std::string body = colon == std::string::npos ? "" : v.substr(colon + 1);
        if (kind == "constant") {
            const auto c = to_double(body);
            if (!c) {
                errs.push_back({ln, ErrorCode::ParseError, "constant needs a number"});
                return TransformSource::zero();
            }
            return {ExpPolynomial{{{*c, 0, 0.0}}}};
        }
        if (kind == "exp_poly") {
            std::string err;
            auto p = parse_exp_poly(body, err);
            if (!p) {
                errs.push_back({ln, ErrorCode::ParseError, err});
                return TransformSource::zero();
            }
            return {std::move(*p)};
        }
        errs.push_back({ln, ErrorCode::ParseError, "initial data must be zero, constant: or exp_poly:"});
        return TransformSource::zero();
    };
    auto boundary = [&](const std::string& k) -> std::optional<BoundaryOperator> {
        if (!kv.count(k)) return std::nullopt;
        std::istringstream ss(kv[k].first);
        std::string kind;
        ss >> kind;
        std::vector<double> args;
        std::string tok;
        while (ss >> tok) {
            const auto d = to_double(tok);
            if (!d) {
                errs.push_back({kv[k].second, ErrorCode::ParseError, "bad number '" + tok + "' in " + k});
                return std::nullopt;
            }
            args.push_back(*d);
        }
        if (kind == "dirichlet" && args.size() == 1) return BoundaryOperator::dirichlet(args[0]);
        if (kind == "neumann" && args.size() == 1) return BoundaryOperator::neumann(args[0]);
        if (kind == "robin" && args.size() == 3) return BoundaryOperator{args[0], args[1], args[2]};
        errs.push_back({kv[k].second, ErrorCode::ParseError,
                        k + " must be 'dirichlet V', 'neumann V' or 'robin A B V'"});
        return std::nullopt;
    };

    ParsedConfig out;
    auto& pc = out.problem;
    const std::string g = kv.count("geometry") ? kv["geometry"].first : "";
    if (g == "two_semi_infinite") pc.geometry = Geometry::TwoSemiInfinite;
    else if (g == "two_finite") pc.geometry = Geometry::TwoFinite;
    else if (g == "three_infinite") pc.geometry = Geometry::ThreeInfinite;
    else if (g == "three_finite") pc.geometry = Geometry::ThreeFinite;
    else {
        errs.push_back({line_of("geometry"), ErrorCode::ParseError, "geometry must be one of two_semi_infinite, "
                                                                    "two_finite, three_infinite, three_finite"});
        throw ConfigError(errs);
    }

    const double sl = num("sigma_left"), sr = num("sigma_right");
    const auto left = initial("left.initial"), right = initial("right.initial");
    const bool three = pc.geometry == Geometry::ThreeInfinite || pc.geometry == Geometry::ThreeFinite;
    const double sm = three ? num("sigma_middle") : 0.0;
    const auto middle = three ? initial("middle.initial") : TransformSource::zero();
    if (!three && kv.count("sigma_middle"))
        errs.push_back({line_of("sigma_middle"), ErrorCode::UnknownKey, "sigma_middle needs a three-layer geometry"});
    if (!three && kv.count("middle.initial"))
        errs.push_back({line_of("middle.initial"), ErrorCode::UnknownKey, "middle.initial needs a three-layer geometry"});

    switch (pc.geometry) {
    case Geometry::TwoSemiInfinite:
        pc.layers = {{sl, {-kInf, 0.0}}, {sr, {0.0, kInf}}};
        pc.initial = {left, right};
        pc.gamma_left = num("gamma_left", 0.0);
        pc.gamma_right = num("gamma_right", 0.0);
        break;
    case Geometry::TwoFinite:
        pc.layers = {{sl, {-num("a"), 0.0}}, {sr, {0.0, num("b")}}};
        pc.initial = {left, right};
        break;
    case Geometry::ThreeInfinite: {
        const double a = num("a");
        pc.layers = {{sl, {-kInf, -a}}, {sm, {-a, a}}, {sr, {a, kInf}}};
        pc.initial = {left, middle, right};
        break;
    }
    case Geometry::ThreeFinite:
        pc.layers = {{sl, {-num("a"), 0.0}}, {sm, {0.0, num("b")}}, {sr, {num("b"), num("c")}}};
        pc.initial = {left, middle, right};
        break;
    }
    if (pc.geometry != Geometry::TwoSemiInfinite) {
        for (const char* k : {"gamma_left", "gamma_right"})
            if (kv.count(k)) errs.push_back({line_of(k), ErrorCode::UnknownKey, std::string(k) + " is only used by two_semi_infinite"});
    }
    pc.left_end = boundary("bc.left");
    pc.right_end = boundary("bc.right");
    if (pc.geometry == Geometry::ThreeFinite) {
        if (!pc.left_end) pc.left_end = BoundaryOperator::neumann();
        if (!pc.right_end) pc.right_end = BoundaryOperator::neumann();
    }

    // Exp-poly data on finite layers are sampled over the layer.
    for (std::size_t i = 0; i < pc.layers.size(); ++i) {
        const auto& ext = pc.layers[i].extent;
        if (ext.finite() && ext.hi > ext.lo && !pc.initial[i].is_zero()) {
            const auto p = std::get<ExpPolynomial>(pc.initial[i].data);
            pc.initial[i] = {SampledInterval{[p](double x) { return p(x); }, ext.lo, ext.hi, 64}};
        }
    }

    auto& m = out.manifest;
    m.radius = num("contour.radius", 1.0);
    m.tolerance = num("contour.tolerance", 1e-10);
    if (!(m.radius > 0.0)) errs.push_back({line_of("contour.radius"), ErrorCode::ParseError, "contour.radius must be positive"});
    if (!(m.tolerance > 0.0))
        errs.push_back({line_of("contour.tolerance"), ErrorCode::ParseError, "contour.tolerance must be positive"});
    for (const auto& [key, dst] : {std::pair<std::string, std::vector<double>*>{"grid.x", &m.xs}, {"grid.t", &m.ts}}) {
        if (!kv.count(key)) continue;
        std::string err;
        if (auto v = parse_list(kv[key].first, err)) *dst = std::move(*v);
        else errs.push_back({line_of(key), ErrorCode::ParseError, key + ": " + err});
    }
    for (double t : m.ts)
        if (!(t > 0.0)) errs.push_back({line_of("grid.t"), ErrorCode::ParseError, "grid.t values must be positive"});

    auto& o = out.options;
    o.contour.radius = m.radius;
    o.contour.tolerance = m.tolerance;
    if (kv.count("solver.path")) {
        const auto& v = kv["solver.path"].first;
        if (v == "transcribed") o.path = FormulaPath::Transcribed;
        else if (v == "linear_solve") o.path = FormulaPath::LinearSolve;
        else errs.push_back({line_of("solver.path"), ErrorCode::ParseError, "solver.path is transcribed or linear_solve"});
    }
    if (kv.count("solver.variant")) {
        const auto& v = kv["solver.variant"].first;
        if (v == "full") o.variant = Variant::Full;
        else if (v == "restricted") o.variant = Variant::Restricted;
        else errs.push_back({line_of("solver.variant"), ErrorCode::ParseError, "solver.variant is full or restricted"});
    }
    if (kv.count("solver.corrected")) {
        const auto& v = kv["solver.corrected"].first;
        if (v == "true") o.corrected = true;
        else if (v == "false") o.corrected = false;
        else errs.push_back({line_of("solver.corrected"), ErrorCode::ParseError, "solver.corrected is true or false"});
    }
    if (!errs.empty()) throw ConfigError(errs);

    const auto r = validate(pc);
    if (!r.ok()) {
        // Point each violation at the key that set the offending field.
        auto layer_name = [&](std::size_t i) -> std::string {
            if (i == 0) return "left";
            return (pc.layers.size() == 3 && i == 1) ? "middle" : "right";
        };
        for (const auto& v : r.violations) {
            std::string key = "geometry";
            if (v.field.rfind("bc", 0) == 0) {
                key = v.field == "bc" ? "bc.left" : v.field;
            } else if (v.field.rfind("layers[", 0) == 0) {
                const std::size_t i = static_cast<std::size_t>(v.field[7] - '0');
                if (v.field.find(".initial") != std::string::npos) key = layer_name(i) + ".initial";
                else if (v.field.find(".sigma") != std::string::npos) key = "sigma_" + layer_name(i);
            } else if (v.field == "gamma") {
                key = "gamma_left";
            }
            errs.push_back({line_of(key), v.code, v.field + ": " + v.message});
        }
        throw ConfigError(errs);
    }
    return out;
}

inline ParsedConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError({{0, ErrorCode::ParseError, "cannot open '" + path + "'"}});
    std::stringstream ss;
    ss << f.rdbuf();
    auto pc = parse_config(ss.str());
    pc.manifest.config_path = path;
    return pc;
}

}  // namespace fokas_heat
