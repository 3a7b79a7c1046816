#include "ergodelab/serialize.hpp"

#include <charconv>
#include <cmath>
#include <utility>

#include "json.hpp"

#include "ergodelab/errors.hpp"

namespace ergodelab {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0.0 ? "inf" : "-inf";
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    (void)ec;  // shortest form of a double always fits
    return std::string(buf, end);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty())
        throw PreconditionFailed("csv table needs at least one column");
}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
    if (cells.size() != header_.size())
        throw PreconditionFailed("csv row width does not match the header");
    rows_.push_back(std::move(cells));
    return *this;
}

namespace {

void append_cell(std::string& out, const std::string& cell) {
    if (cell.find_first_of(",\"\n\r") == std::string::npos) {
        out += cell;
        return;
    }
    out += '"';
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

void append_line(std::string& out, const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        append_cell(out, cells[i]);
    }
    out += '\n';
}

ordered_json param_to_json(double x) {
    if (std::isnan(x))
        throw PreconditionFailed("parameter is not a number");
    if (std::isinf(x)) return x > 0.0 ? "inf" : "-inf";
    return x;
}

double param_from_json(const ordered_json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf") return inf;
        if (s == "-inf") return -inf;
    }
    throw PreconditionFailed("parameter must be a number or \"inf\"/\"-inf\"");
}

ordered_json params_to_json(const std::vector<double>& params) {
    ordered_json arr = ordered_json::array();
    for (double p : params) arr.push_back(param_to_json(p));
    return arr;
}

std::vector<double> params_from_json(const ordered_json& v, const char* what) {
    if (!v.is_array())
        throw PreconditionFailed(std::string(what) + " must be an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(param_from_json(e));
    return out;
}

ordered_json measure_body(const RadonMeasure& mu) {
    ordered_json body;
    body["weight"] = mu.weight() == MeasureWeight::levy ? "levy" : "stieltjes";
    ordered_json atoms = ordered_json::array();
    for (const Atom& a : mu.atoms())
        atoms.push_back(ordered_json::array({a.location, a.mass}));
    body["atoms"] = atoms;
    if (mu.density()) {
        if (mu.density()->registry_name.empty())
            throw PreconditionFailed(
                "density has no registry name, so it cannot be written portably");
        ordered_json d;
        d["name"] = mu.density()->registry_name;
        d["params"] = params_to_json(mu.density()->registry_params);
        body["density"] = d;
    }
    return body;
}

RadonMeasure measure_from_body(const ordered_json& body) {
    MeasureWeight weight = MeasureWeight::stieltjes;
    if (body.contains("weight")) {
        const std::string w = body.at("weight").get<std::string>();
        if (w == "levy")
            weight = MeasureWeight::levy;
        else if (w != "stieltjes")
            throw PreconditionFailed("unknown measure weight \"" + w + "\"");
    }
    std::vector<Atom> atoms;
    if (body.contains("atoms")) {
        const ordered_json& arr = body.at("atoms");
        if (!arr.is_array())
            throw PreconditionFailed("atoms must be an array of [location, mass] pairs");
        for (const auto& e : arr) {
            if (!e.is_array() || e.size() != 2)
                throw PreconditionFailed("each atom must be a [location, mass] pair");
            atoms.push_back(Atom{param_from_json(e[0]), param_from_json(e[1])});
        }
    }
    std::optional<Density> density;
    if (body.contains("density")) {
        const ordered_json& d = body.at("density");
        if (!d.is_object() || !d.contains("name"))
            throw PreconditionFailed("density must be an object with a registry name");
        density = make_density(d.at("name").get<std::string>(),
                               d.contains("params")
                                   ? params_from_json(d.at("params"), "density params")
                                   : std::vector<double>{});
    }
    return RadonMeasure(std::move(atoms), std::move(density), weight);
}

ordered_json parse_document(const std::string& text, const char* kind) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const ordered_json::exception& e) {
        throw PreconditionFailed(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw PreconditionFailed("document must be a JSON object");
    if (!doc.contains("schema") || !doc.at("schema").is_number_integer() ||
        doc.at("schema").get<int>() != 1)
        throw PreconditionFailed("document must declare schema: 1");
    if (!doc.contains("kind") || doc.at("kind") != kind)
        throw PreconditionFailed(std::string("document kind must be \"") + kind + "\"");
    return doc;
}

// Either the builtin shorthand or the explicit (a, b, measure) triple,
// shared by both function kinds.
template <typename Fn>
ordered_json function_body(const Fn& fn, const char* kind) {
    ordered_json doc;
    doc["schema"] = 1;
    doc["kind"] = kind;
    if (!fn.registry_name().empty()) {
        doc["builtin"] = fn.registry_name();
        doc["params"] = params_to_json(fn.registry_params());
        return doc;
    }
    doc["a"] = fn.a();
    doc["b"] = fn.b();
    if (fn.measure()) doc["measure"] = measure_body(*fn.measure());
    return doc;
}

struct TripleParts {
    double a = 0.0;
    double b = 0.0;
    std::optional<RadonMeasure> mu;
};

TripleParts triple_from_json(const ordered_json& doc) {
    TripleParts parts;
    if (doc.contains("a")) parts.a = param_from_json(doc.at("a"));
    if (doc.contains("b")) parts.b = param_from_json(doc.at("b"));
    if (doc.contains("measure")) parts.mu = measure_from_body(doc.at("measure"));
    return parts;
}

std::vector<double> builtin_params(const ordered_json& doc) {
    if (!doc.contains("params")) return {};
    return params_from_json(doc.at("params"), "builtin params");
}

[[noreturn]] void reject_builtin(const std::string& name) {
    throw PreconditionFailed("unknown builtin \"" + name + "\"");
}

}  // namespace

std::string to_json(const RadonMeasure& mu) {
    ordered_json doc;
    doc["schema"] = 1;
    doc["kind"] = "measure";
    ordered_json body = measure_body(mu);
    for (auto& [key, value] : body.items()) doc[key] = value;
    return doc.dump();
}

RadonMeasure measure_from_json(const std::string& text) {
    return measure_from_body(parse_document(text, "measure"));
}

std::string to_json(const StieltjesFunction& g) {
    return function_body(g, "stieltjes").dump();
}

std::string to_json(const CompleteBernsteinFunction& f) {
    return function_body(f, "cbf").dump();
}

StieltjesFunction stieltjes_from_json(const std::string& text) {
    ordered_json doc = parse_document(text, "stieltjes");
    if (doc.contains("builtin")) {
        const std::string name = doc.at("builtin").get<std::string>();
        const std::vector<double> params = builtin_params(doc);
        if (name == "power") {
            if (params.size() != 1)
                throw PreconditionFailed("builtin \"power\" takes one parameter");
            return builtins::power(params[0]);
        }
        if (name == "log-ratio") return builtins::log_ratio();
        if (name == "log-reciprocal") return builtins::log_reciprocal();
        reject_builtin(name);
    }
    TripleParts parts = triple_from_json(doc);
    return StieltjesFunction(parts.a, parts.b, std::move(parts.mu));
}

CompleteBernsteinFunction cbf_from_json(const std::string& text) {
    ordered_json doc = parse_document(text, "cbf");
    if (doc.contains("builtin")) {
        const std::string name = doc.at("builtin").get<std::string>();
        const std::vector<double> params = builtin_params(doc);
        if (name == "cbf-power") {
            if (params.size() != 1)
                throw PreconditionFailed("builtin \"cbf-power\" takes one parameter");
            return builtins::cbf_power(params[0]);
        }
        reject_builtin(name);
    }
    TripleParts parts = triple_from_json(doc);
    return CompleteBernsteinFunction(parts.a, parts.b, std::move(parts.mu));
}

std::string CsvTable::str() const {
    std::string out;
    append_line(out, header_);
    for (const auto& r : rows_) append_line(out, r);
    return out;
}

}  // namespace ergodelab
