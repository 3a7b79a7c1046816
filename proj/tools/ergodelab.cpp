#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ergodelab/ergodic.hpp"
#include "ergodelab/errors.hpp"
#include "ergodelab/models.hpp"
#include "ergodelab/selftest.hpp"
#include "ergodelab/serialize.hpp"
#include "ergodelab/stieltjes.hpp"

using namespace ergodelab;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_violation = 1;
constexpr int exit_inconclusive = 2;
constexpr int exit_usage = 64;

// Anything wrong with flags, config keys, specs, or referenced files.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raw flag values; strings so that config-file and environment fallbacks
// merge before anything is parsed.
struct Flags {
    std::string g;
    std::string q;
    std::string eps = "log";
    std::string model = "l1";
    std::string element;
    std::string which = "both";
    std::string phi = "log";
    std::string x;
    std::string grid = "1e-2:1e2:40";
    std::string alpha = "0.5";
    std::string t_points = "20";
    std::string tol;
    std::string format;
    std::string out;
    std::string config;
};

const std::vector<std::string> known_config_keys{
    "g", "q", "eps", "model", "element", "which", "phi", "x",
    "grid", "alpha", "t-points", "tol", "format", "out"};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string trim(const std::string& s) {
    const auto from = s.find_first_not_of(" \t\r");
    if (from == std::string::npos) return {};
    const auto to = s.find_last_not_of(" \t\r");
    return s.substr(from, to - from + 1);
}

std::map<std::string, std::string> read_config(const std::string& path) {
    std::map<std::string, std::string> out;
    std::istringstream in(read_file(path));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) +
                             ": expected key=value");
        const std::string key = trim(text.substr(0, eq));
        bool known = false;
        for (const auto& k : known_config_keys) known = known || k == key;
        if (!known)
            throw UsageError(path + ":" + std::to_string(lineno) + ": unknown key \"" +
                             key + "\"");
        out[key] = trim(text.substr(eq + 1));
    }
    return out;
}

double parse_number(const std::string& text, const std::string& what) {
    char* end = nullptr;
    const std::string t = trim(text);
    if (t == "inf") return inf;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size())
        throw UsageError(what + ": \"" + text + "\" is not a number");
    return v;
}

std::vector<double> split_numbers(const std::string& text, char sep,
                                  const std::string& what) {
    std::vector<double> out;
    std::string piece;
    std::istringstream in(text);
    while (std::getline(in, piece, sep)) out.push_back(parse_number(piece, what));
    if (out.empty()) throw UsageError(what + ": empty list");
    return out;
}

// name[:p1[:p2...]] -> (name, params); non-numeric params leave the whole
// spec as the name so the caller's complaint quotes what the user typed
std::pair<std::string, std::vector<double>> split_spec(const std::string& spec,
                                                       const std::string& what) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) return {spec, {}};
    try {
        return {spec.substr(0, colon),
                split_numbers(spec.substr(colon + 1), ':', what)};
    } catch (const UsageError&) {
        return {spec, {}};
    }
}

// Library complaints about a user-supplied spec are usage errors, not
// runtime findings.
template <typename Fn>
auto as_usage(const Fn& build) {
    try {
        return build();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

StieltjesFunction parse_g(const std::string& spec) {
    if (spec.empty()) throw UsageError("--g is required here");
    if (spec.rfind("json:", 0) == 0) {
        const std::string text = read_file(spec.substr(5));
        return as_usage([&] { return stieltjes_from_json(text); });
    }
    auto [name, params] = split_spec(spec, "--g");
    if (name == "power" && params.size() == 1)
        return as_usage([&] { return builtins::power(params[0]); });
    if (name == "log-ratio" && params.empty()) return builtins::log_ratio();
    if (name == "log-reciprocal" && params.empty()) return builtins::log_reciprocal();
    throw UsageError("unknown function spec \"" + spec +
                     "\" (try power:0.5, log-ratio, log-reciprocal, json:path)");
}

CompleteBernsteinFunction parse_q(const std::string& spec) {
    if (spec.empty()) throw UsageError("--q is required here");
    if (spec.rfind("json:", 0) == 0) {
        const std::string text = read_file(spec.substr(5));
        return as_usage([&] { return cbf_from_json(text); });
    }
    auto [name, params] = split_spec(spec, "--q");
    if (name == "cbf-power" && params.size() == 1)
        return as_usage([&] { return builtins::cbf_power(params[0]); });
    throw UsageError("unknown factor spec \"" + spec +
                     "\" (try cbf-power:0.5 or json:path)");
}

SlowlyVaryingFunction parse_eps(const std::string& spec) {
    auto [name, params] = split_spec(spec, "--eps");
    if (name == "log" && params.empty()) return builtins::eps_log();
    if (name == "logpow" && params.size() == 1)
        return as_usage([&] { return builtins::eps_log_power(params[0]); });
    if (name == "loglog" && params.empty()) return builtins::eps_log_loglog();
    throw UsageError("unknown slow factor \"" + spec +
                     "\" (try log, logpow:2, loglog)");
}

L1Element parse_element(const std::string& spec) {
    if (spec.empty()) throw UsageError("--element is required here");
    auto [name, params] = split_spec(spec, "--element");
    return as_usage([&name, &params] { return make_element(name, params); });
}

FloorWeight parse_phi(const std::string& spec) {
    if (spec == "log") return floor_weight_log();
    if (spec == "identity") return floor_weight_identity();
    if (spec.rfind("eps:", 0) == 0) {
        SlowlyVaryingFunction eps = parse_eps(spec.substr(4));
        return as_usage([&] { return floor_weight(eps); });
    }
    throw UsageError("unknown floor weight \"" + spec +
                     "\" (try log, identity, eps:loglog)");
}

void require_l1_model(const std::string& spec) {
    if (spec != "l1")
        throw UsageError("only the l1 model runs this experiment (got \"" + spec +
                         "\")");
}

// Resolved inputs every run shares.
struct Context {
    double tol = default_tolerance;
    std::string format;  // csv or json
    std::string out;
};

std::string resolve(const CLI::App* sub, const std::map<std::string, std::string>& config,
                    const char* flag, const char* key, const std::string& parsed) {
    bool on_cli = false;
    try {
        on_cli = sub->count(flag) > 0;
    } catch (const CLI::OptionNotFound&) {
        on_cli = false;
    }
    if (on_cli) return parsed;
    const auto found = config.find(key);
    if (found != config.end()) return found->second;
    return parsed;  // still holds the default
}

Context make_context(const CLI::App* sub, const std::map<std::string, std::string>& config,
                     const Flags& flags, const std::string& default_format) {
    Context ctx;
    std::string tol_text = resolve(sub, config, "--tol", "tol", flags.tol);
    if (tol_text.empty()) {
        if (const char* env = std::getenv("ERGODELAB_TOL")) tol_text = env;
    }
    if (!tol_text.empty()) {
        ctx.tol = parse_number(tol_text, "tolerance");
        if (!(ctx.tol > 0.0)) throw UsageError("tolerance must be > 0");
    }
    ctx.format = resolve(sub, config, "--format", "format", flags.format);
    if (ctx.format.empty()) ctx.format = default_format;
    if (ctx.format != "csv" && ctx.format != "json")
        throw UsageError("format must be csv or json (got \"" + ctx.format + "\")");
    ctx.out = resolve(sub, config, "--out", "out", flags.out);
    return ctx;
}

void emit(const Context& ctx, const std::string& text) {
    if (ctx.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(ctx.out, std::ios::binary);
    if (!out) throw Error("cannot write \"" + ctx.out + "\"");
    out << text;
}

// One key=value token on the CSV summary line and in the JSON summary block.
struct Summary {
    std::vector<std::pair<std::string, std::string>> entries;

    Summary& kv(const std::string& key, const std::string& value) {
        entries.push_back({key, value});
        return *this;
    }
    // without this, a string literal would convert to bool, not std::string
    Summary& kv(const std::string& key, const char* value) {
        return kv(key, std::string(value));
    }
    Summary& kv(const std::string& key, double value) {
        return kv(key, format_double(value));
    }
    Summary& kv(const std::string& key, bool value) {
        return kv(key, std::string(value ? "yes" : "no"));
    }

    std::string line() const {
        std::string out = "# summary:";
        for (const auto& [k, v] : entries) out += " " + k + "=" + v;
        out += '\n';
        return out;
    }
};

std::string render_csv(const Summary& summary, const CsvTable& table) {
    return summary.line() + table.str();
}

std::string render_json(const std::string& command, const Summary& summary,
                        const std::vector<std::string>& columns,
                        const std::vector<std::vector<double>>& rows,
                        const std::vector<std::string>* row_tags = nullptr,
                        const char* tag_name = nullptr) {
    ordered_json doc;
    doc["schema"] = 1;
    doc["command"] = command;
    ordered_json s;
    for (const auto& [k, v] : summary.entries) s[k] = v;
    doc["summary"] = s;
    ordered_json out_rows = ordered_json::array();
    for (size_t i = 0; i < rows.size(); ++i) {
        ordered_json row;
        if (row_tags) row[tag_name] = (*row_tags)[i];
        for (size_t j = 0; j < columns.size(); ++j) row[columns[j]] = rows[i][j];
        out_rows.push_back(row);
    }
    doc["rows"] = out_rows;
    return doc.dump() + "\n";
}

// Shared shape: numeric table plus a summary, rendered either way.
std::string render(const Context& ctx, const std::string& command,
                   const Summary& summary, const std::vector<std::string>& columns,
                   const std::vector<std::vector<double>>& rows,
                   const std::vector<std::string>* row_tags = nullptr,
                   const char* tag_name = nullptr) {
    if (ctx.format == "json")
        return render_json(command, summary, columns, rows, row_tags, tag_name);
    std::vector<std::string> header;
    if (row_tags) header.push_back(tag_name);
    header.insert(header.end(), columns.begin(), columns.end());
    CsvTable table(header);
    for (size_t i = 0; i < rows.size(); ++i) {
        std::vector<std::string> cells;
        if (row_tags) cells.push_back((*row_tags)[i]);
        for (double v : rows[i]) cells.push_back(format_double(v));
        table.row(cells);
    }
    return render_csv(summary, table);
}

int verdict_exit(bool inconclusive, bool violated) {
    if (inconclusive) return exit_inconclusive;
    return violated ? exit_violation : exit_ok;
}

// ---------------------------------------------------------------------------

int run_eval(const Context& ctx, const Flags& flags, const CLI::App* sub,
             const std::map<std::string, std::string>& config) {
    const std::string g_spec = resolve(sub, config, "--g", "g", flags.g);
    const std::string q_spec = resolve(sub, config, "--q", "q", flags.q);
    if (!g_spec.empty() && !q_spec.empty())
        throw UsageError("eval takes --g or --q, not both");
    if (g_spec.empty() && q_spec.empty())
        throw UsageError("eval needs --g or --q");

    std::vector<double> points;
    const std::string x_text = resolve(sub, config, "--x", "x", flags.x);
    const std::string grid_text = resolve(sub, config, "--grid", "grid", flags.grid);
    if (!x_text.empty()) {
        points = split_numbers(x_text, ',', "--x");
    } else {
        const std::vector<double> parts = split_numbers(grid_text, ':', "--grid");
        if (parts.size() != 3) throw UsageError("--grid wants lo:hi:count");
        const double lo = parts[0], hi = parts[1];
        const int count = int(parts[2]);
        if (!(lo > 0.0 && hi > lo && count >= 2))
            throw UsageError("--grid wants 0 < lo < hi and count >= 2");
        for (int i = 0; i < count; ++i)
            points.push_back(lo * std::pow(hi / lo, double(i) / (count - 1)));
    }

    std::string label;
    std::function<double(double)> value;
    if (!g_spec.empty()) {
        StieltjesFunction g = parse_g(g_spec);
        label = g.label();
        value = [g, &ctx](double z) { return eval_stieltjes(g, z, ctx.tol); };
    } else {
        CompleteBernsteinFunction q = parse_q(q_spec);
        label = q.label();
        value = [q, &ctx](double z) { return eval_cbf(q, z, ctx.tol); };
    }

    std::vector<std::vector<double>> rows;
    for (double z : points) rows.push_back({z, value(z)});

    Summary summary;
    summary.kv("function", label).kv("points", double(points.size()));
    emit(ctx, render(ctx, "eval", summary, {"z", "value"}, rows));
    return exit_ok;
}

int run_direct_rate(const Context& ctx, const Flags& flags, const CLI::App* sub,
                    const std::map<std::string, std::string>& config) {
    require_l1_model(resolve(sub, config, "--model", "model", flags.model));
    StieltjesFunction g = parse_g(resolve(sub, config, "--g", "g", flags.g));
    L1Element u = parse_element(resolve(sub, config, "--element", "element", flags.element));
    const double points = parse_number(
        resolve(sub, config, "--t-points", "t-points", flags.t_points), "--t-points");
    if (!(points >= 1 && points <= 40)) throw UsageError("--t-points wants 1..40");
    std::vector<double> grid;
    for (int k = 0; k <= int(points); ++k) grid.push_back(std::pow(2.0, k));

    const L1MultiplicationModel model{};
    RateReport report = direct_rate_check(model, g, u, grid, ctx.tol);

    std::vector<std::vector<double>> rows;
    for (const RateRow& r : report.rows)
        rows.push_back({r.t, r.cesaro_norm, r.bound, r.ratio});
    Summary summary;
    summary.kv("status", std::string(report.holds ? "AllWithinBound" : "BoundViolated"))
        .kv("domain_norm", report.domain_norm)
        .kv("max_ratio", report.max_ratio)
        .kv("worst_t", report.worst_t);
    emit(ctx, render(ctx, "direct-rate", summary,
                     {"t", "cesaro_norm", "bound", "ratio"}, rows));
    return report.holds ? exit_ok : exit_violation;
}

int run_inverse(const Context& ctx, const Flags& flags, const CLI::App* sub,
                const std::map<std::string, std::string>& config) {
    require_l1_model(resolve(sub, config, "--model", "model", flags.model));
    StieltjesFunction g = parse_g(resolve(sub, config, "--g", "g", flags.g));
    L1Element u = parse_element(resolve(sub, config, "--element", "element", flags.element));
    const std::string which = resolve(sub, config, "--which", "which", flags.which);
    if (which != "derivative" && which != "value" && which != "both")
        throw UsageError("--which wants derivative, value, or both");

    const L1MultiplicationModel model{};
    std::vector<IntegralDiagnostic> parts;
    std::vector<std::string> names;
    if (which != "value") {
        parts.push_back(inverse_integral_derivative(model, g, u, ctx.tol));
        names.push_back("derivative");
    }
    if (which != "derivative") {
        parts.push_back(inverse_integral_value(model, g, u, ctx.tol));
        names.push_back("value");
    }

    Summary summary;
    bool inconclusive = false;
    bool violated = false;
    for (size_t i = 0; i < parts.size(); ++i) {
        summary.kv(names[i], to_string(parts[i].verdict));
        inconclusive = inconclusive || parts[i].verdict == Verdict::inconclusive;
        violated = violated || !parts[i].consistent;
    }
    summary.kv("membership", to_string(parts[0].membership));
    inconclusive = inconclusive || parts[0].membership == Membership::inconclusive;

    std::vector<std::string> columns{"T"};
    for (const std::string& n : names) columns.push_back(n + "_partial");
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < parts[0].schedule.size(); ++i) {
        std::vector<double> row{parts[0].schedule[i]};
        for (const IntegralDiagnostic& d : parts) row.push_back(d.partials[i]);
        rows.push_back(row);
    }
    emit(ctx, render(ctx, "inverse", summary, columns, rows));
    return verdict_exit(inconclusive, violated);
}

int run_hirsch(const Context& ctx, const Flags& flags, const CLI::App* sub,
               const std::map<std::string, std::string>& config) {
    require_l1_model(resolve(sub, config, "--model", "model", flags.model));
    StieltjesFunction g = parse_g(resolve(sub, config, "--g", "g", flags.g));
    L1Element u = parse_element(resolve(sub, config, "--element", "element", flags.element));

    const L1MultiplicationModel model{};
    HirschReport report = hirsch_probe(model, g, u, ctx.tol);

    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < report.differences.size(); ++i)
        rows.push_back({report.deltas[i + 1], report.differences[i], report.partials[i]});
    Summary summary;
    summary.kv("verdict", to_string(report.verdict))
        .kv("membership", to_string(report.membership))
        .kv("consistent", report.consistent);
    emit(ctx, render(ctx, "hirsch", summary, {"delta", "gap", "partial"}, rows));
    return verdict_exit(report.verdict == Verdict::inconclusive ||
                            report.membership == Membership::inconclusive,
                        !report.consistent);
}

int run_extra_domain(const Context& ctx, const Flags& flags, const CLI::App* sub,
                     const std::map<std::string, std::string>& config) {
    require_l1_model(resolve(sub, config, "--model", "model", flags.model));
    StieltjesFunction g = parse_g(resolve(sub, config, "--g", "g", flags.g));
    CompleteBernsteinFunction q = parse_q(resolve(sub, config, "--q", "q", flags.q));
    L1Element u = parse_element(resolve(sub, config, "--element", "element", flags.element));

    const L1MultiplicationModel model{};
    ExtraDomainReport report = extra_domain_check(model, g, q, u, ctx.tol);

    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < report.t.size(); ++i)
        rows.push_back({report.t[i], report.product[i]});
    Summary summary;
    summary.kv("q_tail", report.q_tail)
        .kv("q_at_zero", report.q_at_zero)
        .kv("decay_certified", report.decay_certified)
        .kv("membership", to_string(report.composed_membership))
        .kv("holds", report.holds);
    emit(ctx, render(ctx, "extra-domain", summary, {"t", "product"}, rows));
    return verdict_exit(report.composed_membership == Membership::inconclusive,
                        !report.holds);
}

int run_mean_char(const Context& ctx, const Flags& flags, const CLI::App* sub,
                  const std::map<std::string, std::string>& config) {
    require_l1_model(resolve(sub, config, "--model", "model", flags.model));
    StieltjesFunction g = parse_g(resolve(sub, config, "--g", "g", flags.g));
    L1Element u = parse_element(resolve(sub, config, "--element", "element", flags.element));

    const L1MultiplicationModel model{};
    MeanCharacterizationReport report = mean_characterization(model, g, u, ctx.tol);

    std::vector<std::vector<double>> rows;
    std::vector<std::string> tags;
    for (size_t i = 0; i < report.decay_schedule.size(); ++i) {
        tags.push_back("decay");
        rows.push_back({report.decay_schedule[i], report.decay_values[i]});
    }
    for (size_t i = 0; i < report.block_partials.size(); ++i) {
        tags.push_back("block");
        rows.push_back({report.decay_schedule[i], report.block_partials[i]});
    }
    Summary summary;
    summary.kv("decay_condition", report.decay_condition)
        .kv("block_verdict", to_string(report.block_verdict))
        .kv("membership", to_string(report.membership))
        .kv("consistent", report.consistent);
    emit(ctx, render(ctx, "mean-char", summary, {"t", "value"}, rows, &tags, "series"));
    return verdict_exit(report.block_verdict == Verdict::inconclusive ||
                            report.membership == Membership::inconclusive,
                        !report.consistent);
}

int run_fractional(const Context& ctx, const Flags& flags, const CLI::App* sub,
                   const std::map<std::string, std::string>& config) {
    require_l1_model(resolve(sub, config, "--model", "model", flags.model));
    L1Element u = parse_element(resolve(sub, config, "--element", "element", flags.element));
    const double alpha =
        parse_number(resolve(sub, config, "--alpha", "alpha", flags.alpha), "--alpha");

    const L1MultiplicationModel model{};
    FractionalReport report = fractional_criterion(model, u, alpha, ctx.tol);

    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < report.schedule.size(); ++i)
        rows.push_back({report.schedule[i], report.partials[i]});
    Summary summary;
    summary.kv("alpha", report.alpha)
        .kv("verdict", to_string(report.partials_verdict))
        .kv("membership", to_string(report.membership))
        .kv("consistent", report.consistent);
    emit(ctx, render(ctx, "fractional", summary, {"T", "partial"}, rows));
    return verdict_exit(report.partials_verdict == Verdict::inconclusive ||
                            report.membership == Membership::inconclusive,
                        !report.consistent);
}

int run_averaging(const Context& ctx, const Flags& flags, const CLI::App* sub,
                  const std::map<std::string, std::string>& config) {
    StieltjesFunction g = parse_g(resolve(sub, config, "--g", "g", flags.g));
    AveragingReport report = averaging_condition_check(g, ctx.tol);

    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < report.t.size(); ++i)
        rows.push_back({report.t[i], report.mean_ratios[i], report.tail_ratios[i]});
    Summary summary;
    summary.kv("mean_condition", report.mean_condition)
        .kv("tail_condition", report.tail_condition)
        .kv("mean_constant", report.mean_constant)
        .kv("tail_constant", report.tail_constant);
    emit(ctx, render(ctx, "averaging", summary, {"t", "mean_ratio", "tail_ratio"}, rows));
    return exit_ok;
}

int run_counterexample(const Context& ctx, const Flags& flags, const CLI::App* sub,
                       const std::map<std::string, std::string>& config) {
    StieltjesFunction g = parse_g(resolve(sub, config, "--g", "g", flags.g));
    SlowlyVaryingFunction eps = parse_eps(resolve(sub, config, "--eps", "eps", flags.eps));

    CounterexampleBundle bundle = counterexample_build(g, eps, ctx.tol);

    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < bundle.t.size(); ++i)
        rows.push_back({bundle.t[i], bundle.product[i]});
    Summary summary;
    summary.kv("membership", to_string(bundle.membership))
        .kv("exact_series", to_string(bundle.exact_series))
        .kv("diagnostic", to_string(bundle.diagnostic_verdict))
        .kv("witness_norm", bundle.witness_norm)
        .kv("norm_exact", bundle.norm_exact)
        .kv("product_sup", bundle.product_sup)
        .kv("product_bounded", bundle.product_bounded);
    emit(ctx, render(ctx, "counterexample", summary, {"t", "product"}, rows));

    const double norm_gap = std::abs(bundle.witness_norm - bundle.norm_exact) /
                            std::max(bundle.norm_exact, 1e-300);
    return verdict_exit(bundle.membership == Membership::inconclusive,
                        !bundle.product_bounded || norm_gap > 1e-3);
}

int run_appendix(const Context& ctx, const Flags& flags, const CLI::App* sub,
                 const std::map<std::string, std::string>& config) {
    require_l1_model(resolve(sub, config, "--model", "model", flags.model));
    L1Element u = parse_element(resolve(sub, config, "--element", "element", flags.element));
    FloorWeight phi = parse_phi(resolve(sub, config, "--phi", "phi", flags.phi));

    const L1MultiplicationModel model{};
    FloorReport report = appendix_floor_check(model, u, phi, ctx.tol);

    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < report.schedule.size(); ++i)
        rows.push_back({report.schedule[i], report.partials[i]});
    Summary summary;
    summary.kv("weight", phi.name)
        .kv("applicable", report.applicable)
        .kv("weight_series", to_string(report.phi_series))
        .kv("verdict", to_string(report.integral_verdict))
        .kv("holds", report.holds);
    emit(ctx, render(ctx, "appendix", summary, {"T", "partial"}, rows));
    return verdict_exit(report.applicable &&
                            report.integral_verdict == Verdict::inconclusive,
                        !report.holds);
}

int run_selftest_command(const Context& ctx) {
    SelftestResult result = ergodelab::run_selftest(ctx.tol);
    emit(ctx, result.report);
    switch (result.status) {
        case SelftestStatus::passed: return exit_ok;
        case SelftestStatus::violated: return exit_violation;
        default: return exit_inconclusive;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rate laboratory for Stieltjes-type functional calculus"};
    app.require_subcommand(1);
    Flags flags;

    auto add_io = [&flags](CLI::App* sub) {
        sub->add_option("--tol", flags.tol,
                        "quadrature tolerance (default 1e-8; env ERGODELAB_TOL)");
        sub->add_option("--format", flags.format, "output format: csv or json");
        sub->add_option("--out", flags.out, "write to this file instead of stdout");
        sub->add_option("--config", flags.config, "key=value config file");
    };
    auto add_g = [&flags](CLI::App* sub) {
        sub->add_option("--g", flags.g,
                        "function spec: power:0.5, log-ratio, log-reciprocal, json:path");
    };
    auto add_model_element = [&flags](CLI::App* sub) {
        sub->add_option("--model", flags.model, "operator model (l1)");
        sub->add_option("--element", flags.element,
                        "element spec: window:1:2, power:1.3, zero");
    };

    CLI::App* eval = app.add_subcommand("eval", "tabulate a function pointwise");
    add_g(eval);
    eval->add_option("--q", flags.q, "Bernstein spec: cbf-power:0.5, json:path");
    eval->add_option("--x", flags.x, "comma-separated evaluation points");
    eval->add_option("--grid", flags.grid, "geometric grid lo:hi:count");
    add_io(eval);

    CLI::App* direct = app.add_subcommand("direct-rate",
                                          "rate bound for averages of a domain element");
    add_g(direct);
    add_model_element(direct);
    direct->add_option("--t-points", flags.t_points, "time grid 2^0..2^k (k in 1..40)");
    add_io(direct);

    CLI::App* inverse = app.add_subcommand("inverse",
                                           "weighted integrals that decide membership");
    add_g(inverse);
    add_model_element(inverse);
    inverse->add_option("--which", flags.which, "derivative, value, or both");
    add_io(inverse);

    CLI::App* hirsch = app.add_subcommand("hirsch", "truncated-measure resolvent probe");
    add_g(hirsch);
    add_model_element(hirsch);
    add_io(hirsch);

    CLI::App* extra = app.add_subcommand("extra-domain",
                                         "membership upgraded through a composed factor");
    add_g(extra);
    extra->add_option("--q", flags.q, "Bernstein spec: cbf-power:0.5, json:path");
    add_model_element(extra);
    add_io(extra);

    CLI::App* mean_char = app.add_subcommand("mean-char",
                                             "Laplace-density membership characterization");
    add_g(mean_char);
    add_model_element(mean_char);
    add_io(mean_char);

    CLI::App* fractional = app.add_subcommand("fractional",
                                              "fractional-power domain criterion");
    add_model_element(fractional);
    fractional->add_option("--alpha", flags.alpha, "power in (0,1)");
    add_io(fractional);

    CLI::App* averaging = app.add_subcommand("averaging",
                                             "averaging regularity of the function");
    add_g(averaging);
    add_io(averaging);

    CLI::App* counter = app.add_subcommand("counterexample",
                                           "sharpness witness for the log-free rate");
    add_g(counter);
    counter->add_option("--eps", flags.eps, "slow factor: log, logpow:2, loglog");
    add_io(counter);

    CLI::App* appendix = app.add_subcommand("appendix", "universal lower-bound check");
    add_model_element(appendix);
    appendix->add_option("--phi", flags.phi, "floor weight: log, identity, eps:<spec>");
    add_io(appendix);

    CLI::App* selftest = app.add_subcommand("selftest", "run every library invariant");
    add_io(selftest);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return exit_usage;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();

    try {
        std::map<std::string, std::string> config;
        if (!flags.config.empty()) config = read_config(flags.config);

        const std::string default_format =
            command == "counterexample" ? "json" : "csv";
        Context ctx = make_context(sub, config, flags, default_format);

        if (command == "eval") return run_eval(ctx, flags, sub, config);
        if (command == "direct-rate") return run_direct_rate(ctx, flags, sub, config);
        if (command == "inverse") return run_inverse(ctx, flags, sub, config);
        if (command == "hirsch") return run_hirsch(ctx, flags, sub, config);
        if (command == "extra-domain") return run_extra_domain(ctx, flags, sub, config);
        if (command == "mean-char") return run_mean_char(ctx, flags, sub, config);
        if (command == "fractional") return run_fractional(ctx, flags, sub, config);
        if (command == "averaging") return run_averaging(ctx, flags, sub, config);
        if (command == "counterexample")
            return run_counterexample(ctx, flags, sub, config);
        if (command == "appendix") return run_appendix(ctx, flags, sub, config);
        if (command == "selftest") return run_selftest_command(ctx);
        throw UsageError("unknown subcommand \"" + command + "\"");
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const Inconclusive& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return exit_inconclusive;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_violation;
    }
}
