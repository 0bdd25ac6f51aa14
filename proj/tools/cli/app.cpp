#include "app.hpp"

#include "bsq/action.hpp"
#include "bsq/bs_solver.hpp"
#include "bsq/errors.hpp"
#include "bsq/reference.hpp"
#include "bsq/wkb.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

namespace bsq::cli {

using ojson = nlohmann::ordered_json;

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

const std::vector<std::string> kCommands = {"spectrum", "compare", "action", "gram", "wkb-residual"};
const std::vector<std::string> kKeys = {"potential", "h",       "h-sweep", "window", "order",
                                        "grid-n",    "domain",  "search",  "energy", "points",
                                        "samples",   "correction", "format", "out"};

std::string trim(std::string s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    double v = 0.0;
    const char* first = t.data();
    if (!t.empty() && t[0] == '+')
        ++first;
    auto res = std::from_chars(first, t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v))
        throw UsageError{"invalid number for " + key + ": '" + text + "'"};
    return v;
}

int to_int(const std::string& key, const std::string& text)
{
    const double v = to_double(key, text);
    if (v != std::floor(v) || std::fabs(v) > 2e9)
        throw UsageError{"invalid integer for " + key + ": '" + text + "'"};
    return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(text);
    while (std::getline(is, cur, sep))
        if (!trim(cur).empty())
            parts.push_back(trim(cur));
    return parts;
}

Interval to_interval(const std::string& key, const std::string& text)
{
    auto parts = split(text, ' ');
    if (parts.size() != 2)
        throw UsageError{key + " needs two values LO HI"};
    const Interval iv{to_double(key, parts[0]), to_double(key, parts[1])};
    if (!(iv.hi > iv.lo))
        throw UsageError{key + " must satisfy LO < HI"};
    return iv;
}

// --- report assembly --------------------------------------------------------

using Cell = std::variant<double, long long, bool, std::string>;

struct Report
{
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    ojson summary = ojson::object();
};

ojson cell_json(const Cell& c)
{
    return std::visit([](const auto& v) { return ojson(v); }, c);
}

std::string cell_text(const Cell& c)
{
    if (const auto* d = std::get_if<double>(&c))
        return format_double(*d);
    if (const auto* i = std::get_if<long long>(&c))
        return std::to_string(*i);
    if (const auto* b = std::get_if<bool>(&c))
        return *b ? "true" : "false";
    return std::get<std::string>(c);
}

std::string summary_text(const ojson& v)
{
    if (v.is_number_float())
        return format_double(v.get<double>());
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_array()) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? ";" : "") + summary_text(v[i]);
        return s;
    }
    return v.dump();
}

void write_report(const RunConfig& cfg, const Report& r, std::ostream& os)
{
    if (cfg.format == Format::json) {
        ojson j;
        j["command"] = cfg.command;
        ojson c = ojson::object();
        for (const auto& [k, v] : cfg.resolved())
            c[k] = v;
        j["config"] = c;
        j["columns"] = r.columns;
        ojson rows = ojson::array();
        for (const auto& row : r.rows) {
            ojson o = ojson::object();
            for (std::size_t i = 0; i < row.size(); ++i)
                o[r.columns[i]] = cell_json(row[i]);
            rows.push_back(o);
        }
        j["rows"] = rows;
        j["summary"] = r.summary;
        os << j.dump(2) << "\n";
        return;
    }
    os << "# bsq report\n";
    os << "# command = " << cfg.command << "\n";
    for (const auto& [k, v] : cfg.resolved())
        os << "# " << k << " = " << v << "\n";
    for (std::size_t i = 0; i < r.columns.size(); ++i)
        os << (i ? "," : "") << r.columns[i];
    os << "\n";
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << cell_text(row[i]);
        os << "\n";
    }
    for (const auto& [k, v] : r.summary.items())
        os << "# summary " << k << " = " << summary_text(v) << "\n";
}

// --- commands ---------------------------------------------------------------

Interval spatial_window(const RunConfig& cfg, const Potential& p)
{
    return cfg.search ? *cfg.search : search_window(p);
}

double require_h(const RunConfig& cfg)
{
    if (!cfg.h)
        throw UsageError{cfg.command + " needs --h"};
    return *cfg.h;
}

Interval require_window(const RunConfig& cfg)
{
    if (!cfg.window)
        throw UsageError{cfg.command + " needs --window LO HI"};
    return *cfg.window;
}

Report cmd_spectrum(const RunConfig& cfg, const Potential& p)
{
    const double h = require_h(cfg);
    const auto levels = enumerate_levels(p, require_window(cfg), h, cfg.order, spatial_window(cfg, p));
    Report r;
    r.columns = {"n", "E", "h", "order", "residual", "iterations"};
    for (const auto& lv : levels)
        r.rows.push_back({static_cast<long long>(lv.n), lv.E, lv.h, static_cast<long long>(lv.order), lv.residual,
                          static_cast<long long>(lv.iterations)});
    r.summary["count"] = levels.size();
    return r;
}

Report cmd_compare(const RunConfig& cfg, const Potential& p)
{
    const Interval window = require_window(cfg);
    ReferenceOptions opt;
    opt.N = cfg.grid_n;
    opt.domain = cfg.domain;
    Report r;
    if (!cfg.h_sweep.empty()) {
        r.columns = {"h", "max_error", "mean_error", "count_bs", "count_ref", "count_mismatch"};
        std::vector<double> hs, errs;
        std::string warning;
        for (double h : cfg.h_sweep) {
            const auto rep = compare_spectra(p, h, window, cfg.order, spatial_window(cfg, p), opt);
            r.rows.push_back({h, rep.max_error, rep.mean_error, static_cast<long long>(rep.count_bs),
                              static_cast<long long>(rep.count_ref), rep.count_mismatch});
            if (rep.count_mismatch)
                warning += (warning.empty() ? "" : "; ") + ("h = " + format_double(h) + ": " + rep.warning);
            if (rep.max_error > 0.0) {
                hs.push_back(h);
                errs.push_back(rep.max_error);
            }
        }
        if (hs.size() >= 2)
            r.summary["fitted_order"] = fit_order(hs, errs).order;
        r.summary["warning"] = warning;
        return r;
    }
    const double h = require_h(cfg);
    const auto rep = compare_spectra(p, h, window, cfg.order, spatial_window(cfg, p), opt);
    r.columns = {"n", "E_bs", "E_ref", "error"};
    for (const auto& pr : rep.pairs)
        r.rows.push_back({static_cast<long long>(pr.n), pr.E_bs, pr.E_ref, pr.error});
    r.summary["max_error"] = rep.max_error;
    r.summary["mean_error"] = rep.mean_error;
    r.summary["count_bs"] = rep.count_bs;
    r.summary["count_ref"] = rep.count_ref;
    r.summary["count_mismatch"] = rep.count_mismatch;
    r.summary["warning"] = rep.warning;
    r.summary["domain"] = {rep.domain.lo, rep.domain.hi};
    return r;
}

Report cmd_action(const RunConfig& cfg, const Potential& p)
{
    const Interval window = require_window(cfg);
    const int points = cfg.points.value_or(50);
    Report r;
    r.columns = {"E", "S0", "T", "J", "S2", "S0_error", "T_error", "J_error", "S2_error"};
    for (int i = 0; i < points; ++i) {
        const double E = window.lo + window.width() * i / (points - 1);
        const ActionData a = action_data(p, E, spatial_window(cfg, p));
        r.rows.push_back({a.E, a.S0, a.T, a.J, a.S2, a.S0_error, a.T_error, a.J_error, a.S2_error});
    }
    return r;
}

Report cmd_gram(const RunConfig& cfg, const Potential& p)
{
    const double h = require_h(cfg);
    const Interval window = require_window(cfg);
    const int points = cfg.points.value_or(1000);
    const auto scan = gram_scan(p, window, h, points, spatial_window(cfg, p));
    Report r;
    r.columns = {"E", "D", "argument"};
    for (const auto& g : scan)
        r.rows.push_back({g.E, g.value, g.argument});
    r.summary["zeros"] = gram_zeros(p, window, h, points, spatial_window(cfg, p));
    return r;
}

Report cmd_wkb_residual(const RunConfig& cfg, const Potential& p)
{
    if (!cfg.energy)
        throw UsageError{"wkb-residual needs --energy"};
    std::vector<double> hs = cfg.h_sweep;
    if (hs.empty())
        hs.push_back(require_h(cfg));
    const WellGeometry g = find_turning_points(p, *cfg.energy, spatial_window(cfg, p));
    WkbOptions opt;
    if (cfg.correction == "spatial")
        opt.correction = PhaseCorrection::spatial;
    else if (cfg.correction == "arc")
        opt.correction = PhaseCorrection::turning_point_arc;

    Report r;
    r.columns = {"x", "h", "residual", "envelope"};
    std::vector<WkbState> states;
    for (double h : hs)
        states.emplace_back(p, g, h, opt);
    ojson xs = ojson::array(), orders = ojson::array();
    for (int i = 0; i < cfg.samples; ++i) {
        const double x = g.x_left + g.width() * (i + 1) / (cfg.samples + 1);
        bool ok = true;
        for (const auto& u : states)
            ok = ok && u.admissible(x - 0.02 * u.h()) && u.admissible(x + 0.02 * u.h());
        if (!ok)
            continue;
        std::vector<double> env;
        for (const auto& u : states) {
            const double e = residual_envelope(u, x);
            r.rows.push_back({x, u.h(), residual_estimate(u, x), e});
            env.push_back(e);
        }
        if (hs.size() >= 2) {
            xs.push_back(x);
            orders.push_back(fit_order(hs, env).order);
        }
    }
    if (hs.size() >= 2) {
        r.summary["x"] = xs;
        r.summary["order"] = orders;
    }
    return r;
}

void caret_diagnostic(const std::string& text, const ParseError& e, std::ostream& err)
{
    err << "error: malformed potential: " << e.message() << "\n";
    err << "  " << text << "\n";
    err << "  " << std::string(std::min(e.offset(), text.size()), ' ') << "^\n";
    if (!e.expected().empty()) {
        err << "  expected:";
        for (const auto& s : e.expected())
            err << " " << s;
        err << "\n";
    }
}

} // namespace

std::vector<std::pair<std::string, std::string>> RunConfig::resolved() const
{
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("potential", potential);
    if (h)
        kv.emplace_back("h", format_double(*h));
    if (!h_sweep.empty()) {
        std::string s;
        for (std::size_t i = 0; i < h_sweep.size(); ++i)
            s += (i ? "," : "") + format_double(h_sweep[i]);
        kv.emplace_back("h-sweep", s);
    }
    if (window)
        kv.emplace_back("window", format_double(window->lo) + " " + format_double(window->hi));
    kv.emplace_back("order", std::to_string(order));
    kv.emplace_back("grid-n", std::to_string(grid_n));
    if (domain)
        kv.emplace_back("domain", format_double(domain->lo) + " " + format_double(domain->hi));
    if (search)
        kv.emplace_back("search", format_double(search->lo) + " " + format_double(search->hi));
    if (energy)
        kv.emplace_back("energy", format_double(*energy));
    if (points)
        kv.emplace_back("points", std::to_string(*points));
    kv.emplace_back("samples", std::to_string(samples));
    if (command == "wkb-residual")
        kv.emplace_back("correction", correction);
    kv.emplace_back("format", format == Format::json ? "json" : "csv");
    if (!out.empty())
        kv.emplace_back("out", out);
    return kv;
}

std::map<std::string, std::string> read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError{"cannot read config file '" + path + "'"};
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        if (trim(line).empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError{path + ":" + std::to_string(lineno) + ": expected key = value"};
        const std::string key = trim(line.substr(0, eq));
        if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
            throw UsageError{path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'"};
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

RunConfig make_config(const std::string& command, const std::map<std::string, std::string>& s)
{
    RunConfig c;
    c.command = command;
    auto get = [&](const char* k) -> const std::string* {
        auto it = s.find(k);
        return it == s.end() ? nullptr : &it->second;
    };
    if (auto v = get("potential"))
        c.potential = *v;
    if (c.potential.empty())
        throw UsageError{"--potential is required"};
    if (auto v = get("h")) {
        c.h = to_double("h", *v);
        if (!(*c.h > 0.0))
            throw UsageError{"h must be positive"};
    }
    if (auto v = get("h-sweep")) {
        for (const auto& part : split(*v, ',')) {
            const double h = to_double("h-sweep", part);
            if (!(h > 0.0))
                throw UsageError{"h-sweep values must be positive"};
            c.h_sweep.push_back(h);
        }
        if (c.h_sweep.empty())
            throw UsageError{"h-sweep is empty"};
    }
    if (auto v = get("window"))
        c.window = to_interval("window", *v);
    if (auto v = get("order")) {
        c.order = to_int("order", *v);
        if (c.order != 1 && c.order != 2)
            throw UsageError{"order must be 1 or 2"};
    }
    if (auto v = get("grid-n")) {
        c.grid_n = to_int("grid-n", *v);
        if (c.grid_n < 16 || c.grid_n > 10000000)
            throw UsageError{"grid-n must lie in [16, 10^7]"};
    }
    if (auto v = get("domain"))
        c.domain = to_interval("domain", *v);
    if (auto v = get("search"))
        c.search = to_interval("search", *v);
    if (auto v = get("energy"))
        c.energy = to_double("energy", *v);
    if (auto v = get("points")) {
        c.points = to_int("points", *v);
        if (*c.points < 2)
            throw UsageError{"points must be at least 2"};
    }
    if (auto v = get("samples")) {
        c.samples = to_int("samples", *v);
        if (c.samples < 1)
            throw UsageError{"samples must be at least 1"};
    }
    if (auto v = get("correction")) {
        if (*v != "none" && *v != "arc" && *v != "spatial")
            throw UsageError{"correction must be none, arc or spatial"};
        c.correction = *v;
    }
    if (auto v = get("format")) {
        if (*v == "csv")
            c.format = Format::csv;
        else if (*v == "json")
            c.format = Format::json;
        else
            throw UsageError{"format must be csv or json"};
    }
    if (auto v = get("out"))
        c.out = *v;
    return c;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Semiclassical (Bohr-Sommerfeld) eigenvalues of (hD)^2 + V(x) in a single well"};
    app.set_help_flag("--help", "Print this help message and exit");
    std::string command;
    app.add_option("command", command, "spectrum | compare | action | gram | wkb-residual")
        ->required()
        ->check(CLI::IsMember(kCommands));

    std::map<std::string, std::string> flags;
    std::map<std::string, std::vector<std::string>> raw;
    const std::vector<std::pair<std::string, int>> flag_arity = {
        {"potential", 1}, {"h", 1},      {"h-sweep", 1}, {"window", 2},  {"order", 1},
        {"grid-n", 1},    {"domain", 2}, {"search", 2},  {"energy", 1},  {"points", 1},
        {"samples", 1},   {"correction", 1}, {"format", 1}, {"out", 1}};
    for (const auto& [name, n] : flag_arity) {
        auto* opt = app.add_option("--" + name, raw[name]);
        opt->expected(n);
        opt->allow_extra_args(false);
    }
    std::string config_path;
    app.add_option("--config", config_path, "key = value file; flags take precedence");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    RunConfig cfg;
    try {
        std::map<std::string, std::string> settings;
        if (!config_path.empty())
            settings = read_config_file(config_path);
        for (const auto& [name, values] : raw) {
            if (values.empty())
                continue;
            std::string joined;
            for (std::size_t i = 0; i < values.size(); ++i)
                joined += (i ? " " : "") + values[i];
            settings[name] = joined;
        }
        cfg = make_config(command, settings);
    } catch (const UsageError& e) {
        err << "error: " << e.message << "\n";
        return 1;
    }

    std::optional<Potential> pot;
    try {
        pot.emplace(parse_potential(cfg.potential, cfg.search));
    } catch (const ParseError& e) {
        caret_diagnostic(cfg.potential, e, err);
        return 1;
    }

    Report report;
    try {
        if (command == "spectrum")
            report = cmd_spectrum(cfg, *pot);
        else if (command == "compare")
            report = cmd_compare(cfg, *pot);
        else if (command == "action")
            report = cmd_action(cfg, *pot);
        else if (command == "gram")
            report = cmd_gram(cfg, *pot);
        else
            report = cmd_wkb_residual(cfg, *pot);
    } catch (const UsageError& e) {
        err << "error: " << e.message << "\n";
        return 1;
    } catch (const GeometryError& e) {
        err << "geometry error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    if (cfg.out.empty()) {
        write_report(cfg, report, out);
        return 0;
    }
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
        err << "error: cannot open '" << cfg.out << "' for writing\n";
        return 1;
    }
    write_report(cfg, report, file);
    return file ? 0 : 1;
}

} // namespace bsq::cli
