#include <cstdint>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "sbm/cli.hpp"
#include "sbm/error.hpp"

namespace sbm::cli {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::Config, msg); }

void only_keys(const toml::table& t, const std::set<std::string>& allowed, const std::string& where) {
    for (auto&& [key, node] : t) {
        (void)node;
        if (!allowed.count(std::string(key.str())))
            config_error("unknown key '" + std::string(key.str()) + "' in " + where);
    }
}

const toml::table* subtable(const toml::table& t, const char* name) {
    const auto* node = t.get(name);
    if (!node) return nullptr;
    if (!node->is_table()) config_error(std::string("'") + name + "' must be a table");
    return node->as_table();
}

double get_double(const toml::table& t, const char* key, const std::string& where) {
    const auto* node = t.get(key);
    if (!node || !(node->is_floating_point() || node->is_integer()))
        config_error(where + "." + key + " must be a number");
    return node->value<double>().value();
}

std::int64_t get_int(const toml::table& t, const char* key, const std::string& where) {
    const auto* node = t.get(key);
    if (!node || !node->is_integer()) config_error(where + "." + key + " must be an integer");
    return node->value<std::int64_t>().value();
}

std::size_t get_count(const toml::table& t, const char* key, const std::string& where) {
    const auto v = get_int(t, key, where);
    if (v < 0) config_error(where + "." + key + " must be nonnegative");
    return static_cast<std::size_t>(v);
}

bool get_bool(const toml::table& t, const char* key, const std::string& where) {
    const auto* node = t.get(key);
    if (!node || !node->is_boolean()) config_error(where + "." + key + " must be a boolean");
    return node->value<bool>().value();
}

std::string get_string(const toml::table& t, const char* key, const std::string& where) {
    const auto* node = t.get(key);
    if (!node || !node->is_string()) config_error(where + "." + key + " must be a string");
    return node->value<std::string>().value();
}

// Seeds are u64; TOML integers are i64, so large seeds travel as strings.
std::uint64_t get_seed(const toml::table& t, const std::string& where) {
    const auto* node = t.get("seed");
    if (node->is_integer()) {
        const auto v = node->value<std::int64_t>().value();
        if (v < 0) config_error(where + ".seed must be nonnegative");
        return static_cast<std::uint64_t>(v);
    }
    if (node->is_string()) {
        const auto s = node->value<std::string>().value();
        try {
            std::size_t used = 0;
            const auto v = std::stoull(s, &used, 0);
            if (used == s.size()) return v;
        } catch (const std::exception&) {
        }
    }
    config_error(where + ".seed must be an integer");
}

std::vector<double> get_numbers(const toml::table& t, const char* key, const std::string& where) {
    const auto* node = t.get(key);
    if (!node || !node->is_array()) config_error(where + "." + key + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& el : *node->as_array()) {
        if (!(el.is_floating_point() || el.is_integer())) config_error(where + "." + key + " must hold numbers");
        out.push_back(el.value<double>().value());
    }
    return out;
}

std::vector<std::pair<double, double>> get_pairs(const toml::table& t, const char* key, const std::string& where) {
    const auto* node = t.get(key);
    if (!node || !node->is_array()) config_error(where + "." + key + " must be an array of pairs");
    std::vector<std::pair<double, double>> out;
    for (const auto& el : *node->as_array()) {
        const auto* pair = el.as_array();
        if (!pair || pair->size() != 2) config_error(where + "." + key + " entries must be [a, b]");
        std::array<double, 2> v{};
        for (std::size_t i = 0; i < 2; ++i) {
            const auto& x = (*pair)[i];
            if (!(x.is_floating_point() || x.is_integer())) config_error(where + "." + key + " must hold numbers");
            v[i] = x.value<double>().value();
        }
        out.emplace_back(v[0], v[1]);
    }
    return out;
}

toml::array numbers(const std::vector<double>& v) {
    toml::array a;
    for (double x : v) a.push_back(x);
    return a;
}

toml::array pairs(const std::vector<std::pair<double, double>>& v) {
    toml::array a;
    for (const auto& [x, y] : v) a.push_back(toml::array{x, y});
    return a;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    toml::table root;
    try {
        root = toml::parse(text);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << "TOML syntax error: " << e.description() << " at line " << e.source().begin.line;
        config_error(msg.str());
    }
    only_keys(root, {"version", "command", "label", "model", "grid", "run"}, "config");

    ExperimentConfig c;
    if (!root.contains("version")) config_error("config.version is required");
    const auto version = get_int(root, "version", "config");
    if (version != kConfigVersion)
        config_error("config.version " + std::to_string(version) + " is not supported (expected " +
                     std::to_string(kConfigVersion) + ")");
    c.version = static_cast<int>(version);
    if (root.contains("command")) c.command = get_string(root, "command", "config");
    if (root.contains("label")) c.label = get_string(root, "label", "config");

    if (const auto* m = subtable(root, "model")) {
        only_keys(*m, {"n", "k", "p_intra", "p_inter", "seed", "permuted_layout", "allow_below_connectivity"},
                  "[model]");
        for (const char* key : {"n", "k", "p_intra", "p_inter"})
            if (!m->contains(key)) config_error(std::string("model.") + key + " is required");
        c.model.n_vertices = get_count(*m, "n", "model");
        c.model.n_communities = get_count(*m, "k", "model");
        c.model.p_intra = get_double(*m, "p_intra", "model");
        c.model.p_inter = get_double(*m, "p_inter", "model");
        if (m->contains("seed")) c.model.seed = get_seed(*m, "model");
        if (m->contains("permuted_layout")) c.model.permuted_layout = get_bool(*m, "permuted_layout", "model");
        if (m->contains("allow_below_connectivity"))
            c.allow_below_connectivity = get_bool(*m, "allow_below_connectivity", "model");
    }

    if (const auto* g = subtable(root, "grid")) {
        only_keys(*g, {"energies", "etas", "domain", "ell"}, "[grid]");
        verify::GridSpec grid;
        grid.energies = get_numbers(*g, "energies", "grid");
        grid.etas = get_numbers(*g, "etas", "grid");
        if (g->contains("domain")) {
            const auto d = get_string(*g, "domain", "grid");
            if (d == "law")
                grid.domain = verify::Domain::law;
            else if (d == "local")
                grid.domain = verify::Domain::local;
            else
                config_error("grid.domain must be \"law\" or \"local\"");
        }
        if (g->contains("ell")) grid.ell = get_double(*g, "ell", "grid");
        c.grid = std::move(grid);
    }

    if (const auto* r = subtable(root, "run")) {
        only_keys(*r, {"trials", "margin", "threads", "scan", "z", "intervals", "regime", "disconnected_warning"},
                  "[run]");
        if (r->contains("trials")) c.trials = get_count(*r, "trials", "run");
        if (r->contains("margin")) c.margin = get_double(*r, "margin", "run");
        if (r->contains("threads")) c.threads = get_count(*r, "threads", "run");
        if (r->contains("scan")) c.scan = get_string(*r, "scan", "run");
        if (r->contains("z"))
            for (const auto& [e, eta] : get_pairs(*r, "z", "run")) c.z_points.push_back({e, eta});
        if (r->contains("intervals")) c.intervals = get_pairs(*r, "intervals", "run");
        if (r->contains("regime")) c.regime = get_string(*r, "regime", "run");
        if (r->contains("disconnected_warning"))
            c.disconnected_warning = get_bool(*r, "disconnected_warning", "run");
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string to_toml(const ExperimentConfig& c) {
    toml::table root;
    root.insert("version", c.version);
    if (!c.command.empty()) root.insert("command", c.command);
    if (!c.label.empty()) root.insert("label", c.label);

    toml::table m;
    m.insert("n", static_cast<std::int64_t>(c.model.n_vertices));
    m.insert("k", static_cast<std::int64_t>(c.model.n_communities));
    m.insert("p_intra", c.model.p_intra);
    m.insert("p_inter", c.model.p_inter);
    if (c.model.seed <= static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
        m.insert("seed", static_cast<std::int64_t>(c.model.seed));
    else
        m.insert("seed", std::to_string(c.model.seed));
    m.insert("permuted_layout", c.model.permuted_layout);
    m.insert("allow_below_connectivity", c.allow_below_connectivity);
    root.insert("model", std::move(m));

    if (c.grid) {
        toml::table g;
        g.insert("energies", numbers(c.grid->energies));
        g.insert("etas", numbers(c.grid->etas));
        g.insert("domain", c.grid->domain == verify::Domain::law ? "law" : "local");
        g.insert("ell", c.grid->ell);
        root.insert("grid", std::move(g));
    }

    toml::table r;
    r.insert("trials", static_cast<std::int64_t>(c.trials));
    if (c.margin) r.insert("margin", *c.margin);
    r.insert("threads", static_cast<std::int64_t>(c.threads));
    if (!c.scan.empty()) r.insert("scan", c.scan);
    if (!c.z_points.empty()) {
        std::vector<std::pair<double, double>> z;
        for (const auto& p : c.z_points) z.emplace_back(p.re, p.im);
        r.insert("z", pairs(z));
    }
    if (!c.intervals.empty()) r.insert("intervals", pairs(c.intervals));
    if (!c.regime.empty()) r.insert("regime", c.regime);
    r.insert("disconnected_warning", c.disconnected_warning);
    root.insert("run", std::move(r));

    std::ostringstream out;
    out << root << '\n';
    return out.str();
}

Figure parse_figure(std::string_view which) {
    if (which == "1a") return Figure::f1a;
    if (which == "1b") return Figure::f1b;
    if (which == "1c") return Figure::f1c;
    if (which == "2a") return Figure::f2a;
    if (which == "2b") return Figure::f2b;
    throw Error(ErrorCode::InvalidArgument, "figure must be one of 1a, 1b, 1c, 2a, 2b");
}

Scale parse_scale(std::string_view scale) {
    if (scale == "desk") return Scale::desk;
    if (scale == "paper") return Scale::paper;
    throw Error(ErrorCode::InvalidArgument, "scale must be desk or paper");
}

ExperimentConfig figure_recipe(Figure which, Scale scale) {
    ExperimentConfig c;
    c.command = "figure";
    const bool paper = scale == Scale::paper;
    auto edge_figure = [&](const char* label, double ps, double pd, const char* regime) {
        c.label = label;
        c.model = {paper ? 27000u : 3999u, 3, ps, pd, 0, false};
        c.trials = paper ? 1000 : 100;
        c.regime = regime;
    };
    auto gap_figure = [&](const char* label, std::size_t k) {
        c.label = label;
        c.model = {3000, k, 0.03, 0.01, 0, false};
        c.trials = 1;
    };
    switch (which) {
        case Figure::f1a: edge_figure("1a", 0.03, 0.01, "tracy_widom"); break;
        case Figure::f1b: edge_figure("1b", 0.009, 0.006, "crossover"); break;
        case Figure::f1c:
            edge_figure("1c", 0.002, 0.001, "disconnected");
            c.disconnected_warning = true;
            c.allow_below_connectivity = true;
            break;
        case Figure::f2a: gap_figure("2a", 3); break;
        case Figure::f2b: gap_figure("2b", 6); break;
    }
    return c;
}

}  // namespace sbm::cli
