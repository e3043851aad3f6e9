#include "sbm/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sbm/detect.hpp"
#include "sbm/edge.hpp"
#include "sbm/error.hpp"
#include "sbm/matrix_io.hpp"
#include "sbm/rng.hpp"
#include "sbm/spectra.hpp"

namespace sbm::cli {

namespace {

using nlohmann::json;

struct Globals {
    std::size_t threads = 0;
    bool check = false;
};

struct ModelFlags {
    model::SbmParams params{0, 1, 0.0, 0.0, 0, false};
    bool allow_sparse = false;
    CLI::Option* n = nullptr;
    CLI::Option* ps = nullptr;
    CLI::Option* pd = nullptr;

    void add(CLI::App& app, const char* k_flag = "--k") {
        n = app.add_option("--n", params.n_vertices, "number of vertices N");
        app.add_option(k_flag, params.n_communities, "number of communities K")->capture_default_str();
        ps = app.add_option("--ps", params.p_intra, "intra-community edge probability");
        pd = app.add_option("--pd", params.p_inter, "inter-community edge probability");
        app.add_option("--seed", params.seed, "base seed")->capture_default_str();
        app.add_flag("--permuted", params.permuted_layout, "random community layout instead of contiguous blocks");
        app.add_flag("--allow-sparse", allow_sparse, "sample even below the connectivity scale N p_d < 1");
    }
    bool given() const { return n->count() && ps->count() && pd->count(); }
    void require() const {
        if (!given()) throw Error(ErrorCode::InvalidArgument, "--n, --ps and --pd are required");
        params.validate();
    }
    model::SampleOptions options() const { return {allow_sparse}; }
};

// Output goes to `path` when set, else to the command's stdout.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) {
        if (path.empty() || path == "-") {
            os_ = &fallback;
        } else {
            file_.open(path);
            if (!file_) throw Error(ErrorCode::Io, "cannot open " + path);
            os_ = &file_;
        }
        *os_ << std::setprecision(17);
    }
    std::ostream& operator*() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

std::pair<double, double> parse_pair(const std::string& text, char sep, const char* what) {
    std::istringstream in(text);
    double a = 0, b = 0;
    char c = 0;
    if (!(in >> a >> c >> b) || c != sep || !in.eof())
        throw Error(ErrorCode::InvalidArgument, std::string("cannot parse ") + what + " '" + text + "'");
    return {a, b};
}

json gap_json(const detect::GapReport& g) {
    return {{"lambda_K", g.lambda_K},
            {"lambda_K1", g.lambda_K1},
            {"bulk_edge_threshold", g.bulk_edge_threshold},
            {"gap", g.gap},
            {"intra_bulk_gap", g.intra_bulk_gap},
            {"pass", g.pass}};
}

json shift_json(std::span<const double> v) {
    return {{"mean", edge::sample_mean(v)},
            {"variance", v.size() > 1 ? edge::sample_variance(v) : 0.0},
            {"ks", edge::ks_distance(v)}};
}

json edge_summary(const edge::EdgeEnsemble& ens, const detlaw::DeterministicLaw& law) {
    const auto& tw = edge::TWTable::goe();
    const auto l = shift_json(ens.rescaled_L);
    const auto two = shift_json(ens.rescaled_2);
    const double m = tw.mean();
    const bool closer = std::abs(l["mean"].get<double>() - m) < std::abs(two["mean"].get<double>() - m) &&
                        l["ks"].get<double>() < two["ks"].get<double>();
    return {{"n", ens.params.n_vertices},
            {"k", ens.params.n_communities},
            {"p_intra", ens.params.p_intra},
            {"p_inter", ens.params.p_inter},
            {"seed", ens.params.seed},
            {"trials", ens.lambda1.size()},
            {"q", law.q()},
            {"c4", law.c4()},
            {"edge", law.edge()},
            {"clamped", law.clamped()},
            {"regime", std::string(edge::to_string(edge::regime(ens.params)))},
            {"tw_mean", m},
            {"tw_variance", tw.variance()},
            {"shift_L", l},
            {"shift_2", two},
            {"shift_L_closer", closer}};
}

void write_samples(std::ostream& os, const edge::EdgeEnsemble& ens) {
    os << "trial,seed,lambda1,rescaled_L,rescaled_2\n";
    for (std::size_t i = 0; i < ens.lambda1.size(); ++i)
        os << i << ',' << ens.seeds[i] << ',' << ens.lambda1[i] << ',' << ens.rescaled_L[i] << ','
           << ens.rescaled_2[i] << '\n';
}

void write_histogram(std::ostream& os, const edge::EdgeEnsemble& ens, double lo, double hi, std::size_t bins) {
    const auto hl = edge::histogram(ens.rescaled_L, lo, hi, bins);
    const auto h2 = edge::histogram(ens.rescaled_2, lo, hi, bins);
    const double n = static_cast<double>(ens.lambda1.size());
    os << "bin_lo,bin_hi,count_L,count_2,expected_tw\n";
    for (std::size_t b = 0; b < bins; ++b)
        os << hl.edges[b] << ',' << hl.edges[b + 1] << ',' << hl.counts[b] << ',' << h2.counts[b] << ','
           << n * (edge::tw1_cdf(hl.edges[b + 1]) - edge::tw1_cdf(hl.edges[b])) << '\n';
}

void print_summary_text(std::ostream& os, const json& s) {
    os << std::setprecision(6);
    os << "N = " << s["n"] << ", K = " << s["k"] << ", trials = " << s["trials"] << ", regime = "
       << s["regime"].get<std::string>() << '\n';
    os << "q = " << s["q"].get<double>() << ", c4 = " << s["c4"].get<double>() << ", L = " << std::setprecision(10)
       << s["edge"].get<double>() << std::setprecision(6) << '\n';
    os << "TW1 mean " << s["tw_mean"].get<double>() << ", variance " << s["tw_variance"].get<double>() << '\n';
    for (const char* key : {"shift_L", "shift_2"})
        os << key << ": mean " << s[key]["mean"].get<double>() << ", variance " << s[key]["variance"].get<double>()
           << ", KS " << s[key]["ks"].get<double>() << '\n';
}

// --check verdict for an edge ensemble: only configurations in the TW regime
// are judged; the others are flagged.
int edge_verdict(const json& s, std::ostream& err) {
    if (s["regime"] != "tracy_widom") {
        err << "note: regime " << s["regime"].get<std::string>() << ", no Tracy-Widom fit expected\n";
        return ok;
    }
    return s["shift_L_closer"].get<bool>() ? ok : check_failed;
}

int cmd_sample(const ModelFlags& m, bool centered, const std::string& out_path, const std::string& format,
               std::ostream& out) {
    m.require();
    auto a = model::sample_adjacency(m.params, m.params.seed, m.options());
    if (centered) a = model::center_rescale(a, m.params);
    if (format == "csv") {
        Sink sink(out_path, out);
        io::write_matrix_csv(*sink, a);
    } else {
        if (out_path.empty()) throw Error(ErrorCode::InvalidArgument, "binary output needs --out");
        io::write_matrix(out_path, a, m.params.n_communities);
    }
    return ok;
}

struct SpectrumFlags {
    std::string in, vectors, stats, out;
    std::size_t top = 0;
    bool force = false;
};

int cmd_spectrum(const SpectrumFlags& f, const Globals& g, std::ostream& out) {
    const auto file = io::read_matrix(f.in);
    const auto& h = file.matrix;
    spectra::VectorMode mode = spectra::VectorMode::none;
    if (!f.vectors.empty()) mode = f.top > 0 ? spectra::VectorMode::top : spectra::VectorMode::all;
    const auto sample = spectra::eigen_sym(h, mode, f.top);
    {
        Sink sink(f.out, out);
        *sink << "index,eigenvalue\n";
        for (std::size_t i = 0; i < sample.size(); ++i) *sink << i << ',' << sample.eigenvalues[i] << '\n';
    }
    if (!f.vectors.empty()) {
        std::ofstream vf(f.vectors, std::ios::binary);
        if (!vf) throw Error(ErrorCode::Io, "cannot open " + f.vectors);
        io::write_dense(vf, sample.size(), sample.vector_count, sample.vectors);
    }
    if (!f.stats.empty()) {
        const auto [e, eta] = parse_pair(f.stats, ',', "--stats E,eta");
        const auto st = spectra::resolvent_entry_stats(h, {e, eta}, f.force);
        out << std::setprecision(10) << "lambda_d = " << st.lambda_d << "\nlambda_o = " << st.lambda_o
                  << "\nwald_residual = " << st.wald_residual << '\n';
    }
    if (g.check) {
        double sum = 0.0;
        for (double l : sample.eigenvalues) sum += l;
        const double n = static_cast<double>(h.order());
        bool good = std::abs(sum - h.trace()) <= 1e-6 * n;
        if (sample.has_vectors()) good = good && spectra::orthonormality_residual(sample) <= 1e-8;
        return good ? ok : check_failed;
    }
    return ok;
}

struct LawFlags {
    double xi4 = 0.0, q = 1.0, t = 0.0, eta = 0.01;
    std::string grid = "-2.5:2.5:51", out;
    bool edge = false;
};

int cmd_law(const LawFlags& f, const Globals& g, std::ostream& out) {
    const detlaw::DeterministicLaw law(f.xi4, f.q, f.t);
    if (f.edge) {
        out << std::fixed << std::setprecision(10) << "L = " << law.edge() << "\n2 + c4 = " << 2.0 + law.c4()
            << '\n';
        out.unsetf(std::ios::floatfield);
        if (g.check && law.c4() > 0.0)
            return std::abs(law.edge() - 2.0 - law.c4()) <= 5.0 * law.c4() * law.c4() ? ok : check_failed;
        return ok;
    }
    std::istringstream spec(f.grid);
    double e0 = 0, e1 = 0;
    std::size_t steps = 0;
    char c1 = 0, c2 = 0;
    if (!(spec >> e0 >> c1 >> e1 >> c2 >> steps) || c1 != ':' || c2 != ':' || steps == 0)
        throw Error(ErrorCode::InvalidArgument, "--grid must look like E0:E1:steps");
    Sink sink(f.out, out);
    *sink << "E,eta,Re_mtilde,Im_mtilde,rho_tilde\n";
    for (double e : verify::linspace(e0, e1, steps)) {
        const auto m = detlaw::mtilde({e, f.eta}, law);
        *sink << e << ',' << f.eta << ',' << m.real() << ',' << m.imag() << ',' << detlaw::rho_tilde(e, law) << '\n';
    }
    return ok;
}

struct EdgeFlags {
    std::size_t trials = 100, hist = 0;
    std::string out, hist_range = "-8:6";
    bool summary = false, json_out = false;
};

int cmd_edge(const ModelFlags& m, const EdgeFlags& f, const Globals& g, std::ostream& out, std::ostream& err) {
    m.require();
    const auto law = detlaw::DeterministicLaw::from_profile(model::cumulant_profile(m.params), 0.0,
                                                           detlaw::NegativeQuartic::clamp_to_zero);
    const auto ens = edge::edge_ensemble(m.params, f.trials, law, g.threads, m.options());
    if (!f.out.empty()) {
        Sink sink(f.out, out);
        write_samples(*sink, ens);
    }
    if (f.hist > 0) {
        const auto [lo, hi] = parse_pair(f.hist_range, ':', "--hist-range lo:hi");
        out << std::setprecision(17);
        write_histogram(out, ens, lo, hi, f.hist);
    }
    const auto s = edge_summary(ens, law);
    if (f.json_out)
        out << s.dump(2) << '\n';
    else if (f.summary || (f.out.empty() && f.hist == 0))
        print_summary_text(out, s);
    return g.check ? edge_verdict(s, err) : ok;
}

struct VerifyFlags {
    std::string scan, config, report;
    std::size_t trials = 0;
    double margin = 0.0;
    bool json_out = false;
};

int cmd_verify(ModelFlags m, const VerifyFlags& f, const Globals& g, std::ostream& out) {
    ExperimentConfig cfg;
    if (!f.config.empty()) {
        cfg = load_config(f.config);
        if (m.given()) {
            cfg.model = m.params;
            cfg.allow_below_connectivity = m.allow_sparse;
        }
    } else {
        m.require();
        cfg.model = m.params;
        cfg.allow_below_connectivity = m.allow_sparse;
    }
    if (!f.scan.empty()) cfg.scan = f.scan;
    if (cfg.scan.empty()) cfg.scan = "strong";
    if (f.trials > 0) cfg.trials = f.trials;
    if (f.margin > 0.0) cfg.margin = f.margin;
    cfg.model.validate();

    verify::ScanOptions opt{g.threads ? g.threads : cfg.threads, {cfg.allow_below_connectivity}};
    verify::VerificationReport report;
    if (cfg.scan == "strong") {
        const auto grid = cfg.grid ? *cfg.grid : verify::default_grid();
        report = verify::strong_law_scan(cfg.model, grid, cfg.trials, cfg.margin.value_or(10.0), opt);
    } else if (cfg.scan == "weak") {
        auto z = cfg.z_points;
        if (z.empty() && cfg.grid) z = cfg.grid->points();
        if (z.empty()) z = {{0.3, 0.1}, {-1.0, 0.05}, {1.5, 0.2}, {0.0, 0.5}, {1.9, 0.1}};
        const double ell = cfg.grid ? cfg.grid->ell : 0.3;
        report = verify::weak_law_scan(cfg.model, z, cfg.trials, cfg.margin.value_or(0.0), ell, 0.9, opt);
    } else if (cfg.scan == "ids") {
        auto iv = cfg.intervals;
        if (iv.empty()) iv = {{-0.5, 0.5}, {1.8, 2.2}};
        report = verify::ids_compare(cfg.model, iv, cfg.trials, cfg.margin.value_or(5.0), opt);
    } else if (cfg.scan == "norm") {
        report = verify::matrix_norm_check(cfg.model, cfg.trials, cfg.margin.value_or(10.0), opt);
    } else {
        throw Error(ErrorCode::InvalidArgument, "--scan must be strong, weak, ids or norm");
    }
    const json j = report.to_json();
    if (!f.report.empty()) {
        std::ofstream rf(f.report);
        if (!rf) throw Error(ErrorCode::Io, "cannot open " + f.report);
        rf << j.dump(2) << '\n';
    }
    if (f.json_out)
        out << j.dump(2) << '\n';
    else
        out << "scan " << report.scan << ": points " << report.points.size() << ", median ratio "
            << report.median_ratio << ", max ratio " << report.max_ratio << ", failing trials "
            << report.failing_trials.size() << ", pass " << (report.pass ? "yes" : "no") << '\n';
    return g.check && !report.pass ? check_failed : ok;
}

struct DetectFlags {
    double c = 0.1;
    bool estimate_k = false;
    std::string sweep;
    std::size_t restarts = 20;
};

json detect_once(const model::SbmParams& params, const DetectFlags& f, const Globals& g,
                 model::SampleOptions opt) {
    const std::size_t k_true = params.n_communities;
    const auto a = model::sample_adjacency(params, params.seed, opt);
    const std::size_t k_hat_guess = std::max<std::size_t>(k_true, 2);
    auto sample = spectra::eigen_sym(a, spectra::VectorMode::top, std::min(a.order(), k_hat_guess + 8));
    const std::size_t k_hat = detect::count_outliers(sample, 2.0 + f.c);
    const auto gap = detect::gap_check(sample, k_true, f.c);
    std::size_t k_used = f.estimate_k ? k_hat : k_true;
    json j{{"n", params.n_vertices},
           {"k_true", k_true},
           {"p_intra", params.p_intra},
           {"p_inter", params.p_inter},
           {"seed", params.seed},
           {"k_hat", k_hat},
           {"gap_report", gap_json(gap)}};
    if (k_used >= 2 && k_used <= sample.vector_count) {
        detect::KMeansOptions km;
        km.seed = params.seed;
        km.restarts = f.restarts;
        km.threads = g.threads;
        const auto part = detect::spectral_partition(sample, k_used, km);
        j["k_used"] = k_used;
        j["accuracy"] = detect::detection_accuracy(part, detect::ground_truth(params));
    } else {
        j["k_used"] = k_used;
        j["accuracy"] = nullptr;
    }
    return j;
}

int cmd_detect(const ModelFlags& m, const DetectFlags& f, const Globals& g, std::ostream& out) {
    if (!f.sweep.empty()) {
        if (!m.given()) throw Error(ErrorCode::InvalidArgument, "--n, --ps and --pd are required");
        const auto [k0, k1] = parse_pair(f.sweep, ':', "--sweep-k a:b");
        if (!(k0 >= 1 && k1 >= k0)) throw Error(ErrorCode::InvalidArgument, "--sweep-k needs 1 <= a <= b");
        out << std::setprecision(17) << "k,n,lambda_K,lambda_K1,gap,intra_bulk_gap,k_hat,pass\n";
        for (auto k = static_cast<std::size_t>(k0); k <= static_cast<std::size_t>(k1); ++k) {
            model::SbmParams p = m.params;
            p.n_communities = k;
            p.n_vertices = (m.params.n_vertices / k) * k;
            p.validate();
            const auto sample = spectra::eigen_sym(model::sample_adjacency(p, p.seed, m.options()));
            const auto gap = detect::gap_check(sample, k, f.c);
            out << k << ',' << p.n_vertices << ',' << gap.lambda_K << ',' << gap.lambda_K1 << ',' << gap.gap << ','
                << gap.intra_bulk_gap << ',' << detect::count_outliers(sample, 2.0 + f.c) << ','
                << (gap.pass ? "true" : "false") << '\n';
        }
        return ok;
    }
    m.require();
    const json j = detect_once(m.params, f, g, m.options());
    out << j.dump(2) << '\n';
    if (!g.check) return ok;
    const bool good = j["gap_report"]["pass"].get<bool>() && j["k_hat"].get<std::size_t>() == m.params.n_communities;
    return good ? ok : check_failed;
}

struct FigureFlags {
    std::string which, scale = "desk", out;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    bool print_config = false;
    bool json_out = false;
};

int cmd_figure(const FigureFlags& f, const Globals& g, std::ostream& out, std::ostream& err) {
    auto cfg = figure_recipe(parse_figure(f.which), parse_scale(f.scale));
    cfg.model.seed = f.seed;
    if (f.trials > 0) cfg.trials = f.trials;
    if (f.print_config) {
        out << to_toml(cfg);
        return ok;
    }
    if (cfg.disconnected_warning)
        err << "warning: figure " << cfg.label << " is in the disconnected regime; edge statistics are not expected "
            << "to follow Tracy-Widom\n";
    Sink sink(f.out, out);
    const model::SampleOptions opt{cfg.allow_below_connectivity};
    if (cfg.label[0] == '2') {
        *sink << "trial,index,eigenvalue\n";
        bool all_k = true;
        std::vector<std::size_t> counts;
        for (std::size_t t = 0; t < cfg.trials; ++t) {
            const auto sample =
                spectra::eigen_sym(model::sample_adjacency(cfg.model, trial_seed(cfg.model.seed, t), opt));
            for (std::size_t i = 0; i < sample.size(); ++i) *sink << t << ',' << i << ',' << sample.eigenvalues[i] << '\n';
            counts.push_back(detect::count_outliers(sample, 2.1));
            all_k = all_k && counts.back() == cfg.model.n_communities;
        }
        for (std::size_t t = 0; t < counts.size(); ++t) *sink << "# trial " << t << " outliers " << counts[t] << '\n';
        return g.check && !all_k ? check_failed : ok;
    }
    const auto law = detlaw::DeterministicLaw::from_profile(model::cumulant_profile(cfg.model), 0.0,
                                                           detlaw::NegativeQuartic::clamp_to_zero);
    const auto ens = edge::edge_ensemble(cfg.model, cfg.trials, law, g.threads, opt);
    write_samples(*sink, ens);
    auto s = edge_summary(ens, law);
    s["figure"] = cfg.label;
    s["caption_regime"] = cfg.regime;
    s["disconnected_warning"] = cfg.disconnected_warning;
    for (const auto& line : {std::string("figure ") + cfg.label + ", caption regime " + cfg.regime,
                             std::string("summary ") + s.dump()})
        *sink << "# " << line << '\n';
    return g.check ? edge_verdict(s, err) : ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectra of sparse stochastic block models"};
    app.name("sbm-spectra");
    app.require_subcommand(1);
    Globals g;
    app.add_option("--threads", g.threads, "worker threads (0: all cores; SBM_SPECTRA_THREADS overrides)");
    app.add_flag("--check", g.check, "exit 3 when the command's own pass criterion fails");

    auto* sample = app.add_subcommand("sample", "sample an SBM adjacency matrix");
    ModelFlags sample_model;
    sample_model.add(*sample);
    bool centered = false;
    std::string sample_out, sample_format = "bin";
    sample->add_flag("--centered", centered, "subtract E A");
    sample->add_option("--out", sample_out, "output path");
    sample->add_option("--format", sample_format, "bin or csv")->check(CLI::IsMember({"bin", "csv"}));

    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of a stored matrix");
    SpectrumFlags sf;
    spectrum->add_option("--in", sf.in, "matrix container")->required();
    spectrum->add_option("--vectors", sf.vectors, "write eigenvectors to this file");
    spectrum->add_option("--top", sf.top, "only the leading k eigenvectors");
    spectrum->add_option("--stats", sf.stats, "print resolvent statistics at E,eta");
    spectrum->add_flag("--force", sf.force, "allow the dense resolvent above N = 2000");
    spectrum->add_option("--out", sf.out, "eigenvalue CSV path (default stdout)");

    auto* law = app.add_subcommand("law", "evaluate the refined deterministic law");
    LawFlags lf;
    law->add_option("--xi4", lf.xi4, "normalized fourth cumulant")->required();
    law->add_option("--q", lf.q, "sparsity parameter")->required();
    law->add_option("--t", lf.t, "flow time")->capture_default_str();
    law->add_option("--grid", lf.grid, "E0:E1:steps")->capture_default_str();
    law->add_option("--eta", lf.eta, "imaginary part of z")->capture_default_str();
    law->add_flag("--edge", lf.edge, "print L and 2 + c4");
    law->add_option("--out", lf.out, "CSV path (default stdout)");

    auto* edge_cmd = app.add_subcommand("edge", "largest-eigenvalue ensemble");
    ModelFlags edge_model;
    edge_model.add(*edge_cmd);
    EdgeFlags ef;
    edge_cmd->add_option("--trials", ef.trials)->capture_default_str();
    edge_cmd->add_option("--out", ef.out, "samples CSV");
    edge_cmd->add_flag("--summary", ef.summary, "print KS, mean and variance for both shifts");
    edge_cmd->add_option("--hist", ef.hist, "emit a histogram with this many bins");
    edge_cmd->add_option("--hist-range", ef.hist_range, "lo:hi")->capture_default_str();
    edge_cmd->add_flag("--json", ef.json_out, "summary as JSON");

    auto* verify_cmd = app.add_subcommand("verify", "local-law verification scans");
    ModelFlags verify_model;
    verify_model.add(*verify_cmd);
    VerifyFlags vf;
    verify_cmd->add_option("--scan", vf.scan, "strong, weak, ids or norm");
    verify_cmd->add_option("--trials", vf.trials);
    verify_cmd->add_option("--config,--grid-file", vf.config, "TOML experiment config");
    verify_cmd->add_option("--report", vf.report, "write the JSON report here");
    verify_cmd->add_option("--margin", vf.margin);
    verify_cmd->add_flag("--json", vf.json_out, "print the JSON report");

    auto* detect_cmd = app.add_subcommand("detect", "outliers, spectral gap and partition");
    ModelFlags detect_model;
    detect_model.params.n_communities = 3;
    detect_model.add(*detect_cmd, "--k-true");
    DetectFlags df;
    detect_cmd->add_option("--c", df.c, "bulk threshold offset")->capture_default_str();
    detect_cmd->add_flag("--estimate-k", df.estimate_k, "partition with the outlier count instead of --k-true");
    detect_cmd->add_option("--sweep-k", df.sweep, "a:b, gap table over K");
    detect_cmd->add_option("--restarts", df.restarts)->capture_default_str();

    auto* figure = app.add_subcommand("figure", "data behind the edge and gap figures");
    FigureFlags ff;
    figure->add_option("--which", ff.which, "1a, 1b, 1c, 2a or 2b")->required();
    figure->add_option("--scale", ff.scale, "desk or paper")->capture_default_str();
    figure->add_option("--trials", ff.trials);
    figure->add_option("--seed", ff.seed)->capture_default_str();
    figure->add_option("--out", ff.out, "CSV path (default stdout)");
    figure->add_flag("--print-config", ff.print_config, "print the recipe as TOML and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : validation;
    }

    try {
        if (*sample) return cmd_sample(sample_model, centered, sample_out, sample_format, out);
        if (*spectrum) return cmd_spectrum(sf, g, out);
        if (*law) return cmd_law(lf, g, out);
        if (*edge_cmd) return cmd_edge(edge_model, ef, g, out, err);
        if (*verify_cmd) return cmd_verify(verify_model, vf, g, out);
        if (*detect_cmd) return cmd_detect(detect_model, df, g, out);
        if (*figure) return cmd_figure(ff, g, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return is_numerical(e.code()) ? numerical : validation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return validation;
    }
    return validation;
}

}  // namespace sbm::cli
