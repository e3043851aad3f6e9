#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sbm/cli.hpp"
#include "sbm/error.hpp"

using namespace sbm;
using cli::ExperimentConfig;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "sbm-spectra");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content = {}) {
    const auto path = std::filesystem::temp_directory_path() / ("sbm_cli_test_" + name);
    if (!content.empty()) std::ofstream(path) << content;
    return path;
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::Io;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("config round trip") {
        ExperimentConfig c;
        c.command = "verify";
        c.label = "round trip";
        c.model = {1000, 2, 0.05, 0.02, 18446744073709551557ull, true};
        c.allow_below_connectivity = true;
        c.grid = verify::GridSpec{{-1.0, 0.25}, {0.1, 1.5}, verify::Domain::local, 0.25};
        c.trials = 7;
        c.margin = 3.5;
        c.threads = 2;
        c.scan = "weak";
        c.z_points = {{0.3, 0.1}, {-1.0, 0.05}};
        c.intervals = {{1.8, 2.2}};
        c.regime = "crossover";
        c.disconnected_warning = true;
        const auto text = cli::to_toml(c);
        CHECK(cli::parse_config(text) == c);

        ExperimentConfig minimal;
        minimal.model = {100, 1, 0.5, 0.5, 3};
        CHECK(cli::parse_config(cli::to_toml(minimal)) == minimal);
    }

    TEST_CASE("strict config parsing") {
        const std::string base = "version = 1\n[model]\nn = 100\nk = 2\np_intra = 0.3\np_inter = 0.1\n";
        CHECK(cli::parse_config(base).model.n_vertices == 100);
        CHECK(code_of([&] { cli::parse_config(base + "colour = 3\n"); }) == ErrorCode::Config);
        CHECK(code_of([&] { cli::parse_config("version = 2\n"); }) == ErrorCode::Config);
        CHECK(code_of([&] { cli::parse_config("[model]\nn = 1\n"); }) == ErrorCode::Config);
        CHECK(code_of([&] { cli::parse_config("version = 1\n[model]\nn = 100\n"); }) == ErrorCode::Config);
        CHECK(code_of([&] { cli::parse_config("version = 1\n[model]\nn = \"100\"\nk=1\np_intra=0.1\np_inter=0.1\n"); }) ==
              ErrorCode::Config);
        CHECK(code_of([&] { cli::parse_config("version = = 1"); }) == ErrorCode::Config);
        CHECK(code_of([&] { cli::load_config("/nonexistent/config.toml"); }) == ErrorCode::Io);
    }

    TEST_CASE("figure recipes") {
        using cli::Figure;
        using cli::Scale;
        const auto a = cli::figure_recipe(Figure::f1a, Scale::paper);
        CHECK(a.model == model::SbmParams{27000, 3, 0.03, 0.01, 0, false});
        const auto b = cli::figure_recipe(Figure::f1b, Scale::paper);
        CHECK(b.model == model::SbmParams{27000, 3, 0.009, 0.006, 0, false});
        const auto c = cli::figure_recipe(Figure::f1c, Scale::paper);
        CHECK(c.model == model::SbmParams{27000, 3, 0.002, 0.001, 0, false});
        CHECK(c.disconnected_warning);
        CHECK_FALSE(a.disconnected_warning);
        CHECK(cli::figure_recipe(Figure::f2a, Scale::paper).model == model::SbmParams{3000, 3, 0.03, 0.01, 0, false});
        CHECK(cli::figure_recipe(Figure::f2b, Scale::paper).model == model::SbmParams{3000, 6, 0.03, 0.01, 0, false});
        CHECK(cli::figure_recipe(Figure::f2b, Scale::desk).model.n_vertices == 3000);
        const auto desk = cli::figure_recipe(Figure::f1a, Scale::desk);
        CHECK(desk.model.n_vertices == 3999);
        CHECK_NOTHROW(desk.model.validate());
        CHECK(code_of([] { cli::parse_figure("3a"); }) == ErrorCode::InvalidArgument);
    }

    TEST_CASE("law subcommand") {
        const auto r = invoke({"law", "--xi4", "0", "--q", "10", "--edge"});
        CHECK(r.code == cli::ok);
        CHECK(r.out.find("L = 2.0000000000\n") == 0);
        const auto csv = invoke({"law", "--xi4", "1", "--q", "5", "--grid", "-1:1:3", "--eta", "0.5"});
        CHECK(csv.code == cli::ok);
        CHECK(csv.out.find("E,eta,Re_mtilde,Im_mtilde,rho_tilde\n") == 0);
        CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 4);
        CHECK(invoke({"--check", "law", "--xi4", "1", "--q", "5", "--edge"}).code == cli::ok);
    }

    TEST_CASE("exit codes") {
        CHECK(invoke({"law", "--xi4", "0", "--q", "10", "--bogus"}).code == cli::validation);
        CHECK(invoke({"nonsense"}).code == cli::validation);
        CHECK(invoke({}).code == cli::validation);
        // q = 0.4 puts the edge far outside the supported range.
        const auto r = invoke({"law", "--xi4", "1", "--q", "0.4", "--edge"});
        CHECK(r.code == cli::numerical);
        CHECK(r.err.find("EdgeNotBracketed") != std::string::npos);
        CHECK(invoke({"law", "--xi4", "1", "--q", "-1", "--edge"}).code == cli::validation);
        CHECK(invoke({"sample", "--n", "10", "--k", "3", "--ps", "0.5", "--pd", "0.2", "--format", "csv"}).code ==
              cli::validation);
    }

    TEST_CASE("verify rejects a grid with eta = 0") {
        const auto bad = temp_file("bad.toml",
                                   "version = 1\n[model]\nn = 200\nk = 2\np_intra = 0.3\np_inter = 0.1\n"
                                   "[grid]\nenergies = [0.0, 1.0]\netas = [0.0, 0.5]\n");
        const auto r = invoke({"verify", "--scan", "strong", "--config", bad.string()});
        CHECK(r.code == cli::validation);
        CHECK(r.err.find("eta > 0") != std::string::npos);
        std::filesystem::remove(bad);
    }

    TEST_CASE("verify from a config file produces a JSON report") {
        const auto cfg = temp_file("good.toml",
                                   "version = 1\n[model]\nn = 200\nk = 2\np_intra = 0.3\np_inter = 0.1\nseed = 5\n"
                                   "[grid]\nenergies = [0.0, 1.0]\netas = [0.5]\n[run]\ntrials = 2\n");
        const auto r = invoke({"verify", "--config", cfg.string(), "--json"});
        REQUIRE(r.code == cli::ok);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j.at("scan") == "strong");
        CHECK(j.at("trials") == 2);
        CHECK(j.at("points").size() == 2);
        CHECK(invoke({"--check", "verify", "--config", cfg.string()}).code == cli::ok);
        std::filesystem::remove(cfg);
    }

    TEST_CASE("sample and spectrum round trip") {
        const auto path = temp_file("matrix.bin");
        CHECK(invoke({"sample", "--n", "60", "--k", "2", "--ps", "0.4", "--pd", "0.1", "--seed", "3", "--centered",
                      "--out", path.string()})
                  .code == cli::ok);
        const auto r = invoke({"--check", "spectrum", "--in", path.string()});
        CHECK(r.code == cli::ok);
        CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 61);
        const auto s = invoke({"spectrum", "--in", path.string(), "--stats", "0.1,0.5"});
        CHECK(s.out.find("wald_residual") != std::string::npos);
        std::filesystem::remove(path);
        CHECK(invoke({"spectrum", "--in", path.string()}).code == cli::validation);
    }

    TEST_CASE("seeded commands are reproducible") {
        const std::vector<std::string> args{"edge", "--n", "200", "--k", "2", "--ps", "0.3", "--pd", "0.1",
                                            "--seed", "11", "--trials", "3", "--json"};
        const auto a = invoke(args);
        const auto b = invoke(args);
        REQUIRE(a.code == cli::ok);
        CHECK(a.out == b.out);
        const auto j = nlohmann::json::parse(a.out);
        CHECK(j.at("trials") == 3);
        CHECK(j.at("shift_L").contains("ks"));
    }

    TEST_CASE("detect prints the gap report and accuracy") {
        const auto r = invoke({"detect", "--n", "600", "--k-true", "2", "--ps", "0.3", "--pd", "0.1", "--seed", "2"});
        REQUIRE(r.code == cli::ok);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j.at("k_hat") == 2);
        CHECK(j.at("gap_report").at("pass") == true);
        CHECK(j.at("accuracy").get<double>() > 0.95);
        const auto sweep = invoke({"detect", "--n", "600", "--ps", "0.3", "--pd", "0.1", "--sweep-k", "2:3"});
        CHECK(sweep.code == cli::ok);
        CHECK(sweep.out.find("k,n,lambda_K") == 0);
    }

    TEST_CASE("figure 2a emits eigenvalues and the outlier count") {
        const auto r = invoke({"figure", "--which", "2a", "--trials", "1", "--seed", "7"});
        REQUIRE(r.code == cli::ok);
        CHECK(r.out.find("trial,index,eigenvalue\n") == 0);
        CHECK(r.out.find("# trial 0 outliers 3") != std::string::npos);
        const auto cfg = invoke({"figure", "--which", "1c", "--scale", "paper", "--print-config"});
        CHECK(cli::parse_config(cfg.out).model.n_vertices == 27000);
        CHECK(cli::parse_config(cfg.out).disconnected_warning);
    }
}
