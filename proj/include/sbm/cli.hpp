#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sbm/detlaw.hpp"
#include "sbm/model.hpp"
#include "sbm/verify.hpp"

namespace sbm::cli {

inline constexpr int kConfigVersion = 1;

/// Exit codes of run().
enum ExitCode : int { ok = 0, validation = 1, numerical = 2, check_failed = 3 };

/// Parameter bundle of one experiment. Serialized as TOML:
///
///   version = 1
///   command = "verify"
///   label = "..."            # optional
///   [model]  n, k, p_intra, p_inter, seed, permuted_layout, allow_below_connectivity
///   [grid]   energies = [...], etas = [...], domain = "law" | "local", ell
///   [run]    trials, margin, threads, scan, z = [[E, eta], ...], intervals = [[E1, E2], ...],
///            regime, disconnected_warning
///
/// Unknown keys are rejected.
struct ExperimentConfig {
    int version = kConfigVersion;
    std::string command;
    std::string label;
    model::SbmParams model;
    bool allow_below_connectivity = false;
    std::optional<verify::GridSpec> grid;
    std::size_t trials = 1;
    std::optional<double> margin;
    std::size_t threads = 0;
    std::string scan;
    std::vector<detlaw::ComplexPoint> z_points;
    std::vector<std::pair<double, double>> intervals;
    /// Regime named by the figure caption, "" if not a figure recipe.
    std::string regime;
    bool disconnected_warning = false;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Throws Error(Config) on syntax errors, unknown keys, wrong types or a version mismatch.
ExperimentConfig parse_config(std::string_view toml_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string to_toml(const ExperimentConfig& config);

enum class Figure { f1a, f1b, f1c, f2a, f2b };
enum class Scale { desk, paper };

Figure parse_figure(std::string_view which);
Scale parse_scale(std::string_view scale);

/// Caption parameters at Scale::paper; desk scale uses N = 3999 (3 x 1333) for the edge
/// figures and keeps N = 3000 for the gap figures.
ExperimentConfig figure_recipe(Figure which, Scale scale);

/// Entry point behind the sbm-spectra tool. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sbm::cli
