#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include <json.hpp>

#include "config.hpp"

namespace hyperstab::cli {

/// Exit statuses shared by every command.
enum ExitCode : int { kStable = 0, kUnstable = 1, kError = 2 };

struct CommandOptions {
    std::optional<std::filesystem::path> out;
    bool svg = false;
    /// Overrides [network] seed and [sim] seed.
    std::optional<std::uint64_t> seed;
    /// spectrum only: also write the network as an edge list.
    std::optional<std::filesystem::path> edge_list_out;
};

/// Applies --seed to every seeded section.
void apply_seed_override(RunConfig& config, const CommandOptions& options);

/// `index,re,im` rows of the sorted Laplacian spectrum.
int cmd_spectrum(const RunConfig& config, const CommandOptions& options, std::ostream& out);

/// Per-mode report plus discrepancy notes; exit 0 stable, 1 unstable.
[[nodiscard]] nlohmann::json check_report(const RunConfig& config);
int cmd_check(const RunConfig& config, const CommandOptions& options, std::ostream& out);

[[nodiscard]] RegionMap run_scan(const RunConfig& config, std::optional<LaplacianSpectrum>* spectrum_used = nullptr);
int cmd_scan(const RunConfig& config, const CommandOptions& options, std::ostream& out);

[[nodiscard]] nlohmann::json simulate_record(const RunConfig& config);
int cmd_simulate(const RunConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err);

/// a1..a4 then b1..b4; exit 0 stable, 1 unstable.
int cmd_roots(const std::array<double, 8>& coefficients, std::ostream& out);

}  // namespace hyperstab::cli
