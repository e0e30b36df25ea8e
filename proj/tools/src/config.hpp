#pragma once

// Run configuration for hyperstab-cli: an INI-style file with sections
// [model], [transport], [network], [scan], [sim]. See README for the grammar.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hyperstab/dispersion.hpp"
#include "hyperstab/models.hpp"
#include "hyperstab/network.hpp"
#include "hyperstab/scan.hpp"
#include "hyperstab/sim.hpp"

namespace hyperstab::cli {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& message, int line = 0);
    [[nodiscard]] int line() const { return line_; }

private:
    int line_;
};

struct IniValue {
    std::string text;
    int line = 0;
};

/// Parsed file: section -> key -> value, no interpretation yet.
struct IniDocument {
    std::map<std::string, std::map<std::string, IniValue>> sections;
    std::map<std::string, int> section_lines;

    [[nodiscard]] bool has(const std::string& section) const { return sections.contains(section); }
};

[[nodiscard]] IniDocument parse_ini(std::string_view text);

struct ModelSection {
    enum class Kind { brusselator, jacobian } kind = Kind::brusselator;
    BrusselatorParams brusselator;
    JacobianEntries jacobian;

    /// Brusselator kinetics, or linear kinetics around the origin for a bare Jacobian.
    [[nodiscard]] ReactionModel reaction_model() const;
    [[nodiscard]] JacobianEntries jacobian_entries() const;
    [[nodiscard]] ScanModel scan_model() const;
};

struct NetworkSection {
    enum class Generator { newman_watts, edge_list } generator = Generator::newman_watts;
    int n = 50, k = 5;
    double p = 0.02;
    std::uint64_t seed = 1;
    std::filesystem::path path;
    bool symmetrize = false;

    [[nodiscard]] AdjacencyMatrix build() const;
};

struct ScanSection {
    std::string preset;
    AxisSpec axis1{"Lambda_Re", -6.0, 0.0, 121};
    AxisSpec axis2{"Lambda_Im", -3.0, 3.0, 121};
    /// Explicit Lambda samples; empty with `use_network` means the network spectrum.
    std::vector<Complex> samples;
    bool use_network = false;
    /// Lambda_Re minimum was not given and may widen to fit the spectrum.
    bool auto_re_min = true;
    unsigned threads = 0;
};

struct SimSection {
    double dt = 0;
    double horizon = 200;
    double amplitude = 1e-6;
    std::uint64_t seed = 1;
    double skip_fraction = 0.2;
    double sample_interval = 0.1;
    double growth_ceiling = 1e-2;
    double decay_floor = 1e-12;
};

struct RunConfig {
    std::optional<ModelSection> model;
    std::optional<TransportParams> transport;
    std::optional<NetworkSection> network;
    std::optional<ScanSection> scan;
    std::optional<SimSection> sim;

    /// Throws ConfigError naming the section if it is absent.
    const ModelSection& require_model() const;
    const TransportParams& require_transport() const;
    const NetworkSection& require_network() const;
    const ScanSection& require_scan() const;
    const SimSection& require_sim() const;
};

/// `base_dir` resolves relative edge-list paths.
[[nodiscard]] RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// "x", "x+yi", "x-yi", "yi"; whitespace-free.
[[nodiscard]] Complex parse_complex(std::string_view text);

/// Scan presets: fig2, fig3a, fig3b, fig3c, fig3d.
[[nodiscard]] ScanSection scan_preset(std::string_view name);
[[nodiscard]] std::vector<std::string> scan_preset_names();

}  // namespace hyperstab::cli
