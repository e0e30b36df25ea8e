#pragma once

/**
 * Stability region maps over the (Lambda_Re, Lambda_Im) plane and over
 * planes of model/transport parameters.
 */

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hyperstab/dispersion.hpp"
#include "hyperstab/models.hpp"

namespace hyperstab {

struct AxisSpec {
    std::string name;
    double min = 0, max = 0;
    int resolution = 2;

    /// Grid coordinate i in [0, resolution): min + i (max - min) / (resolution - 1).
    [[nodiscard]] double value(int i) const;
    void validate() const;
};

struct RegionCell {
    bool stable = false;
    /// Smallest Routh-Hurwitz pivot.
    double margin = 0;
    /// Largest spectral abscissa; NaN if the root finder failed.
    double growth_rate = 0;

    friend bool operator==(const RegionCell&, const RegionCell&) = default;
};

struct RegionMap {
    AxisSpec axis1, axis2;
    /// Row-major: cells[i * axis2.resolution + k] sits at (axis1.value(i), axis2.value(k)).
    std::vector<RegionCell> cells;
    /// Every fixed (non-axis) parameter, in a stable order.
    std::vector<std::pair<std::string, double>> context;

    [[nodiscard]] const RegionCell& at(int i, int k) const { return cells[i * axis2.resolution + k]; }
    [[nodiscard]] std::size_t stable_count() const;
};

struct ScanOptions {
    /// 0 selects std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// Requires re_max <= 0 and resolution >= 2 (same resolution on both axes).
[[nodiscard]] RegionMap scan_lambda_plane(const JacobianEntries& j, const TransportParams& t,
                                          std::pair<double, double> re_range, std::pair<double, double> im_range,
                                          int resolution, const ScanOptions& options = {});

enum class ScanParameter { b, c, tau_u, tau_v, D_u, D_v, Lambda_Re, Lambda_Im };

/// Accepts exactly: b, c, tau_u, tau_v, D_u, D_v, Lambda_Re, Lambda_Im.
[[nodiscard]] ScanParameter parse_scan_parameter(std::string_view name);
[[nodiscard]] std::string_view to_string(ScanParameter p);

/// Either a Brusselator (b and c are scannable) or a fixed Jacobian.
struct ScanModel {
    std::optional<BrusselatorParams> brusselator;
    JacobianEntries jacobian;

    static ScanModel from_brusselator(const BrusselatorParams& p);
    static ScanModel from_jacobian(const JacobianEntries& j);
};

/**
 * Each grid point is stable when every Lambda sample is a stable mode.
 * A Lambda_Re or Lambda_Im axis overrides that component in every sample.
 * Margin is the minimum and growth rate the maximum over samples.
 */
[[nodiscard]] RegionMap scan_parameter_plane(const ScanModel& model, const TransportParams& t_template,
                                             const AxisSpec& axis1, const AxisSpec& axis2,
                                             std::span<const Complex> lambda_samples,
                                             const ScanOptions& options = {});

/// CSV with header `axis1,axis2,stable,margin,growth_rate`, LF line endings.
[[nodiscard]] std::string write_region_csv(const RegionMap& map);

/// Inverse of write_region_csv. Axis names come back as "axis1"/"axis2"; context is empty.
[[nodiscard]] RegionMap read_region_csv(std::string_view text);

struct SvgOverlay {
    std::vector<std::pair<double, double>> points;
    std::string color = "#1f4fd1";
    std::string label;
};

/// Heatmap of stable/unstable cells with optional point overlays.
[[nodiscard]] std::string write_region_svg(const RegionMap& map, std::span<const SvgOverlay> overlays = {});

}  // namespace hyperstab
