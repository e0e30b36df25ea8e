#include "hyperstab/scan.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace hyperstab {

double AxisSpec::value(int i) const {
    // Written so that index 2i of a (2r - 1)-point grid lands on exactly the
    // same double as index i of an r-point grid.
    return min + (static_cast<double>(i) * (max - min)) / static_cast<double>(resolution - 1);
}

void AxisSpec::validate() const {
    if (resolution < 2)
        throw std::invalid_argument("axis '" + name + "' needs resolution >= 2");
    if (!std::isfinite(min) || !std::isfinite(max) || !(max > min))
        throw std::invalid_argument("axis '" + name + "' needs finite min < max");
}

std::size_t RegionMap::stable_count() const {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const RegionCell& c) { return c.stable; }));
}

namespace {

void parallel_rows(int rows, unsigned threads, const std::function<void(int)>& body) {
    unsigned n = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    n = std::min<unsigned>(n, static_cast<unsigned>(rows));
    if (n <= 1) {
        for (int i = 0; i < rows; ++i)
            body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    {
        std::vector<std::jthread> pool;
        pool.reserve(n);
        for (unsigned w = 0; w < n; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (int i = static_cast<int>(w); i < rows; i += static_cast<int>(n))
                        body(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

RegionCell cell_from(const ModeVerdict& m) {
    return {m.stable, m.rh_margin, m.growth_rate.value_or(std::numeric_limits<double>::quiet_NaN())};
}

}  // namespace

RegionMap scan_lambda_plane(const JacobianEntries& j, const TransportParams& t, std::pair<double, double> re_range,
                            std::pair<double, double> im_range, int resolution, const ScanOptions& options) {
    t.validate();
    if (!j.is_finite())
        throw std::invalid_argument("Jacobian entries must be finite");
    RegionMap map;
    map.axis1 = {"Lambda_Re", re_range.first, re_range.second, resolution};
    map.axis2 = {"Lambda_Im", im_range.first, im_range.second, resolution};
    map.axis1.validate();
    map.axis2.validate();
    if (re_range.second > 0.0)
        throw std::invalid_argument("Lambda_Re range must lie in (-inf, 0]");
    map.context = {{"f_u", j.f_u}, {"f_v", j.f_v}, {"g_u", j.g_u},   {"g_v", j.g_v},
                   {"D_u", t.D_u}, {"D_v", t.D_v}, {"tau_u", t.tau_u}, {"tau_v", t.tau_v}};

    map.cells.resize(static_cast<std::size_t>(resolution) * resolution);
    parallel_rows(resolution, options.threads, [&](int i) {
        const double re = map.axis1.value(i);
        for (int k = 0; k < resolution; ++k)
            map.cells[static_cast<std::size_t>(i) * resolution + k] =
                cell_from(mode_verdict(j, t, Complex{re, map.axis2.value(k)}));
    });
    return map;
}

ScanParameter parse_scan_parameter(std::string_view name) {
    static constexpr std::pair<std::string_view, ScanParameter> table[] = {
        {"b", ScanParameter::b},         {"c", ScanParameter::c},     {"tau_u", ScanParameter::tau_u},
        {"tau_v", ScanParameter::tau_v}, {"D_u", ScanParameter::D_u}, {"D_v", ScanParameter::D_v},
        {"Lambda_Re", ScanParameter::Lambda_Re}, {"Lambda_Im", ScanParameter::Lambda_Im}};
    for (const auto& [n, p] : table)
        if (n == name)
            return p;
    throw std::invalid_argument("unknown scan axis '" + std::string(name) +
                                "' (expected one of b, c, tau_u, tau_v, D_u, D_v, Lambda_Re, Lambda_Im)");
}

std::string_view to_string(ScanParameter p) {
    switch (p) {
    case ScanParameter::b: return "b";
    case ScanParameter::c: return "c";
    case ScanParameter::tau_u: return "tau_u";
    case ScanParameter::tau_v: return "tau_v";
    case ScanParameter::D_u: return "D_u";
    case ScanParameter::D_v: return "D_v";
    case ScanParameter::Lambda_Re: return "Lambda_Re";
    case ScanParameter::Lambda_Im: return "Lambda_Im";
    }
    return "?";
}

ScanModel ScanModel::from_brusselator(const BrusselatorParams& p) {
    return {p, brusselator_jacobian(p)};
}

ScanModel ScanModel::from_jacobian(const JacobianEntries& j) {
    if (!j.is_finite())
        throw std::invalid_argument("Jacobian entries must be finite");
    return {std::nullopt, j};
}

namespace {

struct PointParams {
    std::optional<BrusselatorParams> brusselator;
    JacobianEntries jacobian;
    TransportParams transport;
    std::optional<double> lambda_re, lambda_im;
};

void apply(PointParams& p, ScanParameter which, double value) {
    switch (which) {
    case ScanParameter::b: p.brusselator->b = value; break;
    case ScanParameter::c: p.brusselator->c = value; break;
    case ScanParameter::tau_u: p.transport.tau_u = value; break;
    case ScanParameter::tau_v: p.transport.tau_v = value; break;
    case ScanParameter::D_u: p.transport.D_u = value; break;
    case ScanParameter::D_v: p.transport.D_v = value; break;
    case ScanParameter::Lambda_Re: p.lambda_re = value; break;
    case ScanParameter::Lambda_Im: p.lambda_im = value; break;
    }
}

void finalize(PointParams& p) {
    if (p.brusselator)
        p.jacobian = brusselator_jacobian(*p.brusselator);
    p.transport.validate();
}

}  // namespace

RegionMap scan_parameter_plane(const ScanModel& model, const TransportParams& t_template, const AxisSpec& axis1,
                               const AxisSpec& axis2, std::span<const Complex> lambda_samples,
                               const ScanOptions& options) {
    axis1.validate();
    axis2.validate();
    if (lambda_samples.empty())
        throw std::invalid_argument("parameter scan needs at least one Lambda sample");
    const ScanParameter p1 = parse_scan_parameter(axis1.name);
    const ScanParameter p2 = parse_scan_parameter(axis2.name);
    if (p1 == p2)
        throw std::invalid_argument("scan axes must be distinct");
    for (const auto p : {p1, p2})
        if ((p == ScanParameter::b || p == ScanParameter::c) && !model.brusselator)
            throw std::invalid_argument("axis '" + std::string(to_string(p)) + "' requires the Brusselator model");
    for (const auto& s : lambda_samples)
        if (!is_finite(s))
            throw std::invalid_argument("Lambda samples must be finite");

    const PointParams base{model.brusselator, model.jacobian, t_template, std::nullopt, std::nullopt};
    // Parameters enter linearly along each axis, so checking the corners
    // rejects any invalid range before the scan starts.
    for (const double v1 : {axis1.min, axis1.max}) {
        for (const double v2 : {axis2.min, axis2.max}) {
            PointParams corner = base;
            apply(corner, p1, v1);
            apply(corner, p2, v2);
            if (corner.brusselator)
                corner.brusselator->validate();
            finalize(corner);
        }
    }

    RegionMap map;
    map.axis1 = axis1;
    map.axis2 = axis2;
    auto add_context = [&](ScanParameter p, double v) {
        if (p != p1 && p != p2)
            map.context.emplace_back(std::string(to_string(p)), v);
    };
    if (model.brusselator) {
        add_context(ScanParameter::b, model.brusselator->b);
        add_context(ScanParameter::c, model.brusselator->c);
    } else {
        map.context.emplace_back("f_u", model.jacobian.f_u);
        map.context.emplace_back("f_v", model.jacobian.f_v);
        map.context.emplace_back("g_u", model.jacobian.g_u);
        map.context.emplace_back("g_v", model.jacobian.g_v);
    }
    add_context(ScanParameter::tau_u, t_template.tau_u);
    add_context(ScanParameter::tau_v, t_template.tau_v);
    add_context(ScanParameter::D_u, t_template.D_u);
    add_context(ScanParameter::D_v, t_template.D_v);
    for (std::size_t s = 0; s < lambda_samples.size(); ++s) {
        map.context.emplace_back("sample" + std::to_string(s) + "_re", lambda_samples[s].real());
        map.context.emplace_back("sample" + std::to_string(s) + "_im", lambda_samples[s].imag());
    }

    const int r1 = axis1.resolution, r2 = axis2.resolution;
    map.cells.resize(static_cast<std::size_t>(r1) * r2);
    parallel_rows(r1, options.threads, [&](int i) {
        for (int k = 0; k < r2; ++k) {
            PointParams point = base;
            apply(point, p1, axis1.value(i));
            apply(point, p2, axis2.value(k));
            finalize(point);

            RegionCell cell{true, std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
            for (const auto& sample : lambda_samples) {
                const Complex lambda{point.lambda_re.value_or(sample.real()), point.lambda_im.value_or(sample.imag())};
                const ModeVerdict m = mode_verdict(point.jacobian, point.transport, lambda);
                cell.stable = cell.stable && m.stable;
                cell.margin = std::min(cell.margin, m.rh_margin);
                cell.growth_rate = m.growth_rate ? std::max(cell.growth_rate, *m.growth_rate)
                                                 : std::numeric_limits<double>::quiet_NaN();
            }
            map.cells[static_cast<std::size_t>(i) * r2 + k] = cell;
        }
    });
    return map;
}

namespace {

void append_number(std::string& out, double x) {
    if (std::isnan(x)) {
        out += "nan";
        return;
    }
    if (std::isinf(x)) {
        out += x > 0 ? "inf" : "-inf";
        return;
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    out.append(buf, res.ptr);
}

double parse_double(std::string_view token, int line) {
    if (token == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    if (token == "inf")
        return std::numeric_limits<double>::infinity();
    if (token == "-inf")
        return -std::numeric_limits<double>::infinity();
    double v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw std::runtime_error("region CSV line " + std::to_string(line) + ": invalid number '" +
                                 std::string(token) + "'");
    return v;
}

}  // namespace

std::string write_region_csv(const RegionMap& map) {
    std::string out = "axis1,axis2,stable,margin,growth_rate\n";
    for (int i = 0; i < map.axis1.resolution; ++i) {
        for (int k = 0; k < map.axis2.resolution; ++k) {
            const auto& c = map.at(i, k);
            append_number(out, map.axis1.value(i));
            out += ',';
            append_number(out, map.axis2.value(k));
            out += c.stable ? ",1," : ",0,";
            append_number(out, c.margin);
            out += ',';
            append_number(out, c.growth_rate);
            out += '\n';
        }
    }
    return out;
}

RegionMap read_region_csv(std::string_view text) {
    struct Row {
        double x1, x2;
        RegionCell cell;
    };
    std::vector<Row> rows;
    int line_no = 0;
    bool header_seen = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line.empty())
            continue;
        if (!header_seen) {
            if (line != "axis1,axis2,stable,margin,growth_rate")
                throw std::runtime_error("region CSV line 1: unexpected header");
            header_seen = true;
            continue;
        }
        std::vector<std::string_view> f;
        std::size_t s = 0;
        while (true) {
            const auto comma = line.find(',', s);
            f.push_back(line.substr(s, comma == std::string_view::npos ? std::string_view::npos : comma - s));
            if (comma == std::string_view::npos)
                break;
            s = comma + 1;
        }
        if (f.size() != 5)
            throw std::runtime_error("region CSV line " + std::to_string(line_no) + ": expected 5 fields");
        if (f[2] != "0" && f[2] != "1")
            throw std::runtime_error("region CSV line " + std::to_string(line_no) + ": stable must be 0 or 1");
        rows.push_back({parse_double(f[0], line_no), parse_double(f[1], line_no),
                        {f[2] == "1", parse_double(f[3], line_no), parse_double(f[4], line_no)}});
    }
    if (!header_seen)
        throw std::runtime_error("region CSV is empty");

    int r2 = 0;
    while (r2 < static_cast<int>(rows.size()) && rows[r2].x1 == rows.front().x1)
        ++r2;
    if (r2 < 2 || rows.size() % r2 != 0 || rows.size() / r2 < 2)
        throw std::runtime_error("region CSV does not describe a rectangular grid");
    const int r1 = static_cast<int>(rows.size() / r2);

    RegionMap map;
    map.axis1 = {"axis1", rows.front().x1, rows[static_cast<std::size_t>(r1 - 1) * r2].x1, r1};
    map.axis2 = {"axis2", rows.front().x2, rows[r2 - 1].x2, r2};
    map.cells.reserve(rows.size());
    for (const auto& r : rows)
        map.cells.push_back(r.cell);
    return map;
}

std::string write_region_svg(const RegionMap& map, std::span<const SvgOverlay> overlays) {
    constexpr double width = 640, height = 480, pad_left = 70, pad_bottom = 50, pad_top = 20, pad_right = 20;
    const double plot_w = width - pad_left - pad_right;
    const double plot_h = height - pad_top - pad_bottom;
    const int r1 = map.axis1.resolution, r2 = map.axis2.resolution;
    const double cw = plot_w / r1, ch = plot_h / r2;

    auto sx = [&](double x) { return pad_left + (x - map.axis1.min) / (map.axis1.max - map.axis1.min) * plot_w; };
    auto sy = [&](double y) {
        return pad_top + plot_h - (y - map.axis2.min) / (map.axis2.max - map.axis2.min) * plot_h;
    };

    std::ostringstream os;
    os.precision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<g shape-rendering=\"crispEdges\">\n";
    for (int i = 0; i < r1; ++i) {
        for (int k = 0; k < r2; ++k) {
            const double x = pad_left + i * cw;
            const double y = pad_top + plot_h - (k + 1) * ch;
            os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cw + 0.05 << "\" height=\"" << ch + 0.05
               << "\" fill=\"" << (map.at(i, k).stable ? "#bfe3c0" : "#f2b8b5") << "\"/>\n";
        }
    }
    os << "</g>\n";
    os << "<rect x=\"" << pad_left << "\" y=\"" << pad_top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (const auto& ov : overlays) {
        for (const auto& [x, y] : ov.points) {
            if (x < map.axis1.min || x > map.axis1.max || y < map.axis2.min || y > map.axis2.max)
                continue;
            os << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"3\" fill=\"" << ov.color << "\"/>\n";
        }
    }
    os << "<text x=\"" << pad_left + plot_w / 2 << "\" y=\"" << height - 12
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << map.axis1.name << "</text>\n";
    os << "<text x=\"18\" y=\"" << pad_top + plot_h / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"14\" transform=\"rotate(-90 18 "
       << pad_top + plot_h / 2 << ")\">" << map.axis2.name << "</text>\n";
    auto tick = [&](double x, double y, double value, const char* anchor) {
        os << "<text x=\"" << x << "\" y=\"" << y << "\" text-anchor=\"" << anchor
           << "\" font-family=\"sans-serif\" font-size=\"11\">" << value << "</text>\n";
    };
    tick(pad_left, pad_top + plot_h + 16, map.axis1.min, "start");
    tick(pad_left + plot_w, pad_top + plot_h + 16, map.axis1.max, "end");
    tick(pad_left - 6, pad_top + plot_h, map.axis2.min, "end");
    tick(pad_left - 6, pad_top + 10, map.axis2.max, "end");
    double legend_y = pad_top + 14;
    for (const auto& ov : overlays) {
        if (ov.label.empty())
            continue;
        os << "<circle cx=\"" << pad_left + plot_w - 120 << "\" cy=\"" << legend_y - 4 << "\" r=\"4\" fill=\""
           << ov.color << "\"/>\n";
        os << "<text x=\"" << pad_left + plot_w - 110 << "\" y=\"" << legend_y
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << ov.label << "</text>\n";
        legend_y += 16;
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace hyperstab
