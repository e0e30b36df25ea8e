#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace hyperstab::cli {

ConfigError::ConfigError(const std::string& message, int line)
    : std::runtime_error(line > 0 ? "config line " + std::to_string(line) + ": " + message : "config: " + message),
      line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool is_identifier(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    });
}

double to_double(std::string_view s, int line, std::string_view key) {
    double x = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(x))
        throw ConfigError("'" + std::string(key) + "' expects a finite number, got '" + std::string(s) + "'", line);
    return x;
}

template <typename Int>
Int to_integer(std::string_view s, int line, std::string_view key) {
    Int x = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ConfigError("'" + std::string(key) + "' expects an integer, got '" + std::string(s) + "'", line);
    return x;
}

/// Reads one section, rejecting keys outside `allowed`.
class SectionReader {
public:
    SectionReader(const IniDocument& doc, const std::string& name, std::set<std::string> allowed)
        : name_(name), values_(doc.sections.at(name)), line_(doc.section_lines.at(name)) {
        for (const auto& [key, value] : values_)
            if (!allowed.contains(key))
                throw ConfigError("unknown key '" + key + "' in [" + name + "]", value.line);
    }

    [[nodiscard]] bool has(const std::string& key) const { return values_.contains(key); }
    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] int line_of(const std::string& key) const { return has(key) ? values_.at(key).line : line_; }

    [[nodiscard]] const IniValue& require(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end())
            throw ConfigError("[" + name_ + "] is missing '" + key + "'", line_);
        return it->second;
    }

    [[nodiscard]] double number(const std::string& key) const {
        const auto& v = require(key);
        return to_double(v.text, v.line, key);
    }
    void number(const std::string& key, double& out) const {
        if (has(key))
            out = number(key);
    }
    template <typename Int>
    void integer(const std::string& key, Int& out) const {
        if (has(key)) {
            const auto& v = values_.at(key);
            out = to_integer<Int>(v.text, v.line, key);
        }
    }
    void text(const std::string& key, std::string& out) const {
        if (has(key))
            out = values_.at(key).text;
    }
    void boolean(const std::string& key, bool& out) const {
        if (!has(key))
            return;
        const auto& v = values_.at(key);
        if (v.text == "true")
            out = true;
        else if (v.text == "false")
            out = false;
        else
            throw ConfigError("'" + key + "' expects true or false", v.line);
    }

    /// Runs `check`; any invalid_argument becomes a ConfigError at the section header.
    template <typename F>
    void validate(F&& check) const {
        try {
            check();
        } catch (const std::invalid_argument& e) {
            throw ConfigError("[" + name_ + "] " + e.what(), line_);
        }
    }

private:
    std::string name_;
    const std::map<std::string, IniValue>& values_;
    int line_;
};

ModelSection read_model(const IniDocument& doc) {
    const SectionReader r(doc, "model", {"name", "b", "c", "f_u", "f_v", "g_u", "g_v"});
    ModelSection m;
    const auto& name = r.require("name");
    if (name.text == "brusselator") {
        m.kind = ModelSection::Kind::brusselator;
        m.brusselator = {r.number("b"), r.number("c")};
        r.validate([&] { m.brusselator.validate(); });
    } else if (name.text == "jacobian") {
        m.kind = ModelSection::Kind::jacobian;
        m.jacobian = {r.number("f_u"), r.number("f_v"), r.number("g_u"), r.number("g_v")};
    } else {
        throw ConfigError("model name must be 'brusselator' or 'jacobian', got '" + name.text + "'", name.line);
    }
    return m;
}

TransportParams read_transport(const IniDocument& doc) {
    const SectionReader r(doc, "transport", {"D_u", "D_v", "tau_u", "tau_v"});
    TransportParams t{r.number("D_u"), r.number("D_v"), r.number("tau_u"), r.number("tau_v")};
    r.validate([&] { t.validate(); });
    return t;
}

NetworkSection read_network(const IniDocument& doc, const std::filesystem::path& base_dir) {
    const SectionReader r(doc, "network", {"generator", "n", "k", "p", "seed", "path", "symmetrize"});
    NetworkSection s;
    const auto& gen = r.require("generator");
    if (gen.text == "newman_watts") {
        s.generator = NetworkSection::Generator::newman_watts;
        r.integer("n", s.n);
        r.integer("k", s.k);
        r.number("p", s.p);
        r.integer("seed", s.seed);
        if (!(s.n >= 3 && s.k >= 1 && s.k < s.n && s.p >= 0.0 && s.p <= 1.0))
            throw ConfigError("[network] newman_watts needs n >= 3, 1 <= k < n and 0 <= p <= 1", r.line());
    } else if (gen.text == "edge_list") {
        s.generator = NetworkSection::Generator::edge_list;
        const auto& path = r.require("path");
        s.path = std::filesystem::path(path.text);
        if (s.path.is_relative())
            s.path = base_dir / s.path;
        if (!std::filesystem::exists(s.path))
            throw ConfigError("edge list '" + s.path.string() + "' does not exist", path.line);
    } else {
        throw ConfigError("generator must be 'newman_watts' or 'edge_list', got '" + gen.text + "'", gen.line);
    }
    r.boolean("symmetrize", s.symmetrize);
    return s;
}

void read_axis(const SectionReader& r, const std::string& prefix, AxisSpec& axis) {
    if (r.has(prefix)) {
        const auto& v = r.require(prefix);
        try {
            (void)parse_scan_parameter(v.text);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what(), v.line);
        }
        axis.name = v.text;
    }
    r.number(prefix + "_min", axis.min);
    r.number(prefix + "_max", axis.max);
    r.integer(prefix + "_resolution", axis.resolution);
}

ScanSection read_scan(const IniDocument& doc) {
    const SectionReader r(doc, "scan",
                          {"preset", "axis1", "axis1_min", "axis1_max", "axis1_resolution", "axis2", "axis2_min",
                           "axis2_max", "axis2_resolution", "resolution", "lambda", "threads"});
    ScanSection s;
    if (r.has("preset")) {
        const auto& v = r.require("preset");
        try {
            s = scan_preset(v.text);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what(), v.line);
        }
    }
    if (r.has("resolution")) {
        int res = 0;
        r.integer("resolution", res);
        s.axis1.resolution = s.axis2.resolution = res;
    }
    read_axis(r, "axis1", s.axis1);
    read_axis(r, "axis2", s.axis2);
    // An explicit minimum pins the range; otherwise it may widen to fit the spectrum.
    s.auto_re_min = s.axis1.name == "Lambda_Re" && !r.has("axis1_min");
    r.validate([&] {
        s.axis1.validate();
        s.axis2.validate();
    });
    if (r.has("lambda")) {
        const auto& v = r.require("lambda");
        s.samples.clear();
        s.use_network = false;
        if (v.text == "network") {
            s.use_network = true;
        } else {
            std::string_view rest = v.text;
            while (!rest.empty()) {
                const auto comma = rest.find(',');
                const auto item = trim(rest.substr(0, comma));
                try {
                    s.samples.push_back(parse_complex(item));
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(e.what(), v.line);
                }
                rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
            }
        }
    }
    r.integer("threads", s.threads);
    return s;
}

SimSection read_sim(const IniDocument& doc) {
    const SectionReader r(doc, "sim", {"dt", "horizon", "amplitude", "seed", "skip_fraction", "sample_interval",
                                       "growth_ceiling", "decay_floor"});
    SimSection s;
    r.number("dt", s.dt);
    r.number("horizon", s.horizon);
    r.number("amplitude", s.amplitude);
    r.integer("seed", s.seed);
    r.number("skip_fraction", s.skip_fraction);
    r.number("sample_interval", s.sample_interval);
    r.number("growth_ceiling", s.growth_ceiling);
    r.number("decay_floor", s.decay_floor);
    if (s.dt < 0)
        throw ConfigError("dt must be nonnegative (0 selects the default)", r.line_of("dt"));
    if (!(s.horizon > 0))
        throw ConfigError("horizon must be positive", r.line_of("horizon"));
    if (!(s.amplitude > 0))
        throw ConfigError("amplitude must be positive", r.line_of("amplitude"));
    if (!(s.skip_fraction >= 0 && s.skip_fraction < 1))
        throw ConfigError("skip_fraction must lie in [0, 1)", r.line_of("skip_fraction"));
    if (!(s.sample_interval > 0))
        throw ConfigError("sample_interval must be positive", r.line_of("sample_interval"));
    if (!(s.decay_floor > 0 && s.growth_ceiling > s.decay_floor))
        throw ConfigError("need 0 < decay_floor < growth_ceiling", r.line());
    return s;
}

}  // namespace

IniDocument parse_ini(std::string_view text) {
    IniDocument doc;
    std::string current;
    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("unterminated section header", line_no);
            const auto name = trim(line.substr(1, line.size() - 2));
            if (!is_identifier(name))
                throw ConfigError("invalid section name '" + std::string(name) + "'", line_no);
            current = name;
            if (doc.sections.contains(current))
                throw ConfigError("duplicate section [" + current + "]", line_no);
            doc.sections[current];
            doc.section_lines[current] = line_no;
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("expected 'key = value'", line_no);
        if (current.empty())
            throw ConfigError("key outside of any section", line_no);
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!is_identifier(key))
            throw ConfigError("invalid key '" + key + "'", line_no);
        if (value.empty())
            throw ConfigError("empty value for '" + key + "'", line_no);
        auto& section = doc.sections[current];
        if (section.contains(key))
            throw ConfigError("duplicate key '" + key + "' in [" + current + "]", line_no);
        section[key] = {value, line_no};
    }
    return doc;
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    const IniDocument doc = parse_ini(text);
    static const std::set<std::string> known{"model", "transport", "network", "scan", "sim"};
    for (const auto& [name, line] : doc.section_lines)
        if (!known.contains(name))
            throw ConfigError("unknown section [" + name + "]", line);

    RunConfig cfg;
    if (doc.has("model"))
        cfg.model = read_model(doc);
    if (doc.has("transport"))
        cfg.transport = read_transport(doc);
    if (doc.has("network"))
        cfg.network = read_network(doc, base_dir);
    if (doc.has("scan"))
        cfg.scan = read_scan(doc);
    if (doc.has("sim"))
        cfg.sim = read_sim(doc);
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

Complex parse_complex(std::string_view text) {
    const std::string original(text);
    auto fail = [&] { return std::invalid_argument("invalid complex number '" + original + "'"); };
    if (text.empty())
        throw fail();
    if (text.back() != 'i') {
        double re = 0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), re);
        if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
            throw fail();
        return {re, 0.0};
    }
    text.remove_suffix(1);
    // Split at the last sign that is not the leading one and not an exponent sign.
    std::size_t split = 0;
    for (std::size_t k = text.size(); k-- > 1;) {
        if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    double re = 0, im = 0;
    std::string_view im_text = text.substr(split);
    if (split > 0) {
        const auto re_text = text.substr(0, split);
        const auto res = std::from_chars(re_text.data(), re_text.data() + re_text.size(), re);
        if (res.ec != std::errc{} || res.ptr != re_text.data() + re_text.size())
            throw fail();
    }
    if (!im_text.empty() && im_text.front() == '+')
        im_text.remove_prefix(1);
    if (im_text.empty() || im_text == "-") {
        im = im_text.empty() ? 1.0 : -1.0;
    } else {
        const auto res = std::from_chars(im_text.data(), im_text.data() + im_text.size(), im);
        if (res.ec != std::errc{} || res.ptr != im_text.data() + im_text.size())
            throw fail();
    }
    if (!std::isfinite(re) || !std::isfinite(im))
        throw fail();
    return {re, im};
}

ScanSection scan_preset(std::string_view name) {
    ScanSection s;
    s.preset = name;
    if (name == "fig2") {
        // Stability region in the Lambda plane; spectrum overlay when a network is configured.
        s.axis1 = {"Lambda_Re", -6.0, 0.0, 121};
        s.axis2 = {"Lambda_Im", -3.0, 3.0, 121};
        s.use_network = true;
    } else if (name == "fig3a") {
        // Symmetric coupling only: real Lambda samples; instability appears at large tau_v.
        s.axis1 = {"tau_u", 0.5, 5.0, 91};
        s.axis2 = {"tau_v", 0.5, 20.0, 79};
        s.samples = {-0.25, -0.5, -1.0, -2.0, -4.0, -8.0};
    } else if (name == "fig3b") {
        s.axis1 = {"b", 0.5, 3.0, 51};
        s.axis2 = {"Lambda_Im", 0.0, 3.0, 61};
        s.samples = {Complex{-1.5, 0.0}};
    } else if (name == "fig3c") {
        s.axis1 = {"tau_u", 1.0, 5.0, 81};
        s.axis2 = {"Lambda_Im", 0.0, 3.0, 61};
        s.samples = {Complex{-1.5, 0.0}};
    } else if (name == "fig3d") {
        s.axis1 = {"D_u", 0.05, 2.0, 79};
        s.axis2 = {"Lambda_Im", 0.0, 3.0, 61};
        s.samples = {Complex{-1.5, 0.0}};
    } else {
        throw std::invalid_argument("unknown scan preset '" + std::string(name) + "' (expected fig2, fig3a, fig3b, "
                                    "fig3c or fig3d)");
    }
    return s;
}

std::vector<std::string> scan_preset_names() { return {"fig2", "fig3a", "fig3b", "fig3c", "fig3d"}; }

ReactionModel ModelSection::reaction_model() const {
    if (kind == Kind::brusselator)
        return hyperstab::brusselator(brusselator);
    const JacobianEntries j = jacobian;
    ReactionModel m;
    m.name = "linear";
    m.f = [j](double u, double v) { return j.f_u * u + j.f_v * v; };
    m.g = [j](double u, double v) { return j.g_u * u + j.g_v * v; };
    m.jacobian = j;
    return m;
}

JacobianEntries ModelSection::jacobian_entries() const {
    return kind == Kind::brusselator ? brusselator_jacobian(brusselator) : jacobian;
}

ScanModel ModelSection::scan_model() const {
    return kind == Kind::brusselator ? ScanModel::from_brusselator(brusselator) : ScanModel::from_jacobian(jacobian);
}

AdjacencyMatrix NetworkSection::build() const {
    AdjacencyMatrix a = generator == Generator::newman_watts ? newman_watts_directed(n, k, p, seed)
                                                             : read_edge_list_file(path.string());
    return symmetrize ? hyperstab::symmetrize(a) : a;
}

namespace {

template <typename T>
const T& require_section(const std::optional<T>& s, const char* name) {
    if (!s)
        throw ConfigError(std::string("missing [") + name + "] section");
    return *s;
}

}  // namespace

const ModelSection& RunConfig::require_model() const { return require_section(model, "model"); }
const TransportParams& RunConfig::require_transport() const { return require_section(transport, "transport"); }
const NetworkSection& RunConfig::require_network() const { return require_section(network, "network"); }
const ScanSection& RunConfig::require_scan() const { return require_section(scan, "scan"); }
const SimSection& RunConfig::require_sim() const { return require_section(sim, "sim"); }

}  // namespace hyperstab::cli
