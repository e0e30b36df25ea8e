#include "hyperstab/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "hyperstab/random.hpp"

namespace hyperstab {

namespace {

void check_adjacency(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("adjacency matrix must be square");
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double w = m(i, j);
            if (!std::isfinite(w) || w < 0.0)
                throw std::invalid_argument("adjacency entries must be finite and nonnegative");
            if (i == j && w != 0.0)
                throw std::invalid_argument("adjacency matrix must have a zero diagonal (no self-loops)");
        }
    }
}

}  // namespace

AdjacencyMatrix::AdjacencyMatrix(int n) {
    if (n < 1)
        throw std::invalid_argument("network needs at least one node");
    entries_ = Eigen::MatrixXd::Zero(n, n);
}

AdjacencyMatrix::AdjacencyMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    if (entries_.rows() < 1)
        throw std::invalid_argument("network needs at least one node");
    check_adjacency(entries_);
}

void AdjacencyMatrix::set_edge(int src, int dst, double weight) {
    if (src < 0 || dst < 0 || src >= size() || dst >= size())
        throw std::out_of_range("edge endpoint out of range");
    if (src == dst)
        throw std::invalid_argument("self-loops are not allowed");
    if (!std::isfinite(weight) || weight < 0.0)
        throw std::invalid_argument("edge weight must be finite and nonnegative");
    entries_(dst, src) = weight;
}

int AdjacencyMatrix::edge_count() const {
    return static_cast<int>((entries_.array() > 0.0).count());
}

DirectedLaplacian directed_laplacian(const AdjacencyMatrix& a) {
    Eigen::MatrixXd l = a.entries();
    const Eigen::VectorXd strength = a.in_strength();
    l.diagonal() = -strength;
    return DirectedLaplacian(std::move(l));
}

DirectedLaplacian DirectedLaplacian::from_matrix(Eigen::MatrixXd entries) {
    if (entries.rows() != entries.cols() || entries.rows() < 1)
        throw std::invalid_argument("Laplacian must be a nonempty square matrix");
    if (!entries.allFinite())
        throw std::invalid_argument("Laplacian entries must be finite");
    const double n = static_cast<double>(entries.rows());
    for (Eigen::Index i = 0; i < entries.rows(); ++i) {
        double scale = 0.0;
        for (Eigen::Index j = 0; j < entries.cols(); ++j) {
            if (i != j && entries(i, j) < 0.0)
                throw std::invalid_argument("Laplacian off-diagonal entries must be nonnegative");
            scale = std::max(scale, std::abs(entries(i, j)));
        }
        if (entries(i, i) > 0.0)
            throw std::invalid_argument("Laplacian diagonal entries must be nonpositive");
        if (std::abs(entries.row(i).sum()) > 1e-12 * n * std::max(1.0, scale))
            throw std::invalid_argument("Laplacian rows must sum to zero");
    }
    return DirectedLaplacian(std::move(entries));
}

void sort_spectrum(std::vector<Complex>& eigenvalues) {
    std::sort(eigenvalues.begin(), eigenvalues.end(), [](const Complex& x, const Complex& y) {
        if (x.real() != y.real())
            return x.real() > y.real();
        return x.imag() > y.imag();
    });
}

LaplacianSpectrum spectrum(const DirectedLaplacian& l) {
    const auto& m = l.entries();
    LaplacianSpectrum out;
    if (m.rows() == 1) {
        out.eigenvalues = {Complex{m(0, 0), 0.0}};
        return out;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw EigenSolverError("Laplacian eigensolver did not converge");
    const auto& ev = solver.eigenvalues();
    out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    sort_spectrum(out.eigenvalues);
    return out;
}

Eigen::VectorXd homogeneous_left_vector(const DirectedLaplacian& l) {
    const auto& m = l.entries();
    const Eigen::Index n = m.rows();
    Eigen::VectorXd uniform = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    if (n == 1)
        return uniform;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.transpose(), Eigen::ComputeFullV);
    Eigen::VectorXd w = svd.matrixV().col(n - 1);
    const double total = w.sum();
    if (std::abs(total) < 1e-8 * w.lpNorm<1>())
        return uniform;
    return w / total;
}

bool is_strongly_connected(const AdjacencyMatrix& a) {
    const int n = a.size();
    const auto& m = a.entries();
    auto reaches_all = [&](bool forward) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int u = 0; u < n; ++u) {
                // forward: follow edges v -> u, stored at m(u, v)
                const double w = forward ? m(u, v) : m(v, u);
                if (w > 0.0 && !seen[u]) {
                    seen[u] = 1;
                    ++count;
                    stack.push_back(u);
                }
            }
        }
        return count == n;
    };
    return reaches_all(true) && reaches_all(false);
}

AdjacencyMatrix newman_watts_directed(int n, int k, double p, std::uint64_t seed) {
    if (n < 3)
        throw std::invalid_argument("Newman-Watts network needs n >= 3");
    if (k < 1 || k >= n)
        throw std::invalid_argument("Newman-Watts ring degree k must satisfy 1 <= k < n");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("Newman-Watts shortcut probability must lie in [0, 1]");

    AdjacencyMatrix a(n);
    for (int src = 0; src < n; ++src)
        for (int m = 1; m <= k; ++m)
            a.set_edge(src, (src + m) % n, 1.0);

    Rng rng(seed);
    for (int src = 0; src < n; ++src) {
        for (int dst = 0; dst < n; ++dst) {
            if (src == dst || a.edge(src, dst) > 0.0)
                continue;
            if (uniform01(rng) < p)
                a.set_edge(src, dst, 1.0);
        }
    }
    return a;
}

AdjacencyMatrix symmetrize(const AdjacencyMatrix& a) {
    const auto& m = a.entries();
    return AdjacencyMatrix(Eigen::MatrixXd(0.5 * (m + m.transpose())));
}

EdgeListError::EdgeListError(int line, const std::string& message, const std::string& source)
    : std::runtime_error((source.empty() ? std::string{} : source + ": ") +
                         (line > 0 ? "line " + std::to_string(line) + ": " : std::string{}) + message),
      line_(line),
      detail_(message) {}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
            ++i;
        if (i >= s.size())
            break;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t')
            ++j;
        out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

template <typename T>
bool parse_number(std::string_view token, T& value) {
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    return ec == std::errc{} && ptr == end;
}

struct ParsedEdge {
    int src, dst;
    double weight;
    int line;
};

}  // namespace

AdjacencyMatrix read_edge_list(std::string_view text) {
    std::optional<int> declared_n;
    std::vector<ParsedEdge> edges;
    int line_no = 0;
    bool seen_content = false;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        if (line.starts_with("n=") || line.starts_with("n =")) {
            if (seen_content)
                throw EdgeListError(line_no, "header n=<count> must precede all edges");
            const auto value = trim(line.substr(line.find('=') + 1));
            int n = 0;
            if (!parse_number(value, n) || n < 1)
                throw EdgeListError(line_no, "invalid node count '" + std::string(value) + "'");
            declared_n = n;
            seen_content = true;
            continue;
        }
        seen_content = true;

        const auto tokens = split_whitespace(line);
        if (tokens.size() != 3)
            throw EdgeListError(line_no, "expected '<src> <dst> <weight>', got " + std::to_string(tokens.size()) +
                                             " fields");
        ParsedEdge e{0, 0, 0.0, line_no};
        if (!parse_number(tokens[0], e.src) || e.src < 0)
            throw EdgeListError(line_no, "invalid source index '" + std::string(tokens[0]) + "'");
        if (!parse_number(tokens[1], e.dst) || e.dst < 0)
            throw EdgeListError(line_no, "invalid destination index '" + std::string(tokens[1]) + "'");
        if (!parse_number(tokens[2], e.weight) || !std::isfinite(e.weight) || e.weight <= 0.0)
            throw EdgeListError(line_no, "invalid weight '" + std::string(tokens[2]) + "' (must be positive)");
        if (e.src == e.dst)
            throw EdgeListError(line_no, "self-loop on node " + std::to_string(e.src));
        if (declared_n && (e.src >= *declared_n || e.dst >= *declared_n))
            throw EdgeListError(line_no, "node index out of range for n=" + std::to_string(*declared_n));
        edges.push_back(e);
    }

    int n = declared_n.value_or(0);
    if (!declared_n) {
        for (const auto& e : edges)
            n = std::max({n, e.src + 1, e.dst + 1});
        if (n == 0)
            throw EdgeListError(0, "empty edge list without an n=<count> header");
    }

    AdjacencyMatrix a(n);
    for (const auto& e : edges) {
        if (a.edge(e.src, e.dst) > 0.0)
            throw EdgeListError(e.line, "duplicate edge " + std::to_string(e.src) + " -> " + std::to_string(e.dst));
        a.set_edge(e.src, e.dst, e.weight);
    }
    return a;
}

std::string write_edge_list(const AdjacencyMatrix& a) {
    std::string out = "n=" + std::to_string(a.size()) + "\n";
    char buf[64];
    for (int src = 0; src < a.size(); ++src) {
        for (int dst = 0; dst < a.size(); ++dst) {
            const double w = a.edge(src, dst);
            if (w <= 0.0)
                continue;
            const auto res = std::to_chars(buf, buf + sizeof buf, w);
            out += std::to_string(src);
            out += ' ';
            out += std::to_string(dst);
            out += ' ';
            out.append(buf, res.ptr);
            out += '\n';
        }
    }
    return out;
}

AdjacencyMatrix read_edge_list_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw EdgeListError(0, "cannot open edge list", path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return read_edge_list(ss.str());
    } catch (const EdgeListError& e) {
        throw EdgeListError(e.line(), e.detail(), path);
    }
}

void write_edge_list_file(const AdjacencyMatrix& a, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write edge list '" + path + "'");
    out << write_edge_list(a);
}

}  // namespace hyperstab
