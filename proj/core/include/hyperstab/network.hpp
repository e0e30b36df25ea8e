#pragma once

/**
 * Directed networks and their Laplacian spectra.
 *
 * Orientation: A(i, j) > 0 means an edge from node j into node i. With
 * L = A - diag(in-strength) every row of L sums to zero, so the all-ones
 * vector is a right eigenvector with eigenvalue 0.
 */

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hyperstab/polynomial.hpp"

namespace hyperstab {

/// Square, nonnegative, zero diagonal, finite.
class AdjacencyMatrix {
public:
    explicit AdjacencyMatrix(int n);
    explicit AdjacencyMatrix(Eigen::MatrixXd entries);

    [[nodiscard]] int size() const { return static_cast<int>(entries_.rows()); }
    [[nodiscard]] const Eigen::MatrixXd& entries() const { return entries_; }

    /// Weight of the edge src -> dst, i.e. A(dst, src).
    [[nodiscard]] double edge(int src, int dst) const { return entries_(dst, src); }
    void set_edge(int src, int dst, double weight);

    [[nodiscard]] Eigen::VectorXd in_strength() const { return entries_.rowwise().sum(); }
    [[nodiscard]] int edge_count() const;

    friend bool operator==(const AdjacencyMatrix& lhs, const AdjacencyMatrix& rhs) {
        return lhs.entries_ == rhs.entries_;
    }

private:
    Eigen::MatrixXd entries_;
};

class DirectedLaplacian {
public:
    [[nodiscard]] int size() const { return static_cast<int>(entries_.rows()); }
    [[nodiscard]] const Eigen::MatrixXd& entries() const { return entries_; }

    /// Wraps an explicit matrix; checks zero row sums and sign pattern.
    static DirectedLaplacian from_matrix(Eigen::MatrixXd entries);

private:
    friend DirectedLaplacian directed_laplacian(const AdjacencyMatrix& a);
    explicit DirectedLaplacian(Eigen::MatrixXd entries) : entries_(std::move(entries)) {}
    Eigen::MatrixXd entries_;
};

/// Eigenvalues sorted by descending real part, ties by descending imaginary part.
struct LaplacianSpectrum {
    std::vector<Complex> eigenvalues;
};

class EigenSolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

[[nodiscard]] DirectedLaplacian directed_laplacian(const AdjacencyMatrix& a);

/// Dense non-symmetric eigensolve (Hessenberg reduction + shifted QR).
[[nodiscard]] LaplacianSpectrum spectrum(const DirectedLaplacian& l);

/// Sort order used by LaplacianSpectrum.
void sort_spectrum(std::vector<Complex>& eigenvalues);

/// Left null vector w of L (w^T L = 0) scaled so that sum(w) = 1.
/// Falls back to the uniform vector when no such scaling exists.
[[nodiscard]] Eigen::VectorXd homogeneous_left_vector(const DirectedLaplacian& l);

/// Strong connectivity of the directed graph underlying A.
[[nodiscard]] bool is_strongly_connected(const AdjacencyMatrix& a);

/**
 * Directed Newman-Watts network.
 *
 * Ring substrate: node i sends an edge to each of i+1, ..., i+k (mod n).
 * Then for every ordered pair (src, dst), src != dst, without a ring edge,
 * in order src = 0..n-1, dst = 0..n-1, a shortcut src -> dst is added with
 * probability p. All weights are 1.
 */
[[nodiscard]] AdjacencyMatrix newman_watts_directed(int n, int k, double p, std::uint64_t seed);

/// (A + A^T) / 2
[[nodiscard]] AdjacencyMatrix symmetrize(const AdjacencyMatrix& a);

/// Parse or format failure in the edge-list text format; `line` is 1-based, 0 if not tied to a line.
class EdgeListError : public std::runtime_error {
public:
    EdgeListError(int line, const std::string& message, const std::string& source = {});
    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] const std::string& detail() const { return detail_; }

private:
    int line_;
    std::string detail_;
};

/**
 * Edge-list text format:
 *
 *     n=<count>            optional header; otherwise n = 1 + max index
 *     <src> <dst> <weight> one edge per line, 0-based indices
 *     # comment            full-line or trailing
 *
 * Weights must be positive. They are written in shortest round-trip form,
 * so reading back reproduces every double exactly. Duplicate edges and
 * self-loops are rejected.
 */
[[nodiscard]] AdjacencyMatrix read_edge_list(std::string_view text);
[[nodiscard]] std::string write_edge_list(const AdjacencyMatrix& a);

[[nodiscard]] AdjacencyMatrix read_edge_list_file(const std::string& path);
void write_edge_list_file(const AdjacencyMatrix& a, const std::string& path);

}  // namespace hyperstab
