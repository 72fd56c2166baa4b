#ifndef HYPERMET_METRIC_CORE_HPP
#define HYPERMET_METRIC_CORE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hypermet/errors.hpp"

namespace hypermet {

/// Result of checking the metric axioms on a square matrix.  `violation` in
/// `worst_triple` is tolerance-adjusted: the amount by which the worst triple
/// exceeds d(i,k) + d(k,j) + tol_rel * scale, so violation <= 0 iff
/// triangle_ok.
struct ValidationReport {
    bool symmetric = true;
    bool triangle_ok = true;
    bool positive_offdiag = true;
    struct Triple {
        std::size_t i = 0, j = 0, k = 0;
        double violation = -1.0;
    } worst_triple;

    bool ok() const { return symmetric && triangle_ok && positive_offdiag; }
};

/// Immutable, validated finite metric space: labeled symmetric matrix of
/// pairwise distances.  All mutation happens in the factory functions, so a
/// constructed matrix is safe to share across concurrent readers.
class DistanceMatrix {
public:
    static constexpr double default_tol_rel = 1e-9;

    /// Validates and builds.  Symmetrization is not silent: asymmetry beyond
    /// tol_rel * scale is an error; within tolerance, entries are replaced by
    /// the pair average so d(i,j) == d(j,i) exactly.
    static DistanceMatrix build(std::vector<std::string> labels,
                                const std::vector<std::vector<double>>& entries,
                                double tol_rel = default_tol_rel) {
        const std::size_t n = labels.size();
        if (entries.size() != n)
            throw Error(errc::non_square, "entry rows (" + std::to_string(entries.size()) +
                                              ") do not match label count (" + std::to_string(n) + ")");
        for (const auto& row : entries)
            if (row.size() != n)
                throw Error(errc::non_square, "row length " + std::to_string(row.size()) +
                                                  " in a " + std::to_string(n) + "-point matrix");
        std::vector<double> flat(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) flat[i * n + j] = entries[i][j];
        return build_flat(std::move(labels), std::move(flat), tol_rel);
    }

    /// Same as build(), taking a row-major n*n buffer.
    static DistanceMatrix build_flat(std::vector<std::string> labels, std::vector<double> flat,
                                     double tol_rel = default_tol_rel) {
        const std::size_t n = labels.size();
        if (flat.size() != n * n) throw Error(errc::non_square, "flat buffer is not n*n");
        check_labels(labels);

        for (std::size_t i = 0; i < n * n; ++i) {
            if (!std::isfinite(flat[i]))
                throw Error(errc::non_finite_entry, "entry at flat index " + std::to_string(i));
            if (flat[i] < 0.0)
                throw Error(errc::negative_entry, "entry (" + std::to_string(i / n) + "," +
                                                      std::to_string(i % n) + ") = " +
                                                      std::to_string(flat[i]));
        }
        const double scale = n ? *std::max_element(flat.begin(), flat.end()) : 0.0;
        const double tol = tol_rel * scale;

        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double a = flat[i * n + j], b = flat[j * n + i];
                if (std::abs(a - b) > tol)
                    throw Error(errc::asymmetric, "d(" + labels[i] + "," + labels[j] + ") = " +
                                                      std::to_string(a) + " vs " + std::to_string(b));
                const double v = 0.5 * (a + b);
                flat[i * n + j] = flat[j * n + i] = v;
            }
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(flat[i * n + i]) > tol)
                throw Error(errc::nonzero_diagonal,
                            "d(" + labels[i] + "," + labels[i] + ") = " + std::to_string(flat[i * n + i]));
            flat[i * n + i] = 0.0;
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (flat[i * n + j] <= 0.0)
                    throw Error(errc::zero_off_diagonal,
                                "d(" + labels[i] + "," + labels[j] + ") = 0; duplicate points are rejected");

        ValidationReport rep = check_triangles(flat, n, tol);
        if (!rep.triangle_ok) {
            const auto& w = rep.worst_triple;
            throw Error(errc::triangle_violation,
                        "d(" + labels[w.i] + "," + labels[w.j] + ") exceeds the path through " +
                            labels[w.k] + " by " + std::to_string(w.violation));
        }
        return DistanceMatrix(std::move(labels), std::move(flat), tol_rel);
    }

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    double tol_rel() const { return tol_rel_; }
    const std::vector<double>& data() const { return d_; }

    double operator()(std::size_t i, std::size_t j) const { return d_[i * size() + j]; }

    double at(std::size_t i, std::size_t j) const {
        if (i >= size() || j >= size())
            throw Error(errc::index_out_of_range, std::to_string(std::max(i, j)));
        return (*this)(i, j);
    }

    /// Largest entry; the scale against which relative tolerances are taken.
    double max_entry() const {
        return d_.empty() ? 0.0 : *std::max_element(d_.begin(), d_.end());
    }

    /// Principal submatrix over `subset`, labels carried along.  Validation is
    /// inherited: a principal submatrix of a metric is a metric.
    DistanceMatrix restrict_to(std::span<const std::size_t> subset) const {
        if (subset.empty()) throw Error(errc::empty_subset, "subset must contain at least one index");
        const std::size_t n = size(), m = subset.size();
        std::unordered_set<std::size_t> seen;
        for (std::size_t idx : subset) {
            if (idx >= n) throw Error(errc::index_out_of_range, std::to_string(idx));
            if (!seen.insert(idx).second) throw Error(errc::duplicate_index, std::to_string(idx));
        }
        std::vector<std::string> labels(m);
        std::vector<double> flat(m * m);
        for (std::size_t a = 0; a < m; ++a) {
            labels[a] = labels_[subset[a]];
            for (std::size_t b = 0; b < m; ++b) flat[a * m + b] = (*this)(subset[a], subset[b]);
        }
        return DistanceMatrix(std::move(labels), std::move(flat), tol_rel_);
    }

    DistanceMatrix restrict_to(const std::vector<std::size_t>& subset) const {
        return restrict_to(std::span<const std::size_t>(subset));
    }

    /// All distances multiplied by s > 0 (a similarity of the space).
    DistanceMatrix scaled(double s) const {
        if (!(s > 0.0)) throw Error(errc::invalid_argument, "scale factor must be positive");
        std::vector<double> flat(d_);
        for (double& v : flat) v *= s;
        return DistanceMatrix(labels_, std::move(flat), tol_rel_);
    }

    /// Re-checks the axioms on the stored entries (used on re-load).
    ValidationReport validate() const {
        return check_triangles(d_, size(), tol_rel_ * max_entry());
    }

    /// Axiom check on raw entries without throwing; `worst_triple.violation`
    /// is relative to the tolerance tol_rel * max entry.
    static ValidationReport validate_entries(const std::vector<std::vector<double>>& entries,
                                             double tol_rel = default_tol_rel) {
        ValidationReport rep;
        const std::size_t n = entries.size();
        for (const auto& row : entries)
            if (row.size() != n) {
                rep.symmetric = rep.triangle_ok = rep.positive_offdiag = false;
                return rep;
            }
        double scale = 0.0;
        for (const auto& row : entries)
            for (double v : row) scale = std::max(scale, std::abs(v));
        const double tol = tol_rel * scale;
        std::vector<double> flat(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                flat[i * n + j] = entries[i][j];
                if (!std::isfinite(entries[i][j])) rep.positive_offdiag = false;
            }
        for (std::size_t i = 0; i < n && rep.symmetric; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (std::abs(flat[i * n + j] - flat[j * n + i]) > tol) {
                    rep.symmetric = false;
                    break;
                }
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(flat[i * n + i]) > tol) rep.positive_offdiag = false;
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && !(flat[i * n + j] > 0.0)) rep.positive_offdiag = false;
        }
        ValidationReport tri = check_triangles(flat, n, tol);
        rep.triangle_ok = tri.triangle_ok;
        rep.worst_triple = tri.worst_triple;
        return rep;
    }

    bool operator==(const DistanceMatrix& o) const {
        return labels_ == o.labels_ && d_ == o.d_;
    }

private:
    DistanceMatrix(std::vector<std::string> labels, std::vector<double> flat, double tol_rel)
        : labels_(std::move(labels)), d_(std::move(flat)), tol_rel_(tol_rel) {}

    static void check_labels(const std::vector<std::string>& labels) {
        std::unordered_set<std::string> seen;
        for (const auto& l : labels) {
            if (l.empty() || l.find(',') != std::string::npos || l.find('\n') != std::string::npos)
                throw Error(errc::invalid_argument, "label '" + l + "' is empty or contains ',' or newline");
            if (!seen.insert(l).second) throw Error(errc::duplicate_label, l);
        }
    }

    static ValidationReport check_triangles(const std::vector<double>& flat, std::size_t n,
                                            double tol) {
        ValidationReport rep;
        rep.worst_triple.violation = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dij = flat[i * n + j];
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == i || k == j) continue;
                    const double v = dij - flat[i * n + k] - flat[k * n + j] - tol;
                    if (v > rep.worst_triple.violation) rep.worst_triple = {i, j, k, v};
                }
            }
        rep.triangle_ok = rep.worst_triple.violation <= 0.0;
        return rep;
    }

    std::vector<std::string> labels_;
    std::vector<double> d_;  // row-major, symmetric, zero diagonal
    double tol_rel_;
};

}  // namespace hypermet

#endif  // HYPERMET_METRIC_CORE_HPP
