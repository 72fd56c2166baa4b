#ifndef HYPERMET_FOUR_POINT_HPP
#define HYPERMET_FOUR_POINT_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>

#include "hypermet/errors.hpp"
#include "hypermet/metric_core.hpp"
#include "hypermet/parallel.hpp"

namespace hypermet {

/// Worst quadruple found by a scan.  pairing selects the left-hand side among
/// {xy|zt, xz|yt, xt|yz} (0, 1, 2); pairing -1 means no quadruple exists
/// (fewer than four points).
struct QuadrupleWitness {
    std::array<std::size_t, 4> indices{0, 0, 0, 0};
    int pairing = -1;
    double defect = 0.0;

    bool present() const { return pairing >= 0; }
};

struct PtolemaicOutcome {
    double defect = -std::numeric_limits<double>::infinity();
    QuadrupleWitness witness;
};

struct GromovResult {
    double delta_min = 0.0;
    QuadrupleWitness witness;
};

struct StrongResult {
    double epsilon = 0.0;
    double max_defect = -std::numeric_limits<double>::infinity();
    QuadrupleWitness witness;
    bool feasible = true;
};

namespace detail {

struct ScanBest {
    double value = -std::numeric_limits<double>::infinity();
    std::array<std::size_t, 4> idx{0, 0, 0, 0};
    int pairing = -1;

    bool present() const { return pairing >= 0; }
};

// Strict total order on quadruple outcomes: larger value wins, ties go to the
// lexicographically smallest index tuple, then the smallest pairing.  Ties
// are resolved identically however the scan is partitioned, so parallel runs
// reproduce the serial witness.
inline bool improves(const ScanBest& cand, const ScanBest& cur) {
    if (!cand.present()) return false;
    if (!cur.present()) return true;
    if (cand.value != cur.value) return cand.value > cur.value;
    if (cand.idx != cur.idx) return cand.idx < cur.idx;
    return cand.pairing < cur.pairing;
}

// eval(dij, dik, dil, djk, djl, dkl) -> (value, pairing) for one quadruple.
template <class Eval>
ScanBest scan_quadruples(const DistanceMatrix& m, Eval eval) {
    const std::size_t n = m.size();
    ScanBest init;
    if (n < 4) return init;
    const double* d = m.data().data();
    auto work = [&](std::size_t i, ScanBest& best) {
        const double* di = d + i * n;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double* dj = d + j * n;
            const double dij = di[j];
            for (std::size_t k = j + 1; k < n; ++k) {
                const double* dk = d + k * n;
                const double dik = di[k];
                const double djk = dj[k];
                for (std::size_t l = k + 1; l < n; ++l) {
                    const auto [value, pairing] = eval(dij, dik, di[l], djk, dj[l], dk[l]);
                    // Enumeration is lexicographic within a worker, so a later
                    // tuple never displaces an equal value.
                    if (value > best.value || !best.present()) {
                        best.value = value;
                        best.idx = {i, j, k, l};
                        best.pairing = pairing;
                    }
                }
            }
        }
    };
    auto merge = [](ScanBest& acc, const ScanBest& s) {
        if (improves(s, acc)) acc = s;
    };
    return striped_reduce(n, scan_threads(), init, work, merge);
}

inline QuadrupleWitness to_witness(const ScanBest& b) {
    QuadrupleWitness w;
    if (b.present()) {
        w.indices = b.idx;
        w.pairing = b.pairing;
        w.defect = b.value;
    }
    return w;
}

inline int argmax3(double a, double b, double c) {
    if (a >= b) return a >= c ? 0 : 2;
    return b >= c ? 1 : 2;
}

// Halved pairing-sum gaps for the strong condition: returns (b-a, c-a) with
// a >= b >= c the halved sums, plus the pairing of a.
struct SumGaps {
    double b_minus_a;
    double c_minus_a;
    int pairing;
};

inline SumGaps sum_gaps(double dij, double dik, double dil, double djk, double djl, double dkl) {
    const double s0 = dij + dkl, s1 = dik + djl, s2 = dil + djk;
    const int p = argmax3(s0, s1, s2);
    double top = s0, u = s1, v = s2;
    if (p == 1) {
        top = s1;
        u = s0;
    } else if (p == 2) {
        top = s2;
        v = s0;
    }
    if (u < v) std::swap(u, v);
    return {0.5 * (u - top), 0.5 * (v - top), p};
}

}  // namespace detail

/// Largest Ptolemaic violation over all quadruples: max of (largest pairwise
/// product) - (sum of the other two).  The matrix is Ptolemaic, to tolerance,
/// iff the defect is <= tol.  Fewer than four points: -inf, no witness.
inline PtolemaicOutcome ptolemaic_defect(const DistanceMatrix& m) {
    auto best = detail::scan_quadruples(
        m, [](double dij, double dik, double dil, double djk, double djl, double dkl) {
            const double p0 = dij * dkl, p1 = dik * djl, p2 = dil * djk;
            const int p = detail::argmax3(p0, p1, p2);
            const double top = p == 0 ? p0 : (p == 1 ? p1 : p2);
            return std::pair<double, int>(top - (p0 + p1 + p2 - top), p);
        });
    PtolemaicOutcome out;
    out.witness = detail::to_witness(best);
    if (best.present()) out.defect = best.value;
    return out;
}

/// Least delta satisfying the four-point condition: half the largest gap
/// between the top two pairing sums over all quadruples.  Zero when n < 4.
inline GromovResult gromov_delta(const DistanceMatrix& m) {
    auto best = detail::scan_quadruples(
        m, [](double dij, double dik, double dil, double djk, double djl, double dkl) {
            const auto g = detail::sum_gaps(dij, dik, dil, djk, djl, dkl);
            // b_minus_a is the halved gap (S2 - S1)/2, so delta is its
            // negation; 0.0 - x keeps the zero positive.
            return std::pair<double, int>(0.0 - g.b_minus_a, g.pairing);
        });
    GromovResult out;
    out.witness = detail::to_witness(best);
    if (best.present()) out.delta_min = best.value;
    return out;
}

/// Worst strong-hyperbolicity defect at a fixed epsilon.  Per quadruple, with
/// halved pairing sums a >= b >= c, the defect is
///     1 - exp(eps*(b-a)) - exp(eps*(c-a)),
/// which is <= 0 exactly when exp(eps*a) <= exp(eps*b) + exp(eps*c).  The
/// shifted exponents are nonpositive, so nothing overflows however large the
/// entries are.
inline StrongResult strong_defect(const DistanceMatrix& m, double epsilon) {
    if (!(epsilon > 0.0))
        throw Error(errc::non_positive_epsilon, "epsilon = " + std::to_string(epsilon));
    auto best = detail::scan_quadruples(
        m, [epsilon](double dij, double dik, double dil, double djk, double djl, double dkl) {
            const auto g = detail::sum_gaps(dij, dik, dil, djk, djl, dkl);
            const double defect =
                1.0 - std::exp(epsilon * g.b_minus_a) - std::exp(epsilon * g.c_minus_a);
            return std::pair<double, int>(defect, g.pairing);
        });
    StrongResult out;
    out.epsilon = epsilon;
    out.witness = detail::to_witness(best);
    if (best.present()) out.max_defect = best.value;
    out.feasible = !(out.max_defect > 0.0);
    return out;
}

namespace detail {

// Feasibility probe with early exit; the boolean is partition-independent.
inline bool strong_feasible(const DistanceMatrix& m, double epsilon) {
    const std::size_t n = m.size();
    if (n < 4) return true;
    const double* d = m.data().data();
    for (std::size_t i = 0; i + 3 < n; ++i) {
        const double* di = d + i * n;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double* dj = d + j * n;
            const double dij = di[j];
            for (std::size_t k = j + 1; k < n; ++k) {
                const double* dk = d + k * n;
                const double dik = di[k];
                const double djk = dj[k];
                for (std::size_t l = k + 1; l < n; ++l) {
                    const auto g = sum_gaps(dij, dik, di[l], djk, dj[l], dk[l]);
                    if (std::exp(epsilon * g.b_minus_a) + std::exp(epsilon * g.c_minus_a) < 1.0)
                        return false;
                }
            }
        }
    }
    return true;
}

// Relative threshold deciding whether any pairing-sum gap counts as strictly
// positive; below it the supremum is reported as unbounded.
inline constexpr double strict_gap_rel = 1e-12;

}  // namespace detail

/// Supremum of the feasible strong parameters, or unbounded when no quadruple
/// has a strictly larger top pairing sum.
struct EpsilonMax {
    bool unbounded = false;
    double epsilon = 0.0;  // meaningful only when !unbounded
};

/// Bisects for the largest feasible epsilon inside [eps_lo, eps_hi].  The map
/// eps -> (1/eps)*log(exp(eps*b) + exp(eps*c)) is nonincreasing, so the
/// feasible set is an interval (0, eps*]; bisection is valid.  Returns the
/// certified-feasible lower end of the final bracket (within tol of eps*).
/// When eps_hi is still feasible even though some quadruple has a strict gap
/// (finite supremum), the bracket is rejected.
inline EpsilonMax max_strong_epsilon(const DistanceMatrix& m, double eps_lo, double eps_hi,
                                     double tol = 1e-10) {
    if (!(eps_lo > 0.0)) throw Error(errc::non_positive_epsilon, "eps_lo must be positive");
    if (!(eps_lo < eps_hi))
        throw Error(errc::invalid_argument, "need eps_lo < eps_hi");
    if (!(tol > 0.0)) throw Error(errc::invalid_argument, "tol must be positive");
    const double gap = 2.0 * gromov_delta(m).delta_min;
    if (!(gap > detail::strict_gap_rel * 2.0 * m.max_entry())) return {true, 0.0};
    if (detail::strong_feasible(m, eps_hi))
        throw Error(errc::bracket_does_not_straddle,
                    "eps_hi = " + std::to_string(eps_hi) + " is feasible");
    double lo = eps_lo, hi = eps_hi;
    if (!detail::strong_feasible(m, lo)) {
        hi = lo;
        lo = 0.0;  // feasible in the limit: the defect tends to -1 as eps -> 0
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (detail::strong_feasible(m, mid))
            lo = mid;
        else
            hi = mid;
    }
    return {false, lo};
}

/// Self-bracketing variant: a feasible epsilon forces
/// exp(eps*a) <= 2*exp(eps*b), so eps* <= 2*log(2)/gap with gap the largest
/// S1 - S2.  That analytic bound seeds a bracket that always straddles.
inline EpsilonMax find_max_strong_epsilon(const DistanceMatrix& m, double tol = 1e-10) {
    const double gap = 2.0 * gromov_delta(m).delta_min;
    if (!(gap > detail::strict_gap_rel * 2.0 * m.max_entry())) return {true, 0.0};
    double hi = 2.0 * std::log(2.0) / gap * (1.0 + 1e-9);
    for (int i = 0; i < 8 && detail::strong_feasible(m, hi); ++i) hi *= 2.0;
    double lo = std::min(1e-6, 0.25 * hi);
    if (!detail::strong_feasible(m, lo)) {
        hi = lo;
        lo = 0.0;
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (detail::strong_feasible(m, mid))
            lo = mid;
        else
            hi = mid;
    }
    return {false, lo};
}

/// Sides of the rearrangement inequality:
///     min{a+b, g+d} * min{a+g, b+d}  <=  a*d + b*g + 2*sqrt(a*b*g*d).
inline std::pair<double, double> rearrangement_sides(double a, double b, double g, double d) {
    if (a < 0 || b < 0 || g < 0 || d < 0)
        throw Error(errc::negative_input, "rearrangement inputs must be nonnegative");
    const double lhs = std::min(a + b, g + d) * std::min(a + g, b + d);
    const double rhs = a * d + b * g + 2.0 * std::sqrt(a * b * g * d);
    return {lhs, rhs};
}

/// Which equality conditions of the rearrangement inequality hold, each
/// checked to a relative tolerance:
///   i:   a*d = 0 and max{a,d} >= |b-g|
///   ii:  b*g = 0 and max{b,g} >= |a-d|
///   iii: a = d and b = g
struct EqualityCase {
    bool i = false;
    bool ii = false;
    bool iii = false;

    bool any() const { return i || ii || iii; }
};

inline EqualityCase equality_case(double a, double b, double g, double d, double tol = 1e-12) {
    if (a < 0 || b < 0 || g < 0 || d < 0)
        throw Error(errc::negative_input, "rearrangement inputs must be nonnegative");
    const double s = tol * (1.0 + std::max(std::max(a, b), std::max(g, d)));
    EqualityCase out;
    out.i = std::min(a, d) <= s && std::max(a, d) >= std::abs(b - g) - s;
    out.ii = std::min(b, g) <= s && std::max(b, g) >= std::abs(a - d) - s;
    out.iii = std::abs(a - d) <= s && std::abs(b - g) <= s;
    return out;
}

/// Gromov parameter implied by strong hyperbolicity with parameter epsilon.
inline double strong_to_gromov(double epsilon) {
    if (!(epsilon > 0.0))
        throw Error(errc::non_positive_epsilon, "epsilon = " + std::to_string(epsilon));
    return std::log(2.0) / epsilon;
}

}  // namespace hypermet

#endif  // HYPERMET_FOUR_POINT_HPP
