#ifndef HYPERMET_ERRORS_HPP
#define HYPERMET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hypermet {

enum class errc {
    // distance-matrix construction
    non_square,
    asymmetric,
    negative_entry,
    non_finite_entry,
    nonzero_diagonal,
    zero_off_diagonal,
    triangle_violation,
    duplicate_label,
    // restriction
    index_out_of_range,
    duplicate_index,
    empty_subset,
    // four-point analysis
    non_positive_epsilon,
    bracket_does_not_straddle,
    negative_input,
    // boundary metric
    empty_boundary,
    point_on_boundary,
    non_positive_r,
    // model spaces
    constraint_violation,
    non_unit_direction,
    coincident_points,
    antipodal_points,
    parameter_out_of_range,
    dimension_mismatch,
    // i/o, cli
    parse_error,
    invalid_argument,
};

inline const char* to_string(errc c) {
    switch (c) {
        case errc::non_square: return "NonSquare";
        case errc::asymmetric: return "Asymmetric";
        case errc::negative_entry: return "NegativeEntry";
        case errc::non_finite_entry: return "NonFiniteEntry";
        case errc::nonzero_diagonal: return "NonzeroDiagonal";
        case errc::zero_off_diagonal: return "ZeroOffDiagonal";
        case errc::triangle_violation: return "TriangleViolation";
        case errc::duplicate_label: return "DuplicateLabel";
        case errc::index_out_of_range: return "IndexOutOfRange";
        case errc::duplicate_index: return "DuplicateIndex";
        case errc::empty_subset: return "EmptySubset";
        case errc::non_positive_epsilon: return "NonPositiveEpsilon";
        case errc::bracket_does_not_straddle: return "BracketDoesNotStraddle";
        case errc::negative_input: return "NegativeInput";
        case errc::empty_boundary: return "EmptyBoundary";
        case errc::point_on_boundary: return "PointOnBoundary";
        case errc::non_positive_r: return "NonPositiveR";
        case errc::constraint_violation: return "ConstraintViolation";
        case errc::non_unit_direction: return "NonUnitDirection";
        case errc::coincident_points: return "CoincidentPoints";
        case errc::antipodal_points: return "AntipodalPoints";
        case errc::parameter_out_of_range: return "ParameterOutOfRange";
        case errc::dimension_mismatch: return "DimensionMismatch";
        case errc::parse_error: return "ParseError";
        case errc::invalid_argument: return "InvalidArgument";
    }
    return "UnknownError";
}

/// Exception carrying a machine-readable error code alongside the message.
class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

}  // namespace hypermet

#endif  // HYPERMET_ERRORS_HPP
