#ifndef HYPERMET_IO_HPP
#define HYPERMET_IO_HPP

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypermet/errors.hpp"
#include "hypermet/metric_core.hpp"
#include "hypermet/model_spaces.hpp"

namespace hypermet {

/// 17 significant digits: round-trips to the same double under parse_real.
inline std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline double parse_real(std::string_view text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value))
        throw Error(errc::parse_error, "bad real '" + std::string(text) + "'");
    return value;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.emplace_back(trim(line.substr(start)));
            break;
        }
        out.emplace_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

inline bool blank(std::string_view s) { return trim(s).empty(); }

}  // namespace detail

struct LabeledEntries {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> entries;
};

/// Parses the distance-matrix CSV: header `label,<l1>,...,<ln>`, then one row
/// per point.  Row labels must repeat the header labels in order.
inline LabeledEntries read_labeled_entries_csv(std::istream& in, const std::string& origin) {
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& what) -> Error {
        return Error(errc::parse_error, origin + ":" + std::to_string(lineno) + ": " + what);
    };
    if (!std::getline(in, line)) {
        ++lineno;
        throw fail("empty file");
    }
    ++lineno;
    auto header = detail::split_csv(line);
    if (header.empty() || header[0] != "label") throw fail("header must start with 'label'");
    LabeledEntries out;
    out.labels.assign(header.begin() + 1, header.end());
    const std::size_t n = out.labels.size();
    if (n == 0) throw fail("header lists no labels");
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::blank(line)) continue;
        auto fields = detail::split_csv(line);
        if (fields.size() != n + 1)
            throw fail("expected " + std::to_string(n + 1) + " fields, got " +
                       std::to_string(fields.size()));
        const std::size_t row = out.entries.size();
        if (row >= n) throw fail("more rows than labels");
        if (fields[0] != out.labels[row])
            throw fail("row label '" + fields[0] + "' does not match header label '" +
                       out.labels[row] + "'");
        std::vector<double> vals(n);
        for (std::size_t j = 0; j < n; ++j) {
            try {
                vals[j] = parse_real(fields[j + 1]);
            } catch (const Error&) {
                throw fail("bad real '" + fields[j + 1] + "'");
            }
        }
        out.entries.push_back(std::move(vals));
    }
    if (out.entries.size() != n)
        throw Error(errc::parse_error,
                    origin + ": expected " + std::to_string(n) + " rows, got " +
                        std::to_string(out.entries.size()));
    return out;
}

inline LabeledEntries read_labeled_entries_json(std::istream& in, const std::string& origin) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(errc::parse_error, origin + ": " + e.what());
    }
    LabeledEntries out;
    try {
        out.labels = doc.at("labels").get<std::vector<std::string>>();
        out.entries = doc.at("d").get<std::vector<std::vector<double>>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(errc::parse_error, origin + ": " + e.what());
    }
    if (out.entries.size() != out.labels.size())
        throw Error(errc::parse_error, origin + ": 'd' must have one row per label");
    for (const auto& row : out.entries)
        if (row.size() != out.labels.size())
            throw Error(errc::parse_error, origin + ": 'd' rows must match label count");
    return out;
}

inline bool has_json_extension(const std::string& path) {
    return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

inline LabeledEntries read_labeled_entries(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::parse_error, "cannot open '" + path + "'");
    return has_json_extension(path) ? read_labeled_entries_json(in, path)
                                    : read_labeled_entries_csv(in, path);
}

inline DistanceMatrix read_distance_matrix(const std::string& path, double tol_rel = 1e-9) {
    auto raw = read_labeled_entries(path);
    return DistanceMatrix::build(std::move(raw.labels), std::move(raw.entries), tol_rel);
}

inline void write_distance_matrix_csv(std::ostream& out, const DistanceMatrix& m) {
    out << "label";
    for (std::size_t j = 0; j < m.size(); ++j) out << ',' << m.labels()[j];
    out << '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << m.labels()[i];
        for (std::size_t j = 0; j < m.size(); ++j) out << ',' << format_real(m(i, j));
        out << '\n';
    }
}

inline void write_distance_matrix_json(std::ostream& out, const DistanceMatrix& m) {
    nlohmann::ordered_json doc;
    doc["labels"] = m.labels();
    std::vector<std::vector<double>> rows(m.size(), std::vector<double>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) rows[i][j] = m(i, j);
    doc["d"] = rows;
    out << doc.dump(2) << '\n';
}

struct LabeledPoints {
    std::vector<std::string> labels;
    std::vector<Point> points;
};

/// Point CSV: rows `label,x1,...,xn` with n = space.coord_count().  No header.
/// Points are checked against the space constraint as they are read.
inline LabeledPoints read_points_csv(std::istream& in, const ModelSpace& space,
                                     const std::string& origin) {
    const std::size_t n = space.coord_count();
    LabeledPoints out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::blank(line)) continue;
        auto fields = detail::split_csv(line);
        auto fail = [&](const std::string& what) -> Error {
            return Error(errc::parse_error, origin + ":" + std::to_string(lineno) + ": " + what);
        };
        if (fields.size() != n + 1)
            throw fail("expected label plus " + std::to_string(n) + " coordinates, got " +
                       std::to_string(fields.size()) + " fields");
        Point p(n);
        for (std::size_t j = 0; j < n; ++j) {
            try {
                p[j] = parse_real(fields[j + 1]);
            } catch (const Error&) {
                throw fail("bad real '" + fields[j + 1] + "'");
            }
        }
        try {
            check_point(space, p);
        } catch (const Error& e) {
            throw Error(e.code(), origin + ":" + std::to_string(lineno) + " ('" + fields[0] +
                                      "'): " + e.what());
        }
        out.labels.push_back(fields[0]);
        out.points.push_back(std::move(p));
    }
    return out;
}

inline LabeledPoints read_points(const std::string& path, const ModelSpace& space) {
    std::ifstream in(path);
    if (!in) throw Error(errc::parse_error, "cannot open '" + path + "'");
    return read_points_csv(in, space, path);
}

inline void write_points_csv(std::ostream& out, const LabeledPoints& pts) {
    for (std::size_t i = 0; i < pts.labels.size(); ++i) {
        out << pts.labels[i];
        for (double c : pts.points[i]) out << ',' << format_real(c);
        out << '\n';
    }
}

}  // namespace hypermet

#endif  // HYPERMET_IO_HPP
