#ifndef HYPERMET_MANIFEST_HPP
#define HYPERMET_MANIFEST_HPP

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypermet/errors.hpp"
#include "hypermet/version.hpp"

namespace hypermet {

/// FNV-1a over raw bytes; cheap, stable, good enough to pin run inputs.
inline std::uint64_t fnv1a(const char* data, std::size_t size) {
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string digest_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(errc::parse_error, "cannot open '" + path + "' for digest");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return digest_hex(fnv1a(bytes.data(), bytes.size()));
}

/// Everything needed to reproduce one CLI run: the command, the full argument
/// vector, digests of the input files, outputs written, tool version, elapsed
/// wall time.  Written next to each output file as <output>.manifest.json.
struct RunManifest {
    std::string command;
    std::vector<std::string> arguments;
    std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
    std::vector<std::string> outputs;
    double elapsed_seconds = 0.0;

    void add_input(const std::string& path) { inputs.emplace_back(path, file_digest(path)); }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json doc;
        doc["tool"] = "hypermet";
        doc["version"] = version;
        doc["command"] = command;
        doc["arguments"] = arguments;
        nlohmann::ordered_json ins = nlohmann::ordered_json::array();
        for (const auto& [path, digest] : inputs) {
            nlohmann::ordered_json one;
            one["path"] = path;
            one["fnv1a64"] = digest;
            ins.push_back(one);
        }
        doc["inputs"] = ins;
        doc["outputs"] = outputs;
        doc["elapsed_seconds"] = elapsed_seconds;
        return doc;
    }

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw Error(errc::invalid_argument, "cannot write '" + path + "'");
        out << to_json().dump(2) << '\n';
    }
};

}  // namespace hypermet

#endif  // HYPERMET_MANIFEST_HPP
