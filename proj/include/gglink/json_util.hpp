#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gglink/errors.hpp"

namespace gglink {

using Json = nlohmann::json;

// Reports serialize floats at fixed precision so identical runs produce
// byte-identical JSON.
inline double round6(double x) { return std::round(x * 1e6) / 1e6; }

// Percentage with 2 decimals, the paper-table convention.
inline double to_pct2(double fraction) { return std::round(fraction * 1e4) / 1e2; }

inline std::string format_pct2(double fraction) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << to_pct2(fraction);
    return os.str();
}

inline Json load_json_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open: " + path.string());
    Json j;
    try {
        f >> j;
    } catch (const Json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return j;
}

inline void save_json_file(const Json& j, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write: " + path.string());
    f << j.dump(2) << "\n";
    if (!f) throw IoError("write failed: " + path.string());
}

// FNV-1a, used to fingerprint input files in manifests and split metadata.
// An identity check, not a security boundary.
inline std::string fnv1a_file_hash(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for hashing: " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (f.read(buf, sizeof(buf)) || f.gcount() > 0) {
        const std::streamsize got = f.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (!f) break;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

}  // namespace gglink
