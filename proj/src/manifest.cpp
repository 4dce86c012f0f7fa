#include "bnvar/manifest.hpp"

#include <chrono>
#include <fstream>

#include <json.hpp>

#include "bnvar/types.hpp"

namespace bnvar {

std::string fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open input '" + path + "'");
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[1 << 14];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ULL;
        }
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(hash));
    return out;
}

void RunManifest::add_input(const std::string& path) {
    input_digests[path] = fnv1a64_file(path);
}

void RunManifest::write(const std::string& path, double wall_seconds) const {
    nlohmann::json doc;
    doc["command"] = command;
    doc["config"] = config;
    doc["seed"] = seed;
    doc["threads"] = threads;
    doc["version"] = kToolVersion;
    doc["outputs"] = outputs;
    doc["input_digests"] = input_digests;
    const auto now = std::chrono::system_clock::now();
    doc["wall_clock_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
    doc["wall_seconds"] = wall_seconds;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest '" + path + "'");
    out << doc.dump(2) << '\n';
}

} // namespace bnvar
