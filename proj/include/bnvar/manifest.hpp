#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace bnvar {

inline constexpr const char* kToolVersion = "1.0.0";

/// Provenance record written next to every command output.  Outputs are
/// byte-reproducible from the recorded configuration; the wall-clock fields
/// are informational and excluded from that guarantee.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> config;
    std::uint64_t seed = 0;
    int threads = 1;
    std::vector<std::string> outputs;
    std::map<std::string, std::string> input_digests;

    void add_input(const std::string& path);
    void write(const std::string& path, double wall_seconds) const;
};

std::string fnv1a64_file(const std::string& path);

} // namespace bnvar
