#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rss {

// FNV-1a, used for content digests in run manifests.
uint64_t fnv1a(const std::string& data);
std::string digest_hex(const std::string& data);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& data);

// Every command writes one of these next to its outputs so a run can be
// audited and replayed: the exact configuration, input digests, and the
// digest of every file produced.
struct RunManifest {
    std::string tool_version;
    std::string command;
    std::string config;  // canonical flag/value listing
    uint64_t seed = 0;
    double wall_clock_sec = 0.0;

    struct FileRecord {
        std::string path;
        std::string digest;
    };
    std::vector<FileRecord> inputs;
    std::vector<FileRecord> outputs;

    void add_input(const std::string& path, const std::string& content);
    // Writes `content` to `path` and records its digest.
    void write_output(const std::string& path, const std::string& content);

    std::string to_json() const;
    void save(const std::string& path) const;
};

}  // namespace rss
