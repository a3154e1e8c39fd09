#include "rss/manifest.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rss {

uint64_t fnv1a(const std::string& data) {
    uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char ch : data) {
        hash ^= ch;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string digest_hex(const std::string& data) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)fnv1a(data));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << data;
    if (!out) throw std::runtime_error("write failed for " + path);
}

void RunManifest::add_input(const std::string& path, const std::string& content) {
    inputs.push_back({path, digest_hex(content)});
}

void RunManifest::write_output(const std::string& path, const std::string& content) {
    write_file(path, content);
    outputs.push_back({path, digest_hex(content)});
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["format"] = "rss-manifest-v1";
    j["tool_version"] = tool_version;
    j["command"] = command;
    j["config"] = config;
    j["config_digest"] = digest_hex(config);
    j["seed"] = seed;
    j["wall_clock_sec"] = wall_clock_sec;
    auto files = [](const std::vector<FileRecord>& recs) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& r : recs) arr.push_back({{"path", r.path}, {"digest", r.digest}});
        return arr;
    };
    j["inputs"] = files(inputs);
    j["outputs"] = files(outputs);
    return j.dump(2) + "\n";
}

void RunManifest::save(const std::string& path) const {
    write_file(path, to_json());
}

}  // namespace rss
