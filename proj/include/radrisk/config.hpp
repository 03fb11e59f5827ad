#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace radrisk {

// Flat key = value configuration. Lines starting with '#' are comments.
// An `include <path>` line merges another file first; later keys win.
class Config {
public:
    Config() = default;

    static Config from_file(const std::filesystem::path& path);
    static Config from_string(const std::string& text);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key) const;
    long get_long(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& key) const;  // comma separated

    // Sorted key = value text, one per line.
    std::string canonical() const;

    // FNV-1a hash of the canonical text minus runtime-only keys (workers, out,
    // emit_samples, emit_density), as 16 hex digits.
    std::string hash() const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    void merge_file(const std::filesystem::path& path, int depth);
    void parse_text(const std::string& text, const std::filesystem::path& base, int depth);

    std::map<std::string, std::string> entries_;
};

}  // namespace radrisk
