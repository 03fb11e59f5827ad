#include "radrisk/config.hpp"

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "radrisk/csv.hpp"
#include "radrisk/errors.hpp"

namespace radrisk {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

Config Config::from_file(const std::filesystem::path& path) {
    Config c;
    c.merge_file(path, 0);
    return c;
}

Config Config::from_string(const std::string& text) {
    Config c;
    c.parse_text(text, std::filesystem::current_path(), 0);
    return c;
}

void Config::merge_file(const std::filesystem::path& path, int depth) {
    if (depth > 8) throw ConfigError("config include nesting too deep at " + path.string());
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    parse_text(buf.str(), path.parent_path(), depth);
}

void Config::parse_text(const std::string& text, const std::filesystem::path& base, int depth) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (t.rfind("include ", 0) == 0) {
            const std::filesystem::path inc = trim(t.substr(8));
            merge_file(inc.is_absolute() ? inc : base / inc, depth + 1);
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              " is not 'key = value': " + t);
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty config key on line " + std::to_string(lineno));
        entries_[key] = value;
    }
}

void Config::set(const std::string& key, const std::string& value) { entries_[key] = value; }

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string Config::get_string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing config key: " + key);
    return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
    try {
        return parse_double(get_string(key), key);
    } catch (const DataError& e) {
        throw ConfigError(e.what());
    }
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long Config::get_long(const std::string& key) const {
    try {
        return parse_long(get_string(key), key);
    } catch (const DataError& e) {
        throw ConfigError(e.what());
    }
}

long Config::get_long(const std::string& key, long fallback) const {
    return has(key) ? get_long(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get_string(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config key '" + key + "' is not a boolean: " + v);
}

std::vector<double> Config::get_doubles(const std::string& key) const {
    const std::string v = get_string(key);
    std::vector<double> out;
    std::string item;
    std::istringstream in(v);
    try {
        while (std::getline(in, item, ',')) out.push_back(parse_double(trim(item), key));
    } catch (const DataError& e) {
        throw ConfigError(e.what());
    }
    if (out.empty()) throw ConfigError("config key '" + key + "' holds no numbers");
    return out;
}

std::string Config::canonical() const {
    std::string out;
    for (const auto& [k, v] : entries_) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

std::string Config::hash() const {
    static const std::vector<std::string> runtime_keys = {"workers", "out", "emit_samples",
                                                         "emit_density"};
    std::uint64_t h = 0xcbf29ce484222325ull;
    const auto feed = [&h](const std::string& s) {
        for (const unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
    };
    for (const auto& [k, v] : entries_) {
        bool skip = false;
        for (const auto& rk : runtime_keys)
            if (k == rk) skip = true;
        if (skip) continue;
        feed(k);
        feed("=");
        feed(v);
        feed("\n");
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace radrisk
