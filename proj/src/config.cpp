#include "odmp/config.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "odmp/errors.hpp"

namespace odmp {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Drops a trailing comment that is not inside a string.
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_top(const std::string& s, std::size_t line) {
    std::vector<std::string> parts;
    std::string cur;
    bool quoted = false;
    for (char c : s) {
        if (c == '"') quoted = !quoted;
        if (c == ',' && !quoted) {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) fail(line, "unterminated string");
    if (!trim(cur).empty()) parts.push_back(trim(cur));
    return parts;
}

nlohmann::json parse_value(const std::string& raw, std::size_t line) {
    const std::string v = trim(raw);
    if (v.empty()) fail(line, "missing value");
    if (v.front() == '"') {
        if (v.size() < 2 || v.back() != '"') fail(line, "unterminated string");
        return v.substr(1, v.size() - 2);
    }
    if (v == "true") return true;
    if (v == "false") return false;
    if (v.front() == '[') {
        if (v.back() != ']') fail(line, "unterminated array");
        nlohmann::json arr = nlohmann::json::array();
        for (const std::string& part : split_top(v.substr(1, v.size() - 2), line)) arr.push_back(parse_value(part, line));
        return arr;
    }
    const bool integral = v.find_first_of(".eE") == std::string::npos && v != "inf" && v != "nan";
    if (integral) {
        std::int64_t i = 0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), i);
        if (ec == std::errc() && ptr == v.data() + v.size()) return i;
    }
    double d = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
    if (ec != std::errc() || ptr != v.data() + v.size()) fail(line, "cannot parse value '" + v + "'");
    return d;
}

}  // namespace

nlohmann::json parse_config(const std::string& text) {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* section = &root;
    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(strip_comment(raw));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(line, "malformed section header");
            const std::string name = trim(s.substr(1, s.size() - 2));
            if (name.empty()) fail(line, "empty section name");
            section = &root;
            std::istringstream parts(name);
            std::string key;
            while (std::getline(parts, key, '.')) {
                key = trim(key);
                if (key.empty()) fail(line, "empty section name component");
                nlohmann::json& next = (*section)[key];
                if (next.is_null()) next = nlohmann::json::object();
                if (!next.is_object()) fail(line, "section '" + key + "' clashes with a value");
                section = &next;
            }
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected key = value");
        const std::string key = trim(s.substr(0, eq));
        if (key.empty()) fail(line, "empty key");
        if (section->contains(key)) fail(line, "duplicate key '" + key + "'");
        (*section)[key] = parse_value(s.substr(eq + 1), line);
    }
    return root;
}

nlohmann::json load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot read config file " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str());
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return out;
}

std::string config_hash(const nlohmann::json& cfg) { return fnv1a_hex(cfg.dump()); }

}  // namespace odmp
