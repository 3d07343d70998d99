#include "fuzzyts/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fuzzyts {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool parse_number(const std::string& s, double& out) {
    std::size_t pos = 0;
    try {
        out = std::stod(s, &pos);
    } catch (...) {
        return false;
    }
    return pos == s.size();
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
}

ConfigFile ConfigFile::parse_string(const std::string& text) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // Strip comments, but not inside a quoted string.
        bool in_quote = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_quote = !in_quote;
            else if (line[i] == '#' && !in_quote) {
                line.resize(i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string raw = trim(line.substr(eq + 1));
        if (key.empty() || raw.empty())
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": empty key or value");
        if (cfg.values_.count(key))
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": duplicate key '" + key + "'");

        Value v;
        if (raw.front() == '"') {
            if (raw.size() < 2 || raw.back() != '"')
                throw std::runtime_error("config line " +
                                         std::to_string(lineno) +
                                         ": unterminated string");
            v.kind = Kind::String;
            v.str = raw.substr(1, raw.size() - 2);
        } else if (raw == "true" || raw == "false") {
            v.kind = Kind::Bool;
            v.flag = raw == "true";
        } else if (raw.front() == '[') {
            if (raw.back() != ']')
                throw std::runtime_error("config line " +
                                         std::to_string(lineno) +
                                         ": unterminated array");
            v.kind = Kind::Array;
            std::string body = raw.substr(1, raw.size() - 2);
            std::istringstream items(body);
            std::string item;
            while (std::getline(items, item, ',')) {
                item = trim(item);
                if (item.empty()) continue;
                double d;
                if (!parse_number(item, d))
                    throw std::runtime_error(
                        "config line " + std::to_string(lineno) +
                        ": array element '" + item + "' is not a number");
                v.arr.push_back(d);
            }
        } else {
            double d;
            if (parse_number(raw, d)) {
                v.kind = Kind::Number;
                v.num = d;
            } else {
                // bare word: treat as string for convenience (scheme = MO)
                v.kind = Kind::String;
                v.str = raw;
            }
        }
        cfg.values_.emplace(key, std::move(v));
    }
    return cfg;
}

bool ConfigFile::has(const std::string& key) const {
    return values_.count(key) != 0;
}

const ConfigFile::Value& ConfigFile::require(const std::string& key,
                                             Kind kind) const {
    auto it = values_.find(key);
    if (it == values_.end())
        throw std::runtime_error("config: missing key '" + key + "'");
    if (it->second.kind != kind) {
        static const char* names[] = {"string", "number", "bool", "array"};
        throw std::runtime_error("config: key '" + key + "' is not a " +
                                 names[static_cast<int>(kind)]);
    }
    it->second.used = true;
    return it->second;
}

std::string ConfigFile::get_string(const std::string& key) const {
    return require(key, Kind::String).str;
}
double ConfigFile::get_number(const std::string& key) const {
    return require(key, Kind::Number).num;
}
bool ConfigFile::get_bool(const std::string& key) const {
    return require(key, Kind::Bool).flag;
}
std::vector<double> ConfigFile::get_array(const std::string& key) const {
    return require(key, Kind::Array).arr;
}

std::string ConfigFile::get_string_or(const std::string& key,
                                      std::string fallback) const {
    return has(key) ? get_string(key) : fallback;
}
double ConfigFile::get_number_or(const std::string& key,
                                 double fallback) const {
    return has(key) ? get_number(key) : fallback;
}
bool ConfigFile::get_bool_or(const std::string& key, bool fallback) const {
    return has(key) ? get_bool(key) : fallback;
}

std::vector<int> ConfigFile::get_int_array(const std::string& key) const {
    std::vector<int> out;
    for (double d : get_array(key)) {
        if (d != std::floor(d))
            throw std::runtime_error("config: key '" + key +
                                     "' must hold integers");
        out.push_back(static_cast<int>(d));
    }
    return out;
}

std::vector<std::string> ConfigFile::unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_)
        if (!v.used) out.push_back(k);
    return out;
}

}  // namespace fuzzyts
