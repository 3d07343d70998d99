#ifndef FUZZYTS_CONFIG_HPP
#define FUZZYTS_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fuzzyts {

// Flat key = value config files: # comments, quoted strings, numbers,
// true/false, and [a, b, c] arrays of numbers. No sections.
class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_string(const std::string& text);

    bool has(const std::string& key) const;

    // Typed getters throw std::runtime_error naming the key on a missing
    // value or a type mismatch; the _or forms fall back instead.
    std::string get_string(const std::string& key) const;
    double get_number(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::vector<double> get_array(const std::string& key) const;

    std::string get_string_or(const std::string& key, std::string fallback) const;
    double get_number_or(const std::string& key, double fallback) const;
    bool get_bool_or(const std::string& key, bool fallback) const;
    std::vector<int> get_int_array(const std::string& key) const;

    // Keys present in the file but never read; used to flag typos.
    std::vector<std::string> unused_keys() const;

private:
    enum class Kind { String, Number, Bool, Array };
    struct Value {
        Kind kind;
        std::string str;
        double num = 0.0;
        bool flag = false;
        std::vector<double> arr;
        mutable bool used = false;
    };
    std::map<std::string, Value> values_;

    const Value& require(const std::string& key, Kind kind) const;
};

}  // namespace fuzzyts

#endif
