#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace riskscore {

// Flat `key = value` configuration file. '#' starts a comment. Values keep
// everything after the first '=', trimmed. Lookups record which keys were
// touched so unknown keys can be reported.
class KeyValueConfig {
public:
    KeyValueConfig() = default;
    static KeyValueConfig load(const std::string& path);
    static KeyValueConfig parse(const std::string& text, const std::string& name);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    // Comma-separated list of numbers.
    std::vector<double> get_doubles(const std::string& key,
                                    const std::vector<double>& fallback) const;

    void set(const std::string& key, const std::string& value);
    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    std::optional<std::string> raw(const std::string& key) const;
    std::map<std::string, std::string> values_;
};

}  // namespace riskscore
