#include "riskscore/config.hpp"

#include <fstream>
#include <sstream>

#include "riskscore/errors.hpp"
#include "riskscore/text.hpp"

namespace riskscore {

KeyValueConfig KeyValueConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& name) {
    KeyValueConfig config;
    int line_no = 0;
    for (const auto& raw_line : split(text, '\n')) {
        ++line_no;
        std::string_view line = trim(raw_line);
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(name + " line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (key.empty())
            throw ConfigError(name + " line " + std::to_string(line_no) + ": empty key");
        config.values_[key] = value;
    }
    return config;
}

bool KeyValueConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::optional<std::string> KeyValueConfig::raw(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
    return raw(key).value_or(fallback);
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    auto v = raw(key);
    if (!v) return fallback;
    try {
        return parse_double(*v, "config key '" + key + "'");
    } catch (const ValueTypeError& e) {
        throw ConfigError(e.what());
    }
}

long KeyValueConfig::get_long(const std::string& key, long fallback) const {
    auto v = raw(key);
    if (!v) return fallback;
    try {
        return parse_long(*v, "config key '" + key + "'");
    } catch (const ValueTypeError& e) {
        throw ConfigError(e.what());
    }
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
    auto v = raw(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError("config key '" + key + "': expected boolean, got '" + *v + "'");
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key,
                                                const std::vector<double>& fallback) const {
    auto v = raw(key);
    if (!v) return fallback;
    std::vector<double> out;
    for (const auto& part : split(*v, ',')) {
        if (trim(part).empty()) continue;
        try {
            out.push_back(parse_double(part, "config key '" + key + "'"));
        } catch (const ValueTypeError& e) {
            throw ConfigError(e.what());
        }
    }
    return out;
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
    values_[key] = value;
}

}  // namespace riskscore
