#include "runner/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace aqsens::runner {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

Config Config::parse_file(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("config: cannot open " + path.string());
    std::stringstream buffer;
    buffer << file.rdbuf();
    return parse_string(buffer.str(), path.string());
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
    Config config;
    config.origin_ = origin;
    std::istringstream stream(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                std::ostringstream msg;
                msg << origin << ":" << line_no << ": unterminated section header";
                throw ConfigError(msg.str());
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) {
                std::ostringstream msg;
                msg << origin << ":" << line_no << ": empty section name";
                throw ConfigError(msg.str());
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream msg;
            msg << origin << ":" << line_no << ": expected key = value";
            throw ConfigError(msg.str());
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            std::ostringstream msg;
            msg << origin << ":" << line_no << ": empty key";
            throw ConfigError(msg.str());
        }
        const std::string full_key = section.empty() ? key : section + "." + key;
        if (config.values_.contains(full_key)) {
            std::ostringstream msg;
            msg << origin << ":" << line_no << ": duplicate key '" << full_key << "'";
            throw ConfigError(msg.str());
        }
        config.values_[full_key] = {value, line_no};
    }
    return config;
}

bool Config::has(const std::string& key) const { return values_.contains(key); }

void Config::fail(const std::string& key, const std::string& why) const {
    std::ostringstream msg;
    msg << origin_ << ": field '" << key << "': " << why;
    throw ConfigError(msg.str());
}

const Config::Entry& Config::lookup(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) fail(key, "missing");
    return it->second;
}

std::string Config::get_string(const std::string& key) const { return lookup(key).value; }

std::string Config::get_string_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

std::int64_t Config::get_int(const std::string& key) const {
    const std::string& raw = lookup(key).value;
    std::int64_t out = 0;
    const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), out);
    if (ec != std::errc() || ptr != raw.data() + raw.size())
        fail(key, "not an integer: '" + raw + "'");
    return out;
}

std::int64_t Config::get_int_or(const std::string& key, std::int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_uint(const std::string& key) const {
    const std::string& raw = lookup(key).value;
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), out);
    if (ec != std::errc() || ptr != raw.data() + raw.size())
        fail(key, "not an unsigned integer: '" + raw + "'");
    return out;
}

std::uint64_t Config::get_uint_or(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? get_uint(key) : fallback;
}

double Config::get_double(const std::string& key) const {
    const std::string& raw = lookup(key).value;
    try {
        std::size_t used = 0;
        const double out = std::stod(raw, &used);
        if (used != raw.size()) throw std::invalid_argument("trailing characters");
        return out;
    } catch (const std::exception&) {
        fail(key, "not a number: '" + raw + "'");
    }
}

double Config::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

bool Config::get_bool_or(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string raw = get_string(key);
    if (raw == "true" || raw == "1" || raw == "yes") return true;
    if (raw == "false" || raw == "0" || raw == "no") return false;
    fail(key, "not a boolean: '" + raw + "'");
}

std::vector<std::string> Config::get_list(const std::string& key) const {
    const std::string raw = lookup(key).value;
    std::vector<std::string> out;
    std::string current;
    for (const char c : raw) {
        if (c == ' ' || c == '\t' || c == ',') {
            if (!current.empty()) out.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty()) out.push_back(current);
    if (out.empty()) fail(key, "empty list");
    return out;
}

void Config::set(const std::string& key, const std::string& value) {
    values_[key] = {value, 0};
}

std::vector<std::string> Config::keys() const {
    std::vector<std::string> out;
    out.reserve(values_.size());
    for (const auto& [key, entry] : values_) out.push_back(key);
    return out;
}

}  // namespace aqsens::runner
