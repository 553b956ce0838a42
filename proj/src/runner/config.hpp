#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace aqsens::runner {

/// Raised for malformed configuration input; the message carries the file,
/// line, or field that failed.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Flat key-value configuration with [section] headers, one scenario per
/// file. Keys are addressed as "section.key". '#' starts a comment.
class Config {
  public:
    static Config parse_file(const std::filesystem::path& path);
    static Config parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string_or(const std::string& key, const std::string& fallback) const;
    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int_or(const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_uint(const std::string& key) const;
    std::uint64_t get_uint_or(const std::string& key, std::uint64_t fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    bool get_bool_or(const std::string& key, bool fallback) const;

    /// Whitespace- or comma-separated list value.
    std::vector<std::string> get_list(const std::string& key) const;

    /// Overrides (or inserts) a value; used by parameter sweeps.
    void set(const std::string& key, const std::string& value);

    const std::string& origin() const { return origin_; }
    std::vector<std::string> keys() const;

  private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::string origin_;
    std::map<std::string, Entry> values_;

    [[noreturn]] void fail(const std::string& key, const std::string& why) const;
    const Entry& lookup(const std::string& key) const;
};

}  // namespace aqsens::runner
