#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace twotier {

// Flat "key = value" text file. '#' starts a comment; values keep their
// raw text so callers can parse lists or numbers as needed.
class KeyValueFile {
public:
    static KeyValueFile parse_text(const std::string& text);
    static KeyValueFile load(const std::string& path);

    bool has(const std::string& key) const;
    const std::string& raw(const std::string& key) const;  // throws if absent

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::vector<double> get_doubles(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

}  // namespace twotier
