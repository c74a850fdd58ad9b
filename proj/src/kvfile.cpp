#include "twotier/kvfile.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace twotier {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

KeyValueFile KeyValueFile::parse_text(const std::string& text) {
    KeyValueFile kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": empty key");
        kv.entries_[key] = value;
    }
    return kv;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

bool KeyValueFile::has(const std::string& key) const { return entries_.count(key) > 0; }

const std::string& KeyValueFile::raw(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end())
        throw std::invalid_argument("missing config key: " + key);
    return it->second;
}

std::string KeyValueFile::get_string(const std::string& key) const { return raw(key); }

std::string KeyValueFile::get_string(const std::string& key,
                                     const std::string& fallback) const {
    return has(key) ? raw(key) : fallback;
}

double KeyValueFile::get_double(const std::string& key) const {
    const std::string& v = raw(key);
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size())
        throw std::invalid_argument("config key " + key + ": bad number: " + v);
    return x;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

std::int64_t KeyValueFile::get_int(const std::string& key) const {
    const std::string& v = raw(key);
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size())
        throw std::invalid_argument("config key " + key + ": bad integer: " + v);
    return x;
}

std::int64_t KeyValueFile::get_int(const std::string& key, std::int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::vector<double> KeyValueFile::get_doubles(const std::string& key) const {
    std::istringstream in(raw(key));
    std::vector<double> out;
    double x;
    while (in >> x) out.push_back(x);
    if (!in.eof())
        throw std::invalid_argument("config key " + key + ": bad number list");
    return out;
}

}  // namespace twotier
