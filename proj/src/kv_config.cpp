#include "ugsim/kv_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ugsim {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& s, bool& ok) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    ok = res.ec == std::errc{} && res.ptr == s.data() + s.size();
    return v;
}

} // namespace

KvConfig KvConfig::parse(const std::string& text) {
    KvConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (cfg.entries_.count(full))
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": duplicate key '" + full + "'");
        cfg.entries_[full] = Entry{value, lineno, false};
    }
    return cfg;
}

KvConfig KvConfig::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

const KvConfig::Entry* KvConfig::find(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
}

void KvConfig::bad_value(const std::string& key, const Entry& e, const std::string& want) {
    throw std::runtime_error("config line " + std::to_string(e.line) + ": key '" + key +
                             "' needs " + want + ", got '" + e.value + "'");
}

bool KvConfig::has(const std::string& key) const { return find(key) != nullptr; }

std::string KvConfig::get_string(const std::string& key, const std::string& fallback) const {
    const Entry* e = find(key);
    return e ? e->value : fallback;
}

double KvConfig::get_double(const std::string& key, double fallback) const {
    const Entry* e = find(key);
    if (!e) return fallback;
    bool ok = false;
    const double v = parse_double(e->value, ok);
    if (!ok) bad_value(key, *e, "a number");
    return v;
}

int KvConfig::get_int(const std::string& key, int fallback) const {
    const Entry* e = find(key);
    if (!e) return fallback;
    int v = 0;
    auto res = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
    if (res.ec != std::errc{} || res.ptr != e->value.data() + e->value.size())
        bad_value(key, *e, "an integer");
    return v;
}

std::uint64_t KvConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    const Entry* e = find(key);
    if (!e) return fallback;
    std::uint64_t v = 0;
    auto res = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
    if (res.ec != std::errc{} || res.ptr != e->value.data() + e->value.size())
        bad_value(key, *e, "an unsigned integer");
    return v;
}

bool KvConfig::get_bool(const std::string& key, bool fallback) const {
    const Entry* e = find(key);
    if (!e) return fallback;
    if (e->value == "true" || e->value == "1") return true;
    if (e->value == "false" || e->value == "0") return false;
    bad_value(key, *e, "true or false");
}

std::vector<double> KvConfig::get_double_list(const std::string& key) const {
    const Entry* e = find(key);
    if (!e) return {};
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= e->value.size()) {
        const auto comma = e->value.find(',', start);
        const std::string field =
            trim(e->value.substr(start, comma == std::string::npos ? comma : comma - start));
        if (!field.empty()) {
            bool ok = false;
            const double v = parse_double(field, ok);
            if (!ok) bad_value(key, *e, "a comma-separated number list");
            values.push_back(v);
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return values;
}

std::vector<std::string> KvConfig::unused_keys() const {
    std::vector<std::string> keys;
    for (const auto& [key, entry] : entries_) {
        if (!entry.used)
            keys.push_back(key + " (line " + std::to_string(entry.line) + ")");
    }
    return keys;
}

} // namespace ugsim
