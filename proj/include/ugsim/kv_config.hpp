#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ugsim {

// Flat "key = value" configuration with [section] headers and '#' comments.
// Keys are addressed as "section.key". Parse and type errors carry the file
// line number; keys nobody consumed are reported so typos fail loudly.
class KvConfig {
public:
    static KvConfig parse(const std::string& text);     // throws std::runtime_error
    static KvConfig parse_file(const std::string& path);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& key) const; // comma-separated

    // Keys present in the file that no getter touched, with line numbers.
    std::vector<std::string> unused_keys() const;

private:
    struct Entry {
        std::string value;
        int line = 0;
        mutable bool used = false;
    };
    std::map<std::string, Entry> entries_;

    const Entry* find(const std::string& key) const;
    [[noreturn]] static void bad_value(const std::string& key, const Entry& e,
                                       const std::string& want);
};

} // namespace ugsim
