#pragma once

#include <map>
#include <string>
#include <vector>

namespace fuzzpipe::core {

// Flat "key = value" text files. '#' starts a comment, blank lines ignored.
// Keys may be dotted (e.g. "detect.sigma_min") for namespacing.
class KeyValueFile {
public:
    KeyValueFile() = default;

    static KeyValueFile load(const std::string& path);
    static KeyValueFile parse(const std::string& text);
    void save(const std::string& path) const;

    bool has(const std::string& key) const;
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, int value);

    std::string get_string(const std::string& key, const std::string& fallback = "") const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    // Whitespace-separated list of reals; "inf"/"-inf" accepted.
    std::vector<double> get_doubles(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

double parse_real(const std::string& token);
std::string format_real(double v);

}  // namespace fuzzpipe::core
