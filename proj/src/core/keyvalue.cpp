#include "fuzzpipe/core/keyvalue.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fuzzpipe::core {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

double parse_real(const std::string& token) {
    const std::string t = trim(token);
    if (t == "inf" || t == "+inf" || t == "Inf") return std::numeric_limits<double>::infinity();
    if (t == "-inf" || t == "-Inf") return -std::numeric_limits<double>::infinity();
    if (t == "nan" || t == "NaN") return std::numeric_limits<double>::quiet_NaN();
    std::size_t pos = 0;
    const double v = std::stod(t, &pos);
    if (pos != t.size()) throw std::invalid_argument("bad numeric value: '" + token + "'");
    return v;
}

std::string format_real(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

KeyValueFile KeyValueFile::parse(const std::string& text) {
    KeyValueFile kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config line " + std::to_string(lineno) + ": missing '='");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
        }
        kv.entries_[key] = value;
    }
    return kv;
}

void KeyValueFile::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write config file: " + path);
    for (const auto& [k, v] : entries_) out << k << " = " << v << "\n";
}

bool KeyValueFile::has(const std::string& key) const { return entries_.count(key) > 0; }

void KeyValueFile::set(const std::string& key, const std::string& value) { entries_[key] = value; }
void KeyValueFile::set(const std::string& key, double value) { entries_[key] = format_real(value); }
void KeyValueFile::set(const std::string& key, int value) { entries_[key] = std::to_string(value); }

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : parse_real(it->second);
}

int KeyValueFile::get_int(const std::string& key, int fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : std::stoi(it->second);
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("bad boolean for key '" + key + "': " + v);
}

std::vector<double> KeyValueFile::get_doubles(const std::string& key) const {
    std::vector<double> out;
    const auto it = entries_.find(key);
    if (it == entries_.end()) return out;
    std::istringstream in(it->second);
    std::string tok;
    while (in >> tok) out.push_back(parse_real(tok));
    return out;
}

}  // namespace fuzzpipe::core
