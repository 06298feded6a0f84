#include "vaclab/report.hpp"

#include <charconv>
#include <cstring>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "vaclab/errors.hpp"

namespace vaclab {

void kv_set(KeyValues& kv, const std::string& key, const std::string& value) {
    for (auto& [k, v] : kv) {
        if (k == key) {
            v = value;
            return;
        }
    }
    kv.emplace_back(key, value);
}

void kv_set(KeyValues& kv, const std::string& key, double value) {
    kv_set(kv, key, format_double(value));
}

void kv_set(KeyValues& kv, const std::string& key, long long value) {
    kv_set(kv, key, std::to_string(value));
}

std::string kv_get(const KeyValues& kv, const std::string& key) {
    for (const auto& [k, v] : kv) {
        if (k == key) return v;
    }
    return {};
}

double kv_get_double(const KeyValues& kv, const std::string& key) {
    const std::string v = kv_get(kv, key);
    if (v.empty()) throw ConfigError("missing key: " + key);
    return std::stod(v);
}

void write_key_values(std::ostream& out, const KeyValues& kv) {
    for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

KeyValues parse_key_values(std::istream& in) {
    KeyValues kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) continue;
        kv.emplace_back(key, trim(line.substr(eq + 1)));
    }
    return kv;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // Shorten when a terser form round-trips.
    for (int precision = 1; precision < 17; ++precision) {
        char candidate[32];
        std::snprintf(candidate, sizeof(candidate), "%.*g", precision, v);
        double back;
        const auto [ptr, ec] = std::from_chars(candidate, candidate + std::strlen(candidate), back);
        if (ec == std::errc() && back == v) return candidate;
        (void)ptr;
    }
    return buf;
}

std::string format_fixed(double v, int decimals) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(decimals);
    os << v;
    return os.str();
}

std::string csv_join(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line.push_back(',');
        line += fields[i];
    }
    return line;
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else if (c != '\r') {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    return fields;
}

}  // namespace vaclab
