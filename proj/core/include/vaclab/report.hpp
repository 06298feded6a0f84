#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

// Report plumbing: `key = value` text blocks and small CSV helpers. All
// tables ship as CSV with a header row; key-value blocks carry everything
// that is not tabular.

namespace vaclab {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

void kv_set(KeyValues& kv, const std::string& key, const std::string& value);
void kv_set(KeyValues& kv, const std::string& key, double value);
void kv_set(KeyValues& kv, const std::string& key, long long value);

// Empty string when absent.
std::string kv_get(const KeyValues& kv, const std::string& key);
double kv_get_double(const KeyValues& kv, const std::string& key);

void write_key_values(std::ostream& out, const KeyValues& kv);
KeyValues parse_key_values(std::istream& in);

// Round-trip safe formatting for doubles (%.17g semantics).
std::string format_double(double v);
// Display rounding for report prose; never used for stored values.
std::string format_fixed(double v, int decimals);

std::string csv_join(const std::vector<std::string>& fields);
std::vector<std::string> csv_split(const std::string& line);

}  // namespace vaclab
