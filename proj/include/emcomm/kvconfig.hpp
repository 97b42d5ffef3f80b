#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace emcomm {

// Minimal strict "key = value" document: one pair per line, '#' comments,
// blank lines ignored. Keys may repeat only where the consumer allows it.
struct KvEntry {
    std::string key;
    std::string value;
    int line = 0;
    int column = 0;  // column of the key start, 1-based
};

// Throws std::runtime_error with "<origin>:<line>:<column>: message" on
// malformed lines (missing '=', empty key).
std::vector<KvEntry> parse_kv_text(const std::string& text, const std::string& origin);

std::vector<KvEntry> parse_kv_file(const std::string& path);

// Typed value readers; throw std::runtime_error naming the entry location.
double kv_double(const KvEntry& entry);
long long kv_int(const KvEntry& entry);
std::uint64_t kv_uint64(const KvEntry& entry);
bool kv_bool(const KvEntry& entry);
std::vector<double> kv_double_list(const KvEntry& entry);  // comma separated

}  // namespace emcomm
