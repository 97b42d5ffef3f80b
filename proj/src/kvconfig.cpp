#include "emcomm/kvconfig.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace emcomm {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail_at(const KvEntry& entry, const std::string& message) {
    std::ostringstream os;
    os << "line " << entry.line << ", column " << entry.column << ": key '" << entry.key
       << "': " << message;
    throw std::runtime_error(os.str());
}

}  // namespace

std::vector<KvEntry> parse_kv_text(const std::string& text, const std::string& origin) {
    std::vector<KvEntry> entries;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
        if (trim(line).empty()) continue;

        const std::size_t eq = line.find('=');
        const std::size_t key_col = line.find_first_not_of(" \t") + 1;
        if (eq == std::string::npos) {
            std::ostringstream os;
            os << origin << ":" << line_no << ":" << key_col
               << ": parse error: expected 'key = value'";
            throw std::runtime_error(os.str());
        }
        KvEntry entry;
        entry.key = trim(line.substr(0, eq));
        entry.value = trim(line.substr(eq + 1));
        entry.line = line_no;
        entry.column = static_cast<int>(key_col);
        if (entry.key.empty()) {
            std::ostringstream os;
            os << origin << ":" << line_no << ":" << key_col << ": parse error: empty key";
            throw std::runtime_error(os.str());
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

std::vector<KvEntry> parse_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_kv_text(buffer.str(), path);
}

double kv_double(const KvEntry& entry) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(entry.value, &pos);
        if (pos != entry.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail_at(entry, "expected a number, got '" + entry.value + "'");
    }
}

long long kv_int(const KvEntry& entry) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(entry.value, &pos);
        if (pos != entry.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail_at(entry, "expected an integer, got '" + entry.value + "'");
    }
}

std::uint64_t kv_uint64(const KvEntry& entry) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(entry.value, &pos);
        if (pos != entry.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail_at(entry, "expected an unsigned integer, got '" + entry.value + "'");
    }
}

bool kv_bool(const KvEntry& entry) {
    if (entry.value == "true" || entry.value == "1") return true;
    if (entry.value == "false" || entry.value == "0") return false;
    fail_at(entry, "expected true/false, got '" + entry.value + "'");
}

std::vector<double> kv_double_list(const KvEntry& entry) {
    std::vector<double> out;
    std::istringstream in(entry.value);
    std::string item;
    while (std::getline(in, item, ',')) {
        const std::string t = trim(item);
        if (t.empty()) fail_at(entry, "empty list element");
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(t, &pos));
            if (pos != t.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            fail_at(entry, "expected a number in list, got '" + t + "'");
        }
    }
    if (out.empty()) fail_at(entry, "expected a non-empty list");
    return out;
}

}  // namespace emcomm
