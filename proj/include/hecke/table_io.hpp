#ifndef HECKE_TABLE_IO_HPP
#define HECKE_TABLE_IO_HPP

// Coefficient cache files:
//
//   #eigenform-table v1 weight=<k> level=1 limit=<L> sha256=<hex of body>
//   1,1
//   2,-24
//   ...
//
// The checksum covers every byte after the header line.

#include "hecke/eigenform.hpp"
#include "hecke/errors.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

namespace hecke {

inline constexpr std::string_view table_magic = "#eigenform-table";
inline constexpr std::string_view table_version = "v1";

inline std::string sha256_hex(std::string_view data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 15]);
    }
    return out;
}

inline std::string table_body(const CoefficientTable& table)
{
    std::string body;
    const auto& v = table.raw();
    for (u64 n = 1; n <= table.limit(); ++n) {
        body += std::to_string(n);
        body.push_back(',');
        body += v[n].get_str(10);
        body.push_back('\n');
    }
    return body;
}

inline std::string table_header(const CoefficientTable& table, std::string_view checksum)
{
    std::ostringstream h;
    h << table_magic << ' ' << table_version << " weight=" << table.weight() << " level=" << table.form().level
      << " limit=" << table.limit() << " sha256=" << checksum;
    return h.str();
}

inline std::string serialize_table(const CoefficientTable& table)
{
    std::string body = table_body(table);
    return table_header(table, sha256_hex(body)) + "\n" + body;
}

struct TableHeader {
    std::string version;
    int weight = 0;
    int level = 0;
    u64 limit = 0;
    std::string sha256;
};

namespace detail {

template <class T>
T parse_header_number(const std::map<std::string, std::string>& kv, const std::string& key)
{
    auto it = kv.find(key);
    if (it == kv.end()) throw TableFormatError("table header lacks '" + key + "'");
    T value{};
    const auto& s = it->second;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw TableFormatError("table header field '" + key + "' is not a number: '" + s + "'");
    }
    return value;
}

} // namespace detail

inline TableHeader parse_table_header(std::string_view line)
{
    std::istringstream in{std::string(line)};
    std::string magic, version;
    in >> magic >> version;
    if (magic != table_magic) throw TableFormatError("not an eigenform table (missing '#eigenform-table')");
    if (version != table_version) {
        throw VersionMismatchError("table version '" + version + "' is not " + std::string(table_version));
    }
    std::map<std::string, std::string> kv;
    std::string token;
    while (in >> token) {
        auto eq = token.find('=');
        if (eq == std::string::npos) throw TableFormatError("bad header token '" + token + "'");
        kv[token.substr(0, eq)] = token.substr(eq + 1);
    }
    TableHeader h;
    h.version = version;
    h.weight = detail::parse_header_number<int>(kv, "weight");
    h.level = detail::parse_header_number<int>(kv, "level");
    h.limit = detail::parse_header_number<u64>(kv, "limit");
    auto it = kv.find("sha256");
    if (it == kv.end() || it->second.size() != 64) throw TableFormatError("table header lacks a sha256 digest");
    h.sha256 = it->second;
    return h;
}

/// Parses serialized table text. If `expected` is given, its weight and level
/// must match the header.
inline CoefficientTable parse_table(std::string_view text, const std::optional<FormDescriptor>& expected = std::nullopt)
{
    auto nl = text.find('\n');
    if (nl == std::string_view::npos) throw TableFormatError("table has no header line");
    TableHeader h = parse_table_header(text.substr(0, nl));
    std::string_view body = text.substr(nl + 1);
    if (sha256_hex(body) != h.sha256) throw ChecksumError("table body does not match its sha256 checksum");

    if (h.level != 1 || !FormDescriptor::is_supported(h.weight)) {
        throw DescriptorMismatchError("table header names an unsupported form (weight " + std::to_string(h.weight) +
                                      ", level " + std::to_string(h.level) + ")");
    }
    if (expected && (expected->weight != h.weight || expected->level != h.level)) {
        throw DescriptorMismatchError("table holds weight " + std::to_string(h.weight) + " but weight " +
                                      std::to_string(expected->weight) + " was requested");
    }
    if (h.limit < 1) throw MalformedRowError("table limit must be at least 1");

    std::vector<Int> values(h.limit + 1);
    u64 n = 0;
    std::size_t pos = 0;
    while (pos < body.size()) {
        auto end = body.find('\n', pos);
        if (end == std::string_view::npos) throw MalformedRowError("last row lacks a newline");
        std::string_view row = body.substr(pos, end - pos);
        pos = end + 1;
        ++n;
        auto comma = row.find(',');
        if (comma == std::string_view::npos) throw MalformedRowError("row " + std::to_string(n) + " has no comma");
        u64 index = 0;
        auto key = row.substr(0, comma);
        auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), index);
        if (ec != std::errc() || ptr != key.data() + key.size() || index != n) {
            throw MalformedRowError("row " + std::to_string(n) + " has index '" + std::string(key) + "'");
        }
        if (n > h.limit) throw MalformedRowError("more rows than limit=" + std::to_string(h.limit));
        auto value = row.substr(comma + 1);
        if (value.empty() || value.find_first_not_of("-0123456789") != std::string_view::npos) {
            throw MalformedRowError("row " + std::to_string(n) + " value is not a decimal integer");
        }
        try {
            values[n] = parse_decimal(value);
        } catch (const std::invalid_argument&) {
            throw MalformedRowError("row " + std::to_string(n) + " value is not a decimal integer");
        }
    }
    if (n != h.limit) {
        throw MalformedRowError("table has " + std::to_string(n) + " rows but limit=" + std::to_string(h.limit));
    }
    return CoefficientTable(FormDescriptor::from_weight(h.weight), std::move(values));
}

inline void save_table(const std::filesystem::path& path, const CoefficientTable& table)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        const std::string text = serialize_table(table);
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) throw IoError("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read from '" + path.string() + "' failed");
    return ss.str();
}

inline CoefficientTable load_table(const std::filesystem::path& path,
                                   const std::optional<FormDescriptor>& expected = std::nullopt)
{
    return parse_table(read_file(path), expected);
}

/// True when `path` holds a valid table for `form` with the given limit.
inline bool table_up_to_date(const std::filesystem::path& path, const FormDescriptor& form, u64 limit)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    try {
        auto t = load_table(path, form);
        return t.limit() == limit;
    } catch (const TableFormatError&) {
        return false;
    }
}

} // namespace hecke

#endif // HECKE_TABLE_IO_HPP
