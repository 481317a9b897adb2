#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qlfc {

// Thrown when an input file or record violates the documented schema or an
// invariant of the data model. Maps to exit code 1 at the CLI.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown for missing files, unreadable inputs, malformed config and the
// like. Maps to exit code 2 at the CLI.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// FNV-1a over arbitrary bytes. Used for config/input fingerprints in run
// manifests and cache keys; not cryptographic.
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64_combine(std::uint64_t seed, std::string_view bytes);
std::string hash_hex(std::uint64_t h);

// Whole-file read; throws InputError when the file cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
std::uint64_t hash_file(const std::string& path);

// Non-empty, trimmed lines; '#'-prefixed lines are comments.
std::vector<std::string> read_line_list(const std::string& path);

std::string to_lower_ascii(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
bool starts_with_ci(std::string_view s, std::string_view prefix);
bool contains_ci(std::string_view haystack, std::string_view needle);

}  // namespace qlfc
