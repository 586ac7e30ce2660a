#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace forge {

// All recoverable failures surface as forge::Error with a single-line,
// machine-parseable message ("<where>: <what>").
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

// ---- text helpers ----

// Splits a UTF-8 string into code points (each returned as a byte string).
// Invalid sequences are passed through byte by byte.
std::vector<std::string> utf8_codepoints(std::string_view text);

// Lowercases ASCII plus the Latin-1 supplement block (covers Portuguese
// accented capitals encoded as two-byte UTF-8).
std::string utf8_lower(std::string_view text);

// Canonical whitespace form used at ingestion: CRLF -> LF, tabs -> spaces,
// space runs collapsed to one, spaces adjacent to newlines dropped, newline
// runs collapsed to one, leading/trailing whitespace stripped.
std::string normalize_whitespace(std::string_view text);

bool is_all_whitespace(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

// Writes to "<path>.tmp" and renames on commit(); the temporary is removed
// if the guard dies without commit, so failed stages leave no partial output.
class OutputFile {
public:
    explicit OutputFile(std::string path);
    ~OutputFile();
    OutputFile(const OutputFile&) = delete;
    OutputFile& operator=(const OutputFile&) = delete;

    void write(std::string_view content);
    void commit();

private:
    std::string path_;
    std::string tmp_path_;
    bool committed_ = false;
    bool opened_ = false;
};

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Runs fn(0..n) across up to `jobs` threads. Work items must be independent;
// callers that need ordered output write into preassigned slots.
void parallel_for(size_t n, int jobs, const std::function<void(size_t)>& fn);

}  // namespace forge
