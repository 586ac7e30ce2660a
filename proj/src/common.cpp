#include "forge/common.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace forge {

std::vector<std::string> utf8_codepoints(std::string_view text) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        size_t len = 1;
        if (c >= 0xF0) len = 4;
        else if (c >= 0xE0) len = 3;
        else if (c >= 0xC0) len = 2;
        if (i + len > text.size()) len = 1;
        out.emplace_back(text.substr(i, len));
        i += len;
    }
    return out;
}

std::string utf8_lower(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (c >= 'A' && c <= 'Z') {
            out.push_back(static_cast<char>(c - 'A' + 'a'));
            ++i;
        } else if (c == 0xC3 && i + 1 < text.size()) {
            // Latin-1 supplement: U+00C0..U+00DE lowercases by +0x20,
            // except U+00D7 (multiplication sign).
            unsigned char d = static_cast<unsigned char>(text[i + 1]);
            out.push_back(static_cast<char>(c));
            if (d >= 0x80 && d <= 0x9E && d != 0x97) {
                out.push_back(static_cast<char>(d + 0x20));
            } else {
                out.push_back(static_cast<char>(d));
            }
            i += 2;
        } else {
            out.push_back(static_cast<char>(c));
            ++i;
        }
    }
    return out;
}

std::string normalize_whitespace(std::string_view text) {
    std::string s;
    s.reserve(text.size());
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '\r') continue;
        if (c == '\t') c = ' ';
        s.push_back(c);
    }
    // Collapse space runs, drop spaces adjacent to newlines, collapse
    // newline runs.
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == ' ') {
            if (!out.empty() && out.back() != ' ' && out.back() != '\n') out.push_back(' ');
        } else if (c == '\n') {
            while (!out.empty() && out.back() == ' ') out.pop_back();
            if (!out.empty() && out.back() != '\n') out.push_back('\n');
        } else {
            out.push_back(c);
        }
    }
    while (!out.empty() && (out.back() == ' ' || out.back() == '\n')) out.pop_back();
    size_t start = 0;
    while (start < out.size() && (out[start] == ' ' || out[start] == '\n')) ++start;
    return out.substr(start);
}

bool is_all_whitespace(std::string_view text) {
    for (char c : text) {
        if (c != ' ' && c != '\t' && c != '\n' && c != '\r') return false;
    }
    return true;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("cannot write file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail("write failed: " + path);
}

OutputFile::OutputFile(std::string path)
    : path_(std::move(path)), tmp_path_(path_ + ".tmp") {}

OutputFile::~OutputFile() {
    if (!committed_ && opened_) {
        std::error_code ec;
        std::filesystem::remove(tmp_path_, ec);
    }
}

void OutputFile::write(std::string_view content) {
    write_file(tmp_path_, content);
    opened_ = true;
}

void OutputFile::commit() {
    if (!opened_) fail("commit before write: " + path_);
    std::error_code ec;
    std::filesystem::rename(tmp_path_, path_, ec);
    if (ec) fail("cannot finalize output: " + path_ + ": " + ec.message());
    committed_ = true;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

void parallel_for(size_t n, int jobs, const std::function<void(size_t)>& fn) {
    if (jobs <= 1 || n < 2) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<size_t>(jobs));
    for (int t = 0; t < jobs; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (;;) {
                    size_t i = next.fetch_add(1);
                    if (i >= n) return;
                    fn(i);
                }
            } catch (...) {
                errors[static_cast<size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
}

}  // namespace forge
