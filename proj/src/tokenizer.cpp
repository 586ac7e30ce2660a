#include "forge/tokenizer.hpp"

#include <algorithm>
#include <sstream>

#include "forge/common.hpp"

namespace forge {

const char* kUnkToken = "<unk>";
const char* kPadToken = "<pad>";
const char* kNewlineToken = "\n";

namespace {

std::string pair_key(const std::string& l, const std::string& r) {
    return l + '\x01' + r;
}

bool is_space_char(char c) { return c == ' ' || c == '\t' || c == '\r'; }

}  // namespace

Tokenizer Tokenizer::whitespace(std::vector<std::string> vocab) {
    Tokenizer t;
    t.kind_ = Kind::whitespace;
    t.id_to_token_ = std::move(vocab);
    for (size_t i = 0; i < t.id_to_token_.size(); ++i) {
        const auto& tok = t.id_to_token_[i];
        if (!t.token_to_id_.emplace(tok, static_cast<int>(i)).second) {
            fail("tokenizer: duplicate vocab entry '" + tok + "'");
        }
        if (tok == kUnkToken) t.unk_id_ = static_cast<int>(i);
    }
    return t;
}

Tokenizer Tokenizer::bpe(std::vector<std::string> vocab,
                         std::vector<std::pair<std::string, std::string>> merges) {
    Tokenizer t;
    t.kind_ = Kind::bpe;
    t.id_to_token_ = std::move(vocab);
    for (size_t i = 0; i < t.id_to_token_.size(); ++i) {
        const auto& tok = t.id_to_token_[i];
        if (!t.token_to_id_.emplace(tok, static_cast<int>(i)).second) {
            fail("tokenizer: duplicate vocab entry '" + tok + "'");
        }
        if (tok == kUnkToken) t.unk_id_ = static_cast<int>(i);
    }
    t.merges_ = std::move(merges);
    for (size_t rank = 0; rank < t.merges_.size(); ++rank) {
        const auto& [l, r] = t.merges_[rank];
        if (!t.token_to_id_.contains(l)) {
            fail("tokenizer: merge " + std::to_string(rank) + " references absent symbol '" +
                 l + "'");
        }
        if (!t.token_to_id_.contains(r)) {
            fail("tokenizer: merge " + std::to_string(rank) + " references absent symbol '" +
                 r + "'");
        }
        if (!t.token_to_id_.contains(l + r)) {
            fail("tokenizer: merge " + std::to_string(rank) + " result '" + l + r +
                 "' not in vocab");
        }
        t.merge_rank_.emplace(pair_key(l, r), static_cast<int>(rank));
    }
    return t;
}

int Tokenizer::id_or_unk(const std::string& token) const {
    auto it = token_to_id_.find(token);
    if (it != token_to_id_.end() && (!pad_id_ || it->second != *pad_id_)) {
        return it->second;
    }
    if (unk_id_) return *unk_id_;
    fail("tokenizer: token '" + token + "' not in vocab and no " + kUnkToken + " entry");
}

// Applies merges greedily in rank order until fixpoint: at each step the
// lowest-ranked adjacent pair present is merged at all its occurrences.
std::vector<std::string> Tokenizer::bpe_word(const std::string& word) const {
    std::vector<std::string> symbols = utf8_codepoints(word);
    if (symbols.size() < 2) return symbols;
    for (;;) {
        int best_rank = -1;
        for (size_t i = 0; i + 1 < symbols.size(); ++i) {
            auto it = merge_rank_.find(pair_key(symbols[i], symbols[i + 1]));
            if (it != merge_rank_.end() && (best_rank < 0 || it->second < best_rank)) {
                best_rank = it->second;
            }
        }
        if (best_rank < 0) break;
        const auto& [left, right] = merges_[static_cast<size_t>(best_rank)];
        std::vector<std::string> merged;
        merged.reserve(symbols.size());
        for (size_t i = 0; i < symbols.size();) {
            if (i + 1 < symbols.size() && symbols[i] == left && symbols[i + 1] == right) {
                merged.push_back(left + right);
                i += 2;
            } else {
                merged.push_back(symbols[i]);
                i += 1;
            }
        }
        symbols = std::move(merged);
        if (symbols.size() < 2) break;
    }
    return symbols;
}

std::vector<int> Tokenizer::encode(const std::string& text) const {
    std::vector<int> ids;
    if (kind_ == Kind::whitespace) {
        size_t i = 0;
        while (i < text.size()) {
            char c = text[i];
            if (c == '\n') {
                ids.push_back(id_or_unk(kNewlineToken));
                ++i;
            } else if (is_space_char(c)) {
                ++i;
            } else {
                size_t j = i;
                while (j < text.size() && !is_space_char(text[j]) && text[j] != '\n') ++j;
                ids.push_back(id_or_unk(text.substr(i, j - i)));
                i = j;
            }
        }
        return ids;
    }
    // BPE: whitespace characters are unmergeable atoms, so words encode
    // independently of their neighbors.
    size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n' || is_space_char(c)) {
            ids.push_back(id_or_unk(std::string(1, c == '\t' ? ' ' : c)));
            ++i;
        } else {
            size_t j = i;
            while (j < text.size() && !is_space_char(text[j]) && text[j] != '\n') ++j;
            for (const auto& sym : bpe_word(text.substr(i, j - i))) {
                ids.push_back(id_or_unk(sym));
            }
            i = j;
        }
    }
    return ids;
}

std::string Tokenizer::decode(const std::vector<int>& ids) const {
    std::string out;
    bool prev_word = false;
    for (int id : ids) {
        if (id < 0 || static_cast<size_t>(id) >= id_to_token_.size()) {
            fail("tokenizer: decode id " + std::to_string(id) + " out of range [0, " +
                 std::to_string(id_to_token_.size()) + ")");
        }
        if (pad_id_ && id == *pad_id_) continue;
        const std::string& tok = id_to_token_[static_cast<size_t>(id)];
        if (kind_ == Kind::bpe) {
            out += tok;
            continue;
        }
        if (tok == kNewlineToken) {
            out += '\n';
            prev_word = false;
        } else {
            if (prev_word) out += ' ';
            out += tok;
            prev_word = true;
        }
    }
    return out;
}

size_t Tokenizer::count_tokens(const std::string& text) const {
    return encode(text).size();
}

const std::string& Tokenizer::token(int id) const {
    if (id < 0 || static_cast<size_t>(id) >= id_to_token_.size()) {
        fail("tokenizer: id " + std::to_string(id) + " out of range");
    }
    return id_to_token_[static_cast<size_t>(id)];
}

std::optional<int> Tokenizer::lookup(const std::string& token) const {
    auto it = token_to_id_.find(token);
    if (it == token_to_id_.end()) return std::nullopt;
    return it->second;
}

Tokenizer add_pad_token(const Tokenizer& tok) {
    if (tok.pad_id_) fail("tokenizer: pad token already present");
    if (tok.token_to_id_.contains(kPadToken)) {
        fail("tokenizer: vocab already contains " + std::string(kPadToken));
    }
    Tokenizer out = tok;
    out.pad_id_ = static_cast<int>(out.id_to_token_.size());
    out.token_to_id_.emplace(kPadToken, *out.pad_id_);
    out.id_to_token_.push_back(kPadToken);
    return out;
}

std::vector<std::string> load_vocab_file(const std::string& path) {
    std::istringstream in(read_file(path));
    std::vector<std::string> vocab;
    std::string line;
    while (std::getline(in, line)) {
        if (line == "\\n") {
            vocab.push_back(kNewlineToken);
        } else {
            vocab.push_back(line);
        }
    }
    while (!vocab.empty() && vocab.back().empty()) vocab.pop_back();
    for (size_t i = 0; i < vocab.size(); ++i) {
        if (vocab[i].empty()) {
            fail(path + ": empty vocab entry at line " + std::to_string(i + 1));
        }
    }
    return vocab;
}

void save_vocab_file(const std::vector<std::string>& vocab, const std::string& path) {
    std::string out;
    for (const auto& tok : vocab) {
        out += (tok == kNewlineToken) ? "\\n" : tok;
        out += '\n';
    }
    OutputFile file(path);
    file.write(out);
    file.commit();
}

Tokenizer load_bpe(const std::string& vocab_path, const std::string& merges_path) {
    std::vector<std::string> vocab = load_vocab_file(vocab_path);
    std::vector<std::pair<std::string, std::string>> merges;
    std::istringstream in(read_file(merges_path));
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_all_whitespace(line)) continue;
        size_t space = line.find(' ');
        if (space == std::string::npos || space == 0 || space + 1 >= line.size()) {
            fail(merges_path + ": line " + std::to_string(lineno) +
                 ": expected 'left right'");
        }
        merges.emplace_back(line.substr(0, space), line.substr(space + 1));
    }
    return Tokenizer::bpe(std::move(vocab), std::move(merges));
}

Tokenizer load_whitespace(const std::string& vocab_path) {
    return Tokenizer::whitespace(load_vocab_file(vocab_path));
}

std::vector<std::string> build_whitespace_vocab(
    const std::vector<std::string>& texts, const std::vector<std::string>& extra_tokens) {
    std::vector<std::string> vocab = {kUnkToken, kNewlineToken};
    std::unordered_map<std::string, bool> seen = {{kUnkToken, true},
                                                  {kNewlineToken, true}};
    auto push = [&](const std::string& tok) {
        if (!seen.emplace(tok, true).second) return;
        vocab.push_back(tok);
    };
    for (const auto& text : texts) {
        size_t i = 0;
        while (i < text.size()) {
            char c = text[i];
            if (c == '\n' || is_space_char(c)) {
                ++i;
            } else {
                size_t j = i;
                while (j < text.size() && !is_space_char(text[j]) && text[j] != '\n') ++j;
                push(text.substr(i, j - i));
                i = j;
            }
        }
    }
    for (const auto& tok : extra_tokens) push(tok);
    return vocab;
}

}  // namespace forge
