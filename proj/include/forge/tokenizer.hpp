#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace forge {

// Token counting and encoding for packing and training. Two backends share
// one interface: a whitespace tokenizer (deterministic, human-checkable
// counts; the default for tests) and a byte-pair-encoding tokenizer with
// loadable vocabulary/merges.
//
// Both backends treat whitespace as a merge barrier, so for any prefix p
// ending in whitespace and any text s, encode(p + s) == encode(p) ++
// encode-of-s. The packer relies on this to place loss-mask spans while
// still re-encoding full concatenations.
class Tokenizer {
public:
    enum class Kind { whitespace, bpe };

    static Tokenizer whitespace(std::vector<std::string> vocab);
    static Tokenizer bpe(std::vector<std::string> vocab,
                         std::vector<std::pair<std::string, std::string>> merges);

    Kind kind() const { return kind_; }
    size_t size() const { return id_to_token_.size(); }

    std::vector<int> encode(const std::string& text) const;
    std::string decode(const std::vector<int>& ids) const;
    size_t count_tokens(const std::string& text) const;

    std::optional<int> pad_id() const { return pad_id_; }
    std::optional<int> unk_id() const { return unk_id_; }
    const std::string& token(int id) const;
    std::optional<int> lookup(const std::string& token) const;

private:
    Kind kind_ = Kind::whitespace;
    std::vector<std::string> id_to_token_;
    std::unordered_map<std::string, int> token_to_id_;
    std::vector<std::pair<std::string, std::string>> merges_;
    std::unordered_map<std::string, int> merge_rank_;  // "left\x01right" -> rank
    std::optional<int> pad_id_;
    std::optional<int> unk_id_;

    std::vector<std::string> bpe_word(const std::string& word) const;
    int id_or_unk(const std::string& token) const;
    friend Tokenizer add_pad_token(const Tokenizer& tok);
};

// vocab file: one token per line, line number = id ("\n" is spelled "\\n").
std::vector<std::string> load_vocab_file(const std::string& path);
void save_vocab_file(const std::vector<std::string>& vocab, const std::string& path);

// merges file: one "left right" pair per line, in rank order.
Tokenizer load_bpe(const std::string& vocab_path, const std::string& merges_path);

Tokenizer load_whitespace(const std::string& vocab_path);

// Returns a copy with "<pad>" appended at id == previous vocab size.
// encode never emits the pad id; decode drops it.
Tokenizer add_pad_token(const Tokenizer& tok);

// Collects a whitespace vocabulary from texts in first-seen order, with
// "<unk>" at id 0 and any extra tokens appended at the end.
std::vector<std::string> build_whitespace_vocab(
    const std::vector<std::string>& texts,
    const std::vector<std::string>& extra_tokens = {});

extern const char* kUnkToken;
extern const char* kPadToken;
extern const char* kNewlineToken;

}  // namespace forge
