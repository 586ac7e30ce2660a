#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "forge/augment.hpp"
#include "forge/corpus.hpp"
#include "forge/rng.hpp"
#include "forge/task.hpp"
#include "forge/templates.hpp"
#include "forge/tokenizer.hpp"

namespace forge {

struct PackConfig {
    int seq_len = 512;
    uint64_t seed = 0;
    // Few-shot context is sampled until the budget is exhausted (the shot
    // count has no upper bound other than seq_len).
    std::set<TaskKind> zero_shot_only_kinds = {TaskKind::BOOLQ, TaskKind::MULTIRC};
    // When false, loss also covers the gold answers of in-context examples
    // in few-shot training instances (they are response tokens too); when
    // true, only the final answer is masked in.
    bool final_answer_only = false;
    // Separator grammar constants.
    int sep_eq_min = 3, sep_eq_max = 5;      // '=' between corpus instances
    int delim_min = 3, delim_max = 4;        // '-' or '*' inside few-shot
};

struct RecordMeta {
    std::string task_key;
    std::string task;  // source kind name
    Variant variant = Variant::ptpt;
    std::string mode;  // "zero" | "few"
    int n_shots = 0;
    std::vector<std::string> source_ids;  // context ids then target id
    std::string rng_path;
    bool degraded = false;        // few-shot that fit no context at all
    bool pool_exhausted = false;  // sampling ran out of pool before overflow
    // Between this instance and the next in the textual corpus view.
    std::string separator;
    // Maximality witness: the first sampled context that overflowed.
    std::optional<std::string> discarded_id;
    std::optional<std::string> discarded_delim;
    std::optional<int> overflow_tokens;
    // Byte offset of the target example's body within text.
    size_t target_char_offset = 0;
};

// One CLM training instance, padded to seq_len. loss_mask selects exactly
// the answer-surface tokens; padding occupies a contiguous suffix.
struct PackedRecord {
    std::vector<int> input_ids;
    std::vector<int> attention_mask;
    std::vector<int> loss_mask;
    std::string text;
    RecordMeta meta;
};

struct BudgetViolation {
    std::string id;
    std::string task_key;
    size_t tokens = 0;
};

struct CorpusStats {
    size_t records = 0;
    std::map<std::string, size_t> zero_by_task;
    std::map<std::string, size_t> few_by_task;
    size_t total_real_tokens = 0;  // attention-mask-covered tokens
    size_t total_loss_tokens = 0;
    std::vector<BudgetViolation> budget_violations;

    std::string to_json() const;
};

PackedRecord build_zero_shot(const TaskExample& e, const PromptTemplate& t,
                             const Tokenizer& tok, const PackConfig& cfg);

// Samples context uniformly without replacement from pool (the train
// partition minus e), appending one example at a time and re-encoding the
// full concatenation after each addition. The first sampled example that
// overflows seq_len is discarded and sampling stops, so the emitted shot
// count is maximal along the sampled order.
PackedRecord build_few_shot(const TaskExample& e, const std::vector<const TaskExample*>& pool,
                            const PromptTemplate& t, const Tokenizer& tok,
                            const PackConfig& cfg, Rng& rng);

// Every train instance of a non-exempt kind yields two records (one zero-
// shot, one few-shot); exempt kinds yield one. Records come out in a seeded
// uniform shuffle with per-record separators chosen for the textual view.
// Budget violations are collected into stats, not thrown.
struct PackedCorpus {
    std::vector<PackedRecord> records;
    CorpusStats stats;
};
PackedCorpus compose_training_corpus(const Mixture& mixture, const TemplatePack& templates,
                                     const Tokenizer& tok, const PackConfig& cfg,
                                     int jobs = 1);

struct EvalPrompt {
    std::string id;
    std::string task_key;
    std::string prompt;
    std::string gold;  // raw label, hidden from the model
    std::optional<double> gold_float;
    int shots = 0;
};

// Instruction, then "Exemplo k" headers with fully answered context
// renders and '-'/'*' delimiters, then the target render without its gold
// answer. shots == 0 yields exactly the zero-shot render. A prompt that
// exceeds seq_len is an error: requested shots are never silently dropped.
EvalPrompt build_eval_prompt(const TaskExample& e, int shots,
                             const std::vector<const TaskExample*>& pool,
                             const PromptTemplate& t, const Tokenizer& tok,
                             const PackConfig& cfg, Rng& rng);

void emit_corpus(const std::vector<PackedRecord>& records, const std::string& path);
std::vector<PackedRecord> load_corpus(const std::string& path);
std::string corpus_to_jsonl(const std::vector<PackedRecord>& records);

// The concatenated text view: record texts joined by '='-run separator
// lines between consecutive instances.
std::string corpus_text_view(const std::vector<PackedRecord>& records);

CorpusStats corpus_stats(const std::vector<PackedRecord>& records);

std::string prompts_to_jsonl(const std::vector<EvalPrompt>& prompts);
void emit_prompts(const std::vector<EvalPrompt>& prompts, const std::string& path);
std::vector<EvalPrompt> load_prompts(const std::string& path);

}  // namespace forge
