#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forge/task.hpp"

namespace forge {

class Tokenizer;

// One benchmark item. `fields` is ordered per the task schema (or per the
// deriving transform for augmented examples). `template_key` selects the
// prompt template: the kind name for base data, the transform name for
// augmented data.
struct TaskExample {
    std::string id;
    TaskKind kind = TaskKind::RTE;
    Split split = Split::train;
    Variant variant = Variant::ptpt;
    std::vector<std::pair<std::string, std::string>> fields;
    std::string label;
    std::optional<double> label_float;
    std::string template_key;

    const std::string& field(const std::string& name) const;
};

struct Dataset {
    TaskKind kind = TaskKind::RTE;
    Variant variant = Variant::ptpt;
    std::string template_key;  // shared by all examples
    std::vector<TaskExample> examples;

    size_t size() const { return examples.size(); }
    bool empty() const { return examples.empty(); }
};

enum class TranslateMode { identity, fixture, live };

struct TranslationClientConfig {
    TranslateMode mode = TranslateMode::identity;
    std::string endpoint;      // live only, e.g. http://host:port
    std::string fixture_path;  // fixture: mapping to replay; live: recording sink
    Variant target_variant = Variant::ptpt;
    int max_retries = 3;
    int backoff_ms = 100;
};

// Name of the environment variable holding the live-mode credential.
extern const char* kTranslateKeyEnv;

// Reads a line-delimited dataset file, validating every record against the
// schema of `kind` (or against the deriving transform for augmented files).
// Field texts are whitespace-normalized; STS-style float golds are rounded
// half-up to the 0..5 label and kept in label_float.
Dataset load_dataset(const std::string& path, TaskKind kind, Variant variant);

// Peeks the first record to resolve kind/variant, then loads.
Dataset load_dataset_auto(const std::string& path);

void emit_dataset(const Dataset& ds, const std::string& path);
std::string dataset_to_jsonl(const Dataset& ds);
Dataset dataset_from_jsonl(const std::string& text, TaskKind kind, Variant variant,
                           const std::string& origin);

// Replaces every text field by its translation. Counts, ids, splits and
// labels are preserved in every mode; the output carries target_variant.
//   identity: texts verbatim.
//   fixture:  each source text resolved through the recorded mapping.
//   live:     one JSON-over-HTTP request per field, retry with backoff,
//             recording a fixture as it goes so the run is replayable.
Dataset translate_dataset(const Dataset& ds, const TranslationClientConfig& cfg,
                          int jobs = 1);

struct StatsReport {
    std::map<Split, size_t> examples_per_split;
    size_t field_tokens = 0;  // tokens over field texts only
    size_t label_tokens = 0;  // tokens over raw label surfaces
    size_t total_examples = 0;

    size_t total_tokens() const { return field_tokens + label_tokens; }
};

// Per-split counts plus token totals over example texts and label surfaces.
// Instructions and few-shot context are deliberately excluded from token
// accounting (counts concern examples only).
StatsReport dataset_stats(const Dataset& ds, const Tokenizer& tok);

std::string stats_to_json(const std::map<std::string, StatsReport>& per_task);

}  // namespace forge
