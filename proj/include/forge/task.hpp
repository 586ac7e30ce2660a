#pragma once

#include <optional>
#include <string>
#include <vector>

namespace forge {

// Benchmark task kinds. Train-pool kinds feed the CLM mixture; test-only
// kinds are reserved for generative evaluation.
enum class TaskKind {
    MRPC,
    RTE,
    STSB,
    WNLI,
    BOOLQ,
    CB,
    COPA,
    MULTIRC,
    ASSIN2_RTE,
    ASSIN2_STS,
    BLUEX,
    ENEM2022,
};

enum class Split { train, validation, test };
enum class Variant { ptpt, ptbr };
enum class AnswerKind { word, digit, text };
enum class Metric { f1_macro, accuracy, pearson };

struct TaskSchema {
    TaskKind kind;
    std::string name;
    std::vector<std::string> fields;   // required field names, in order
    std::vector<std::string> labels;   // closed raw-label domain
    AnswerKind answer_kind;
    bool train_pool;                   // part of the CLM training pool
    bool zero_shot_only;               // examples too large for few-shot mode
    Metric metric;
    bool ptbr_only;                    // reused tasks exist only for ptbr
    bool sts_like;                     // gold is a float score rounded to 0..5
};

const std::vector<TaskSchema>& all_task_schemas();
const TaskSchema& task_schema(TaskKind kind);

const std::string& task_name(TaskKind kind);
std::optional<TaskKind> task_from_name(const std::string& name);

const std::string& split_name(Split s);
std::optional<Split> split_from_name(const std::string& name);

const std::string& variant_name(Variant v);
std::optional<Variant> variant_from_name(const std::string& name);

const std::string& answer_kind_name(AnswerKind k);
std::optional<AnswerKind> answer_kind_from_name(const std::string& name);

const std::string& metric_name(Metric m);
std::optional<Metric> metric_from_name(const std::string& name);

}  // namespace forge
