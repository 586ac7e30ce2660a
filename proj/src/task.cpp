#include "forge/task.hpp"

#include "forge/common.hpp"

namespace forge {

namespace {

std::vector<TaskSchema> make_schemas() {
    using K = TaskKind;
    using A = AnswerKind;
    using M = Metric;
    std::vector<TaskSchema> v;
    // kind, name, fields, labels, answer, train_pool, zero_only, metric, ptbr_only, sts_like
    v.push_back({K::MRPC, "MRPC", {"sentence1", "sentence2"}, {"0", "1"},
                 A::word, false, false, M::f1_macro, false, false});
    v.push_back({K::RTE, "RTE", {"premise", "hypothesis"}, {"0", "1"},
                 A::word, false, false, M::f1_macro, false, false});
    v.push_back({K::STSB, "STSB", {"sentence1", "sentence2"},
                 {"0", "1", "2", "3", "4", "5"},
                 A::digit, true, false, M::pearson, false, true});
    v.push_back({K::WNLI, "WNLI", {"sentence1", "sentence2"}, {"0", "1"},
                 A::word, true, false, M::f1_macro, false, false});
    v.push_back({K::BOOLQ, "BOOLQ", {"passage", "question"}, {"0", "1"},
                 A::word, true, true, M::f1_macro, false, false});
    v.push_back({K::CB, "CB", {"premise", "hypothesis"},
                 {"entailment", "contradiction", "neutral"},
                 A::word, true, false, M::f1_macro, false, false});
    v.push_back({K::COPA, "COPA", {"premise", "choice1", "choice2", "question"},
                 {"0", "1"},
                 A::digit, false, false, M::f1_macro, false, false});
    v.push_back({K::MULTIRC, "MULTIRC", {"paragraph", "question", "answer"},
                 {"0", "1"},
                 A::word, true, true, M::f1_macro, false, false});
    v.push_back({K::ASSIN2_RTE, "ASSIN2_RTE", {"premise", "hypothesis"}, {"0", "1"},
                 A::word, false, false, M::f1_macro, true, false});
    v.push_back({K::ASSIN2_STS, "ASSIN2_STS", {"premise", "hypothesis"},
                 {"0", "1", "2", "3", "4", "5"},
                 A::digit, false, false, M::pearson, true, true});
    v.push_back({K::BLUEX, "BLUEX",
                 {"question", "option_a", "option_b", "option_c", "option_d"},
                 {"a", "b", "c", "d"},
                 A::word, false, false, M::accuracy, true, false});
    v.push_back({K::ENEM2022, "ENEM2022",
                 {"question", "option_a", "option_b", "option_c", "option_d", "option_e"},
                 {"a", "b", "c", "d", "e"},
                 A::word, false, false, M::accuracy, true, false});
    return v;
}

}  // namespace

const std::vector<TaskSchema>& all_task_schemas() {
    static const std::vector<TaskSchema> schemas = make_schemas();
    return schemas;
}

const TaskSchema& task_schema(TaskKind kind) {
    for (const auto& s : all_task_schemas()) {
        if (s.kind == kind) return s;
    }
    fail("unknown task kind");
}

const std::string& task_name(TaskKind kind) { return task_schema(kind).name; }

std::optional<TaskKind> task_from_name(const std::string& name) {
    for (const auto& s : all_task_schemas()) {
        if (s.name == name) return s.kind;
    }
    return std::nullopt;
}

const std::string& split_name(Split s) {
    static const std::string names[] = {"train", "validation", "test"};
    return names[static_cast<int>(s)];
}

std::optional<Split> split_from_name(const std::string& name) {
    if (name == "train") return Split::train;
    if (name == "validation") return Split::validation;
    if (name == "test") return Split::test;
    return std::nullopt;
}

const std::string& variant_name(Variant v) {
    static const std::string names[] = {"ptpt", "ptbr"};
    return names[static_cast<int>(v)];
}

std::optional<Variant> variant_from_name(const std::string& name) {
    if (name == "ptpt") return Variant::ptpt;
    if (name == "ptbr") return Variant::ptbr;
    return std::nullopt;
}

const std::string& answer_kind_name(AnswerKind k) {
    static const std::string names[] = {"word", "digit", "text"};
    return names[static_cast<int>(k)];
}

std::optional<AnswerKind> answer_kind_from_name(const std::string& name) {
    if (name == "word") return AnswerKind::word;
    if (name == "digit") return AnswerKind::digit;
    if (name == "text") return AnswerKind::text;
    return std::nullopt;
}

const std::string& metric_name(Metric m) {
    static const std::string names[] = {"f1_macro", "accuracy", "pearson"};
    return names[static_cast<int>(m)];
}

std::optional<Metric> metric_from_name(const std::string& name) {
    if (name == "f1_macro") return Metric::f1_macro;
    if (name == "accuracy") return Metric::accuracy;
    if (name == "pearson") return Metric::pearson;
    return std::nullopt;
}

}  // namespace forge
