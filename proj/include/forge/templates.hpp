#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forge/corpus.hpp"
#include "forge/task.hpp"

namespace forge {

// Per-task, per-variant prompt template. label_map is empty for derived
// (augmentation) tasks, whose gold answers are free text carried in the
// example's label field.
struct PromptTemplate {
    std::string task_key;  // kind name, or transform name for derived tasks
    TaskKind kind = TaskKind::RTE;
    Variant variant = Variant::ptpt;
    std::string instruction;
    std::vector<std::pair<std::string, std::string>> field_prefixes;
    std::string answer_prefix;
    std::vector<std::pair<std::string, std::string>> label_map;  // raw -> surface
    AnswerKind answer_kind = AnswerKind::word;
    bool canonical = false;

    bool free_answer() const { return label_map.empty(); }

    bool operator==(const PromptTemplate&) const = default;
};

class TemplatePack {
public:
    void add(PromptTemplate t);
    const PromptTemplate& get(const std::string& task_key, Variant variant) const;
    const PromptTemplate* find(const std::string& task_key, Variant variant) const;
    const std::vector<PromptTemplate>& templates() const { return templates_; }
    size_t size() const { return templates_.size(); }

private:
    std::vector<PromptTemplate> templates_;
};

// Built-in defaults covering every base kind and every transform. Only the
// RTE ptpt template is canonical; the rest are reconstructions and can be
// overridden by a pack file.
const TemplatePack& default_template_pack();

// Pack file: line-delimited, one JSON document per template, with keys
// task, variant, instruction, prefixes, answer_prefix, labels, answer_kind,
// canonical. Emission is canonical, so save(load(f)) == f byte-exactly for
// files produced by this writer.
TemplatePack load_template_pack(const std::string& path);
TemplatePack template_pack_from_text(const std::string& text, const std::string& origin);
std::string template_pack_to_text(const TemplatePack& pack);
void save_template_pack(const TemplatePack& pack, const std::string& path);

// Maps a raw label to its answer surface (identity for free-answer
// templates) and back. unmap_label(map_label(x)) == x for every label in
// the template's domain.
std::string map_label(const PromptTemplate& t, const std::string& raw);
std::string unmap_label(const PromptTemplate& t, const std::string& surface);
std::optional<std::string> try_unmap_label(const PromptTemplate& t,
                                           const std::string& surface);

// Renders instruction, one "<prefix> <text>" line per field, then the
// answer prefix; with_answer appends " <surface>". No trailing newline.
std::string render(const PromptTemplate& t, const TaskExample& e, bool with_answer);

// Same, without the instruction line (used for in-context examples).
std::string render_body(const PromptTemplate& t, const TaskExample& e, bool with_answer);

// The answer surface for an example under a template.
std::string answer_surface(const PromptTemplate& t, const TaskExample& e);

}  // namespace forge
