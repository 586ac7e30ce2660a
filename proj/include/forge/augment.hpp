#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "forge/corpus.hpp"
#include "forge/task.hpp"

namespace forge {

// The ten transforms that repurpose training-task fields into new
// input -> output tasks. Every transform maps source examples 1:1.
enum class AugmentId {
    STSB_AUG1,
    WNLI_AUG1,
    WNLI_AUG2,
    BOOLQ_AUG1,
    BOOLQ_AUG2,
    CB_AUG1,
    CB_AUG2,
    MULTIRC_AUG1,
    MULTIRC_AUG2,
    MULTIRC_AUG3,
};

// A derived-field source: either a named source field or the gold label
// (rendered through the transform's label surface map).
struct DerivedField {
    std::string derived_name;
    std::string source_field;  // empty when from_label
    bool from_label = false;
};

struct AugmentTransform {
    AugmentId id;
    std::string name;
    TaskKind source_kind;
    std::vector<DerivedField> conditions;  // become prompt fields, in order
    std::string target_field;              // source field that becomes the answer
    std::vector<std::pair<std::string, std::string>> label_surfaces;

    std::string label_surface(const std::string& raw) const;
};

const std::vector<AugmentTransform>& all_transforms();
const AugmentTransform& transform(AugmentId id);
std::optional<AugmentId> transform_from_name(const std::string& name);
const std::string& transform_name(AugmentId id);

// Maps a source train-split dataset through a transform. The derived
// dataset has one example per source example; condition fields carry the
// source texts (and the label surface for label-conditioned transforms),
// and the gold answer is the repurposed field text.
Dataset apply_transform(const Dataset& ds, const AugmentTransform& t);

struct MixtureConfig {
    std::set<TaskKind> include;       // train-pool kinds to mix in
    std::vector<AugmentId> transforms;
    bool boolq_third_copy = false;    // reproduce the published 3x BoolQ count
    uint64_t seed = 0;

    static MixtureConfig full(bool boolq_third_copy);
};

struct CountsRow {
    std::string task;
    size_t translated = 0;
    size_t augmented = 0;
    size_t total() const { return translated + augmented; }
};

struct CountsReport {
    std::vector<CountsRow> rows;
    size_t total_translated = 0;
    size_t total_augmented = 0;
    size_t grand_total() const { return total_translated + total_augmented; }

    const CountsRow& row(const std::string& task) const;
    std::string to_table() const;
    std::string to_json() const;
};

struct Mixture {
    std::vector<Dataset> parts;  // translated bases first, then derived parts
    CountsReport counts;
};

// Assembles translated + augmented training parts with per-task accounting.
Mixture build_mixture(const std::map<TaskKind, Dataset>& trains, const MixtureConfig& cfg);

}  // namespace forge
