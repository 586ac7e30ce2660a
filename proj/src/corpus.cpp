#include "forge/corpus.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "forge/augment.hpp"
#include "forge/common.hpp"
#include "forge/tokenizer.hpp"

namespace forge {

using njson = nlohmann::ordered_json;

const char* kTranslateKeyEnv = "FORGE_TRANSLATE_KEY";

const std::string& TaskExample::field(const std::string& name) const {
    for (const auto& [k, v] : fields) {
        if (k == name) return v;
    }
    fail("example " + id + ": no field named '" + name + "'");
}

namespace {

int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

// Validates one parsed record against its schema (base kinds) or against
// the deriving transform (augmented records), normalizing field order.
TaskExample validate_example(TaskExample e, const std::string& where) {
    const TaskSchema& schema = task_schema(e.kind);
    const bool derived = e.template_key != schema.name;

    std::vector<std::string> required;
    if (derived) {
        auto aug = transform_from_name(e.template_key);
        if (!aug) fail(where + ": unknown task key '" + e.template_key + "'");
        const AugmentTransform& t = transform(*aug);
        if (t.source_kind != e.kind) {
            fail(where + ": transform " + e.template_key + " does not derive from " +
                 schema.name);
        }
        for (const auto& c : t.conditions) required.push_back(c.derived_name);
    } else {
        required = schema.fields;
    }

    if (e.fields.size() != required.size()) {
        fail(where + ": example " + e.id + ": expected " +
             std::to_string(required.size()) + " fields, got " +
             std::to_string(e.fields.size()));
    }
    std::vector<std::pair<std::string, std::string>> ordered;
    for (const auto& name : required) {
        bool found = false;
        for (auto& [k, v] : e.fields) {
            if (k != name) continue;
            std::string text = normalize_whitespace(v);
            if (text.empty()) {
                fail(where + ": example " + e.id + ": field '" + name + "' is empty");
            }
            ordered.emplace_back(name, std::move(text));
            found = true;
            break;
        }
        if (!found) {
            fail(where + ": example " + e.id + ": missing field '" + name + "'");
        }
    }
    e.fields = std::move(ordered);

    if (derived) {
        e.label = normalize_whitespace(e.label);
        if (e.label.empty()) fail(where + ": example " + e.id + ": empty gold answer");
        return e;
    }

    if (schema.sts_like) {
        double score = 0.0;
        if (e.label_float) {
            score = *e.label_float;
        } else {
            try {
                size_t pos = 0;
                score = std::stod(e.label, &pos);
                if (pos != e.label.size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                fail(where + ": example " + e.id + ": label '" + e.label +
                     "' is not a numeric score");
            }
        }
        if (score < 0.0 || score > 5.0) {
            fail(where + ": example " + e.id + ": score " + std::to_string(score) +
                 " outside [0, 5]");
        }
        e.label_float = score;
        e.label = std::to_string(round_half_up(score));
    } else {
        bool ok = false;
        for (const auto& l : schema.labels) ok = ok || l == e.label;
        if (!ok) {
            fail(where + ": example " + e.id + ": label '" + e.label +
                 "' outside the " + schema.name + " domain");
        }
    }
    return e;
}

TaskExample parse_record(const njson& j, const std::string& where) {
    for (const char* key : {"id", "task", "split", "variant", "fields", "label"}) {
        if (!j.contains(key)) fail(where + ": missing key '" + std::string(key) + "'");
    }
    TaskExample e;
    e.id = j.at("id").get<std::string>();
    e.template_key = j.at("task").get<std::string>();

    if (auto k = task_from_name(e.template_key)) {
        e.kind = *k;
    } else if (auto aug = transform_from_name(e.template_key)) {
        e.kind = transform(*aug).source_kind;
    } else {
        fail(where + ": unknown task '" + e.template_key + "'");
    }

    auto sp = split_from_name(j.at("split").get<std::string>());
    if (!sp) fail(where + ": bad split '" + j.at("split").get<std::string>() + "'");
    e.split = *sp;

    auto var = variant_from_name(j.at("variant").get<std::string>());
    if (!var) fail(where + ": bad variant '" + j.at("variant").get<std::string>() + "'");
    e.variant = *var;

    if (!j.at("fields").is_object()) fail(where + ": 'fields' must be an object");
    for (auto it = j.at("fields").begin(); it != j.at("fields").end(); ++it) {
        if (!it.value().is_string()) {
            fail(where + ": field '" + it.key() + "' must be a string");
        }
        e.fields.emplace_back(it.key(), it.value().get<std::string>());
    }

    if (j.at("label").is_string()) {
        e.label = j.at("label").get<std::string>();
    } else if (j.at("label").is_number()) {
        e.label = j.at("label").dump();
    } else {
        fail(where + ": 'label' must be a string");
    }
    if (j.contains("label_float")) {
        if (!j.at("label_float").is_number()) {
            fail(where + ": 'label_float' must be a number");
        }
        e.label_float = j.at("label_float").get<double>();
    }
    return validate_example(std::move(e), where);
}

njson record_to_json(const TaskExample& e) {
    njson j;
    j["id"] = e.id;
    j["task"] = e.template_key;
    j["split"] = split_name(e.split);
    j["variant"] = variant_name(e.variant);
    njson fields = njson::object();
    for (const auto& [k, v] : e.fields) fields[k] = v;
    j["fields"] = fields;
    j["label"] = e.label;
    if (e.label_float) j["label_float"] = *e.label_float;
    return j;
}

void check_dataset_invariants(const Dataset& ds, const std::string& origin) {
    std::set<std::pair<int, std::string>> seen;
    for (const auto& e : ds.examples) {
        if (e.kind != ds.kind || e.variant != ds.variant) {
            fail(origin + ": example " + e.id + ": kind/variant differs from dataset");
        }
        if (e.template_key != ds.template_key) {
            fail(origin + ": example " + e.id + ": mixed task keys in one dataset");
        }
        auto key = std::make_pair(static_cast<int>(e.split), e.id);
        if (!seen.insert(key).second) {
            fail(origin + ": duplicate id '" + e.id + "' within split " +
                 split_name(e.split));
        }
    }
}

}  // namespace

Dataset dataset_from_jsonl(const std::string& text, TaskKind kind, Variant variant,
                           const std::string& origin) {
    Dataset ds;
    ds.kind = kind;
    ds.variant = variant;
    ds.template_key = task_name(kind);

    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_all_whitespace(line)) continue;
        const std::string where = origin + ": line " + std::to_string(lineno);
        njson j;
        try {
            j = njson::parse(line);
        } catch (const njson::exception& ex) {
            fail(where + ": malformed record: " + ex.what());
        }
        TaskExample e = parse_record(j, where);
        if (e.kind != kind) {
            fail(where + ": task '" + e.template_key + "' does not belong to dataset kind " +
                 task_name(kind));
        }
        if (e.variant != variant) {
            fail(where + ": variant mismatch: expected " + variant_name(variant));
        }
        if (first) {
            ds.template_key = e.template_key;
            first = false;
        }
        ds.examples.push_back(std::move(e));
    }
    check_dataset_invariants(ds, origin);
    return ds;
}

Dataset load_dataset(const std::string& path, TaskKind kind, Variant variant) {
    return dataset_from_jsonl(read_file(path), kind, variant, path);
}

Dataset load_dataset_auto(const std::string& path) {
    std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_all_whitespace(line)) continue;
        njson j;
        try {
            j = njson::parse(line);
        } catch (const njson::exception& ex) {
            fail(path + ": line " + std::to_string(lineno) + ": malformed record: " +
                 ex.what());
        }
        TaskExample e = parse_record(j, path + ": line " + std::to_string(lineno));
        return dataset_from_jsonl(text, e.kind, e.variant, path);
    }
    fail(path + ": empty dataset file has no kind; use an explicit task");
}

std::string dataset_to_jsonl(const Dataset& ds) {
    std::string out;
    for (const auto& e : ds.examples) {
        out += record_to_json(e).dump();
        out += '\n';
    }
    return out;
}

void emit_dataset(const Dataset& ds, const std::string& path) {
    OutputFile out(path);
    out.write(dataset_to_jsonl(ds));
    out.commit();
}

namespace {

// Translates one text, consulting/extending the shared recording. Used by
// fixture (lookup only) and live (request + record) modes.
class FixtureMap {
public:
    void load(const std::string& path) {
        std::istringstream in(read_file(path));
        std::string line;
        size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (is_all_whitespace(line)) continue;
            njson j;
            try {
                j = njson::parse(line);
            } catch (const njson::exception& ex) {
                fail(path + ": line " + std::to_string(lineno) + ": bad fixture line: " +
                     ex.what());
            }
            if (!j.contains("src") || !j.contains("dst")) {
                fail(path + ": line " + std::to_string(lineno) +
                     ": fixture line needs src and dst");
            }
            map_[j.at("src").get<std::string>()] = j.at("dst").get<std::string>();
        }
    }

    std::optional<std::string> get(const std::string& src) const {
        auto it = map_.find(src);
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }

    void record(const std::string& src, const std::string& dst, std::ofstream& sink) {
        if (!map_.emplace(src, dst).second) return;
        njson j;
        j["src"] = src;
        j["dst"] = dst;
        sink << j.dump() << '\n';
        sink.flush();
    }

private:
    std::unordered_map<std::string, std::string> map_;
};

}  // namespace

}  // namespace forge

// Pulled in only for live translation; keep below the rest so the heavy
// header does not leak into every TU including corpus.hpp.
#define CPPHTTPLIB_NO_EXCEPTIONS 0
#include <httplib.h>

namespace forge {

namespace {

std::string live_translate_one(httplib::Client& client, const std::string& key,
                               const std::string& text, Variant target,
                               const TranslationClientConfig& cfg,
                               const std::string& context) {
    njson req;
    req["text"] = text;
    req["target"] = variant_name(target);
    const std::string body = req.dump();

    std::string last_error;
    for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(cfg.backoff_ms << (attempt - 1)));
        }
        httplib::Headers headers = {{"Authorization", "Bearer " + key}};
        auto res = client.Post("/translate", headers, body, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        try {
            njson j = njson::parse(res->body);
            return j.at("translation").get<std::string>();
        } catch (const njson::exception& ex) {
            last_error = std::string("bad response body: ") + ex.what();
        }
    }
    fail(context + ": translation failed after " + std::to_string(cfg.max_retries + 1) +
         " attempts: " + last_error);
}

}  // namespace

Dataset translate_dataset(const Dataset& ds, const TranslationClientConfig& cfg,
                          int jobs) {
    Dataset out = ds;
    out.variant = cfg.target_variant;
    for (auto& e : out.examples) e.variant = cfg.target_variant;

    if (cfg.mode == TranslateMode::identity) {
        check_dataset_invariants(out, "translate");
        return out;
    }

    if (cfg.mode == TranslateMode::fixture) {
        if (cfg.fixture_path.empty()) fail("translate: fixture mode needs a fixture path");
        FixtureMap fixture;
        fixture.load(cfg.fixture_path);
        parallel_for(out.examples.size(), jobs, [&](size_t i) {
            TaskExample& e = out.examples[i];
            for (auto& [name, text] : e.fields) {
                auto dst = fixture.get(text);
                if (!dst) {
                    fail("translate: example " + e.id + ": field '" + name +
                         "': source text not in fixture");
                }
                text = normalize_whitespace(*dst);
            }
        });
        check_dataset_invariants(out, "translate");
        return out;
    }

    // Live mode. The credential check precedes any network activity.
    const char* key = std::getenv(kTranslateKeyEnv);
    if (key == nullptr || *key == '\0') {
        fail(std::string("translate: live mode requires ") + kTranslateKeyEnv +
             " to be set");
    }
    if (cfg.endpoint.empty()) fail("translate: live mode needs an endpoint");
    if (cfg.fixture_path.empty()) {
        fail("translate: live mode needs a fixture path to record into");
    }

    FixtureMap recording;
    std::ofstream sink(cfg.fixture_path, std::ios::app);
    if (!sink) fail("translate: cannot open recording file: " + cfg.fixture_path);

    httplib::Client client(cfg.endpoint);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);

    for (auto& e : out.examples) {
        for (auto& [name, text] : e.fields) {
            std::string dst;
            if (auto cached = recording.get(text)) {
                dst = *cached;
            } else {
                dst = live_translate_one(client, key, text, cfg.target_variant, cfg,
                                         "example " + e.id + ": field '" + name + "'");
                recording.record(text, dst, sink);
            }
            text = normalize_whitespace(dst);
        }
    }
    check_dataset_invariants(out, "translate");
    return out;
}

StatsReport dataset_stats(const Dataset& ds, const Tokenizer& tok) {
    StatsReport r;
    for (const auto& e : ds.examples) {
        r.examples_per_split[e.split] += 1;
        r.total_examples += 1;
        for (const auto& [name, text] : e.fields) {
            r.field_tokens += tok.count_tokens(text);
        }
        r.label_tokens += tok.count_tokens(e.label);
    }
    return r;
}

std::string stats_to_json(const std::map<std::string, StatsReport>& per_task) {
    njson out = njson::object();
    size_t all_examples = 0;
    size_t all_tokens = 0;
    for (const auto& [task, r] : per_task) {
        njson j;
        njson splits = njson::object();
        for (const auto& [sp, n] : r.examples_per_split) splits[split_name(sp)] = n;
        j["examples_per_split"] = splits;
        j["total_examples"] = r.total_examples;
        j["field_tokens"] = r.field_tokens;
        j["label_tokens"] = r.label_tokens;
        j["total_tokens"] = r.total_tokens();
        out[task] = j;
        all_examples += r.total_examples;
        all_tokens += r.total_tokens();
    }
    njson top;
    top["tasks"] = out;
    top["total_examples"] = all_examples;
    top["total_tokens"] = all_tokens;
    return top.dump(2) + "\n";
}

}  // namespace forge
