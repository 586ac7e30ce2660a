#include "forge/packer.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "forge/common.hpp"

namespace forge {

using njson = nlohmann::ordered_json;

namespace {

struct BodyRender {
    std::string text;
    size_t answer_begin = 0;  // surface span within text
    size_t answer_end = 0;
};

BodyRender render_body_with_span(const PromptTemplate& t, const TaskExample& e) {
    BodyRender b;
    b.text = render_body(t, e, /*with_answer=*/true);
    const std::string surface = answer_surface(t, e);
    b.answer_end = b.text.size();
    b.answer_begin = b.text.size() - surface.size();
    return b;
}

// Token index range covering a character span that starts right after
// whitespace. Whitespace is a merge barrier for both tokenizer backends,
// so counting the prefix yields the exact token offset within the full
// encoding.
std::pair<size_t, size_t> token_span(const Tokenizer& tok, const std::string& text,
                                     size_t begin, size_t end) {
    size_t a = tok.count_tokens(text.substr(0, begin));
    size_t b = tok.count_tokens(text.substr(0, end));
    return {a, b};
}

PackedRecord finalize_record(const std::string& text,
                             const std::vector<std::pair<size_t, size_t>>& answer_spans,
                             const Tokenizer& tok, const PackConfig& cfg,
                             const std::string& target_id, RecordMeta meta) {
    PackedRecord rec;
    rec.text = text;
    rec.input_ids = tok.encode(text);
    const size_t n = rec.input_ids.size();
    if (n > static_cast<size_t>(cfg.seq_len)) {
        fail("pack: instance " + target_id + " renders to " + std::to_string(n) +
             " tokens, over the " + std::to_string(cfg.seq_len) + "-token budget");
    }
    if (!tok.pad_id()) fail("pack: tokenizer has no pad token");
    rec.input_ids.resize(static_cast<size_t>(cfg.seq_len), *tok.pad_id());
    rec.attention_mask.assign(static_cast<size_t>(cfg.seq_len), 0);
    for (size_t i = 0; i < n; ++i) rec.attention_mask[i] = 1;
    rec.loss_mask.assign(static_cast<size_t>(cfg.seq_len), 0);
    for (const auto& [begin, end] : answer_spans) {
        auto [a, b] = token_span(tok, text, begin, end);
        for (size_t i = a; i < b && i < n; ++i) rec.loss_mask[i] = 1;
    }
    rec.meta = std::move(meta);
    return rec;
}

std::string delim_string(const PackConfig& cfg, Rng& rng) {
    const char c = rng.bounded(2) == 0 ? '-' : '*';
    return std::string(static_cast<size_t>(rng.range(cfg.delim_min, cfg.delim_max)), c);
}

std::string separator_string(const PackConfig& cfg, Rng& rng) {
    return std::string(static_cast<size_t>(rng.range(cfg.sep_eq_min, cfg.sep_eq_max)), '=');
}

PackedRecord build_few_shot_impl(const TaskExample& e,
                                 const std::vector<const TaskExample*>& pool,
                                 const PromptTemplate& t, const Tokenizer& tok,
                                 const PackConfig& cfg, Rng& shot_rng, Rng& delim_rng) {
    if (e.split != Split::train) {
        fail("pack: few-shot instance " + e.id + " is not in the train split");
    }
    if (pool.empty()) fail("pack: empty few-shot pool for instance " + e.id);
    for (const TaskExample* p : pool) {
        if (p->id == e.id && p->split == e.split) {
            fail("pack: few-shot pool for " + e.id + " contains the target itself");
        }
    }

    std::vector<size_t> order(pool.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    shot_rng.shuffle(order);

    const BodyRender target = render_body_with_span(t, e);
    std::string prefix = t.instruction + "\n";

    RecordMeta meta;
    meta.task_key = e.template_key;
    meta.task = task_name(e.kind);
    meta.variant = e.variant;
    meta.mode = "few";

    std::vector<std::pair<size_t, size_t>> context_spans;
    int n_shots = 0;
    bool stopped_by_overflow = false;

    for (size_t k = 0; k < order.size(); ++k) {
        const TaskExample& cand = *pool[order[k]];
        const BodyRender body = render_body_with_span(t, cand);
        const std::string delim = delim_string(cfg, delim_rng);
        const std::string probe =
            prefix + body.text + "\n" + delim + "\n" + target.text;
        const size_t tokens = tok.count_tokens(probe);
        if (tokens > static_cast<size_t>(cfg.seq_len)) {
            meta.discarded_id = cand.id;
            meta.discarded_delim = delim;
            meta.overflow_tokens = static_cast<int>(tokens);
            stopped_by_overflow = true;
            break;
        }
        context_spans.emplace_back(prefix.size() + body.answer_begin,
                                   prefix.size() + body.answer_end);
        meta.source_ids.push_back(cand.id);
        prefix += body.text + "\n" + delim + "\n";
        ++n_shots;
    }

    meta.n_shots = n_shots;
    meta.degraded = n_shots == 0;
    meta.pool_exhausted = !stopped_by_overflow && n_shots == static_cast<int>(pool.size());
    meta.source_ids.push_back(e.id);
    meta.target_char_offset = prefix.size();

    const std::string text = prefix + target.text;
    std::vector<std::pair<size_t, size_t>> spans;
    if (!cfg.final_answer_only) spans = context_spans;
    spans.emplace_back(meta.target_char_offset + target.answer_begin,
                       meta.target_char_offset + target.answer_end);
    return finalize_record(text, spans, tok, cfg, e.id, std::move(meta));
}

}  // namespace

PackedRecord build_zero_shot(const TaskExample& e, const PromptTemplate& t,
                             const Tokenizer& tok, const PackConfig& cfg) {
    if (e.split != Split::train) {
        fail("pack: zero-shot instance " + e.id + " is not in the train split");
    }
    const BodyRender body = render_body_with_span(t, e);
    const std::string head = t.instruction + "\n";
    RecordMeta meta;
    meta.task_key = e.template_key;
    meta.task = task_name(e.kind);
    meta.variant = e.variant;
    meta.mode = "zero";
    meta.n_shots = 0;
    meta.source_ids = {e.id};
    meta.target_char_offset = head.size();
    return finalize_record(
        head + body.text,
        {{head.size() + body.answer_begin, head.size() + body.answer_end}}, tok, cfg,
        e.id, std::move(meta));
}

PackedRecord build_few_shot(const TaskExample& e,
                            const std::vector<const TaskExample*>& pool,
                            const PromptTemplate& t, const Tokenizer& tok,
                            const PackConfig& cfg, Rng& rng) {
    return build_few_shot_impl(e, pool, t, tok, cfg, rng, rng);
}

PackedCorpus compose_training_corpus(const Mixture& mixture, const TemplatePack& templates,
                                     const Tokenizer& tok, const PackConfig& cfg,
                                     int jobs) {
    struct Instance {
        const Dataset* part;
        size_t index;
    };
    std::vector<Instance> instances;
    for (const auto& part : mixture.parts) {
        for (size_t i = 0; i < part.examples.size(); ++i) {
            instances.push_back({&part, i});
        }
    }

    struct Slot {
        std::optional<PackedRecord> zero;
        std::optional<PackedRecord> few;
        std::optional<BudgetViolation> violation;
    };
    std::vector<Slot> slots(instances.size());

    parallel_for(instances.size(), jobs, [&](size_t i) {
        const Dataset& part = *instances[i].part;
        const TaskExample& e = part.examples[instances[i].index];
        const PromptTemplate& t = templates.get(e.template_key, e.variant);
        Slot& slot = slots[i];
        try {
            PackedRecord zero = build_zero_shot(e, t, tok, cfg);
            zero.meta.rng_path = rng_path(cfg.seed, i, RngPurpose::shots);
            slot.zero = std::move(zero);
        } catch (const Error&) {
            // seq_len shorter than the zero-shot render: report, don't abort.
            slot.violation =
                BudgetViolation{e.id, e.template_key, tok.count_tokens(render(t, e, true))};
            return;
        }
        if (cfg.zero_shot_only_kinds.contains(e.kind)) return;
        std::vector<const TaskExample*> pool;
        pool.reserve(part.examples.size() - 1);
        for (size_t j = 0; j < part.examples.size(); ++j) {
            if (j != instances[i].index) pool.push_back(&part.examples[j]);
        }
        Rng shot_rng = derive_rng(cfg.seed, i, RngPurpose::shots);
        Rng delim_rng = derive_rng(cfg.seed, i, RngPurpose::delimiter);
        PackedRecord few = build_few_shot_impl(e, pool, t, tok, cfg, shot_rng, delim_rng);
        few.meta.rng_path = rng_path(cfg.seed, i, RngPurpose::shots);
        slot.few = std::move(few);
    });

    PackedCorpus corpus;
    for (auto& slot : slots) {
        if (slot.violation) corpus.stats.budget_violations.push_back(*slot.violation);
        if (slot.zero) corpus.records.push_back(std::move(*slot.zero));
        if (slot.few) corpus.records.push_back(std::move(*slot.few));
    }

    Rng shuffle_rng = derive_rng(cfg.seed, 0, RngPurpose::shuffle);
    shuffle_rng.shuffle(corpus.records);

    for (size_t j = 0; j < corpus.records.size(); ++j) {
        Rng sep_rng = derive_rng(cfg.seed, j, RngPurpose::separator);
        corpus.records[j].meta.separator = separator_string(cfg, sep_rng);
    }

    CorpusStats counted = corpus_stats(corpus.records);
    counted.budget_violations = std::move(corpus.stats.budget_violations);
    corpus.stats = std::move(counted);
    return corpus;
}

EvalPrompt build_eval_prompt(const TaskExample& e, int shots,
                             const std::vector<const TaskExample*>& pool,
                             const PromptTemplate& t, const Tokenizer& tok,
                             const PackConfig& cfg, Rng& rng) {
    if (e.split != Split::validation) {
        fail("pack: eval instance " + e.id + " is not in the validation split");
    }
    if (shots < 0) fail("pack: negative shot count");

    EvalPrompt p;
    p.id = e.id;
    p.task_key = e.template_key;
    p.gold = e.label;
    p.gold_float = e.label_float;
    p.shots = shots;

    if (shots == 0) {
        p.prompt = render(t, e, /*with_answer=*/false);
    } else {
        if (static_cast<size_t>(shots) > pool.size()) {
            fail("pack: eval instance " + e.id + ": requested " + std::to_string(shots) +
                 " shots but the pool has " + std::to_string(pool.size()));
        }
        for (const TaskExample* c : pool) {
            if (c->split != Split::train) {
                fail("pack: eval pool example " + c->id + " is not in the train split");
            }
        }
        std::vector<size_t> order(pool.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        rng.shuffle(order);

        std::string out = t.instruction + "\n";
        for (int k = 0; k < shots; ++k) {
            const TaskExample& c = *pool[order[static_cast<size_t>(k)]];
            out += "Exemplo " + std::to_string(k + 1) + "\n";
            out += render_body(t, c, /*with_answer=*/true) + "\n";
            out += delim_string(cfg, rng) + "\n";
        }
        out += "Exemplo " + std::to_string(shots + 1) + "\n";
        out += render_body(t, e, /*with_answer=*/false);
        p.prompt = out;
    }

    const size_t tokens = tok.count_tokens(p.prompt);
    if (tokens > static_cast<size_t>(cfg.seq_len)) {
        fail("pack: eval instance " + e.id + ": prompt with " + std::to_string(shots) +
             " shots takes " + std::to_string(tokens) + " tokens, over the " +
             std::to_string(cfg.seq_len) + "-token budget");
    }
    return p;
}

namespace {

njson meta_to_json(const RecordMeta& m) {
    njson j;
    j["task_key"] = m.task_key;
    j["task"] = m.task;
    j["variant"] = variant_name(m.variant);
    j["mode"] = m.mode;
    j["n_shots"] = m.n_shots;
    j["source_ids"] = m.source_ids;
    j["rng_path"] = m.rng_path;
    j["degraded"] = m.degraded;
    j["pool_exhausted"] = m.pool_exhausted;
    j["separator"] = m.separator;
    if (m.discarded_id) j["discarded_id"] = *m.discarded_id;
    if (m.discarded_delim) j["discarded_delim"] = *m.discarded_delim;
    if (m.overflow_tokens) j["overflow_tokens"] = *m.overflow_tokens;
    j["target_char_offset"] = m.target_char_offset;
    return j;
}

RecordMeta meta_from_json(const njson& j, const std::string& where) {
    RecordMeta m;
    m.task_key = j.at("task_key").get<std::string>();
    m.task = j.at("task").get<std::string>();
    auto var = variant_from_name(j.at("variant").get<std::string>());
    if (!var) fail(where + ": bad variant in meta");
    m.variant = *var;
    m.mode = j.at("mode").get<std::string>();
    m.n_shots = j.at("n_shots").get<int>();
    m.source_ids = j.at("source_ids").get<std::vector<std::string>>();
    m.rng_path = j.at("rng_path").get<std::string>();
    m.degraded = j.at("degraded").get<bool>();
    m.pool_exhausted = j.at("pool_exhausted").get<bool>();
    m.separator = j.at("separator").get<std::string>();
    if (j.contains("discarded_id")) m.discarded_id = j.at("discarded_id").get<std::string>();
    if (j.contains("discarded_delim")) {
        m.discarded_delim = j.at("discarded_delim").get<std::string>();
    }
    if (j.contains("overflow_tokens")) m.overflow_tokens = j.at("overflow_tokens").get<int>();
    m.target_char_offset = j.at("target_char_offset").get<size_t>();
    return m;
}

}  // namespace

std::string corpus_to_jsonl(const std::vector<PackedRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        njson j;
        j["text"] = r.text;
        j["input_ids"] = r.input_ids;
        j["attention_mask"] = r.attention_mask;
        j["loss_mask"] = r.loss_mask;
        j["meta"] = meta_to_json(r.meta);
        out += j.dump();
        out += '\n';
    }
    return out;
}

void emit_corpus(const std::vector<PackedRecord>& records, const std::string& path) {
    OutputFile out(path);
    out.write(corpus_to_jsonl(records));
    out.commit();
}

std::vector<PackedRecord> load_corpus(const std::string& path) {
    std::vector<PackedRecord> records;
    std::istringstream in(read_file(path));
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_all_whitespace(line)) continue;
        const std::string where = path + ": line " + std::to_string(lineno);
        njson j;
        try {
            j = njson::parse(line);
        } catch (const njson::exception& ex) {
            fail(where + ": malformed record: " + ex.what());
        }
        PackedRecord r;
        try {
            r.text = j.at("text").get<std::string>();
            r.input_ids = j.at("input_ids").get<std::vector<int>>();
            r.attention_mask = j.at("attention_mask").get<std::vector<int>>();
            r.loss_mask = j.at("loss_mask").get<std::vector<int>>();
            r.meta = meta_from_json(j.at("meta"), where);
        } catch (const njson::exception& ex) {
            fail(where + ": bad record: " + ex.what());
        }
        if (r.input_ids.size() != r.attention_mask.size() ||
            r.input_ids.size() != r.loss_mask.size()) {
            fail(where + ": mask lengths disagree with input_ids");
        }
        records.push_back(std::move(r));
    }
    return records;
}

std::string corpus_text_view(const std::vector<PackedRecord>& records) {
    std::string out;
    for (size_t i = 0; i < records.size(); ++i) {
        out += records[i].text;
        if (i + 1 < records.size()) {
            out += '\n';
            out += records[i].meta.separator;
        }
        out += '\n';
    }
    return out;
}

CorpusStats corpus_stats(const std::vector<PackedRecord>& records) {
    CorpusStats s;
    s.records = records.size();
    for (const auto& r : records) {
        auto& by_task = r.meta.mode == "zero" ? s.zero_by_task : s.few_by_task;
        by_task[r.meta.task_key] += 1;
        for (size_t i = 0; i < r.attention_mask.size(); ++i) {
            s.total_real_tokens += static_cast<size_t>(r.attention_mask[i]);
            s.total_loss_tokens += static_cast<size_t>(r.loss_mask[i]);
        }
    }
    return s;
}

std::string CorpusStats::to_json() const {
    njson j;
    j["records"] = records;
    njson zero = njson::object();
    for (const auto& [k, v] : zero_by_task) zero[k] = v;
    njson few = njson::object();
    for (const auto& [k, v] : few_by_task) few[k] = v;
    j["zero_by_task"] = zero;
    j["few_by_task"] = few;
    j["total_real_tokens"] = total_real_tokens;
    j["total_loss_tokens"] = total_loss_tokens;
    njson viols = njson::array();
    for (const auto& v : budget_violations) {
        njson e;
        e["id"] = v.id;
        e["task"] = v.task_key;
        e["tokens"] = v.tokens;
        viols.push_back(e);
    }
    j["budget_violations"] = viols;
    return j.dump(2) + "\n";
}

std::string prompts_to_jsonl(const std::vector<EvalPrompt>& prompts) {
    std::string out;
    for (const auto& p : prompts) {
        njson j;
        j["id"] = p.id;
        j["task"] = p.task_key;
        j["prompt"] = p.prompt;
        j["gold"] = p.gold;
        if (p.gold_float) j["gold_float"] = *p.gold_float;
        j["shots"] = p.shots;
        out += j.dump();
        out += '\n';
    }
    return out;
}

void emit_prompts(const std::vector<EvalPrompt>& prompts, const std::string& path) {
    OutputFile out(path);
    out.write(prompts_to_jsonl(prompts));
    out.commit();
}

std::vector<EvalPrompt> load_prompts(const std::string& path) {
    std::vector<EvalPrompt> prompts;
    std::istringstream in(read_file(path));
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_all_whitespace(line)) continue;
        const std::string where = path + ": line " + std::to_string(lineno);
        njson j;
        try {
            j = njson::parse(line);
        } catch (const njson::exception& ex) {
            fail(where + ": malformed prompt record: " + ex.what());
        }
        EvalPrompt p;
        try {
            p.id = j.at("id").get<std::string>();
            p.task_key = j.at("task").get<std::string>();
            p.prompt = j.at("prompt").get<std::string>();
            p.gold = j.at("gold").get<std::string>();
            if (j.contains("gold_float")) p.gold_float = j.at("gold_float").get<double>();
            p.shots = j.value("shots", 0);
        } catch (const njson::exception& ex) {
            fail(where + ": bad prompt record: " + ex.what());
        }
        prompts.push_back(std::move(p));
    }
    return prompts;
}

}  // namespace forge
