#include "forge/templates.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "forge/augment.hpp"
#include "forge/common.hpp"

namespace forge {

using njson = nlohmann::ordered_json;

namespace {

bool single_word(const std::string& s) {
    return !s.empty() && s.find(' ') == std::string::npos &&
           s.find('\n') == std::string::npos && s.find('\t') == std::string::npos;
}

void validate_template(const PromptTemplate& t) {
    const std::string where = "template " + t.task_key + "/" + variant_name(t.variant);

    std::vector<std::string> required;
    bool derived = false;
    if (auto kind = task_from_name(t.task_key)) {
        const TaskSchema& schema = task_schema(*kind);
        if (*kind != t.kind) fail(where + ": kind does not match task key");
        required = schema.fields;
        if (t.answer_kind != schema.answer_kind) {
            fail(where + ": answer_kind must be " +
                 answer_kind_name(schema.answer_kind) + " for " + schema.name);
        }
        if (t.label_map.empty()) fail(where + ": label map must cover the label domain");
        // Totality and injectivity over the schema's label domain.
        std::vector<std::string> surfaces;
        for (const auto& raw : schema.labels) {
            const std::string* surface = nullptr;
            for (const auto& [r, s] : t.label_map) {
                if (r == raw) { surface = &s; break; }
            }
            if (!surface) fail(where + ": label map missing raw label '" + raw + "'");
            if (std::find(surfaces.begin(), surfaces.end(), *surface) != surfaces.end()) {
                fail(where + ": label map not injective at surface '" + *surface + "'");
            }
            surfaces.push_back(*surface);
        }
        if (t.label_map.size() != schema.labels.size()) {
            fail(where + ": label map has entries outside the label domain");
        }
        for (const auto& [raw, surface] : t.label_map) {
            if (t.answer_kind == AnswerKind::word && !single_word(surface)) {
                fail(where + ": word answer surface '" + surface + "' is not a single word");
            }
            if (t.answer_kind == AnswerKind::digit &&
                (surface.size() != 1 || surface[0] < '0' || surface[0] > '9')) {
                fail(where + ": digit answer surface '" + surface + "' is not a bare digit");
            }
        }
    } else if (auto aug = transform_from_name(t.task_key)) {
        derived = true;
        const AugmentTransform& tr = transform(*aug);
        if (tr.source_kind != t.kind) fail(where + ": kind does not match transform source");
        for (const auto& c : tr.conditions) required.push_back(c.derived_name);
        if (!t.label_map.empty()) {
            fail(where + ": derived-task templates take free-text answers; label map must be empty");
        }
        if (t.answer_kind != AnswerKind::text) {
            fail(where + ": derived-task templates use answer_kind text");
        }
    } else {
        fail(where + ": unknown task key");
    }
    (void)derived;

    if (t.field_prefixes.size() != required.size()) {
        fail(where + ": prefixes cover " + std::to_string(t.field_prefixes.size()) +
             " fields, schema has " + std::to_string(required.size()));
    }
    for (size_t i = 0; i < required.size(); ++i) {
        if (t.field_prefixes[i].first != required[i]) {
            fail(where + ": prefix " + std::to_string(i) + " is for '" +
                 t.field_prefixes[i].first + "', schema order wants '" + required[i] + "'");
        }
        if (t.field_prefixes[i].second.empty()) {
            fail(where + ": empty prefix for field '" + required[i] + "'");
        }
    }
    if (t.instruction.empty()) fail(where + ": empty instruction");
    if (t.answer_prefix.empty()) fail(where + ": empty answer prefix");
}

using Prefixes = std::vector<std::pair<std::string, std::string>>;
using Labels = std::vector<std::pair<std::string, std::string>>;

PromptTemplate mk(const std::string& task_key, Variant variant,
                  const std::string& instruction, Prefixes prefixes, Labels labels,
                  AnswerKind answer_kind, bool canonical = false) {
    PromptTemplate t;
    t.task_key = task_key;
    if (auto kind = task_from_name(task_key)) {
        t.kind = *kind;
    } else if (auto aug = transform_from_name(task_key)) {
        t.kind = transform(*aug).source_kind;
    } else {
        fail("default pack: unknown task key " + task_key);
    }
    t.variant = variant;
    t.instruction = instruction;
    t.field_prefixes = std::move(prefixes);
    t.answer_prefix = "Resposta:";
    t.label_map = std::move(labels);
    t.answer_kind = answer_kind;
    t.canonical = canonical;
    return t;
}

const Labels kSimNao10 = {{"1", "sim"}, {"0", "não"}};
const Labels kSimNao01 = {{"0", "sim"}, {"1", "não"}};
const Labels kDigits05 = {{"0", "0"}, {"1", "1"}, {"2", "2"},
                          {"3", "3"}, {"4", "4"}, {"5", "5"}};

TemplatePack make_default_pack() {
    TemplatePack pack;
    const Prefixes two_sents = {{"sentence1", "Frase 1:"}, {"sentence2", "Frase 2:"}};
    const Prefixes prem_hyp = {{"premise", "Frase 1:"}, {"hypothesis", "Frase 2:"}};

    // RTE. The ptpt instruction and label mapping are reproduced verbatim
    // from the published template; everything else in this pack is an
    // authored reconstruction (canonical = false) and can be overridden.
    pack.add(mk("RTE", Variant::ptpt,
                "Nesta tarefa vais receber duas frases. Indica se a primeira frase "
                "implica claramente a segunda frase. Ou seja, indica se se conclui que "
                "a segunda frase é verdadeira desde que a primeira frase seja "
                "verdadeira. Deves responder `sim' se a primeira frase implica a "
                "segunda frase ou deves responder `não' no caso contrário",
                prem_hyp, kSimNao01, AnswerKind::word, /*canonical=*/true));
    pack.add(mk("RTE", Variant::ptbr,
                "Nesta tarefa você vai receber duas frases. Indique se a primeira "
                "frase implica claramente a segunda frase. Ou seja, indique se é "
                "possível concluir que a segunda frase é verdadeira desde que a "
                "primeira frase seja verdadeira. Você deve responder `sim' se a "
                "primeira frase implica a segunda frase ou responder `não' caso "
                "contrário",
                prem_hyp, kSimNao01, AnswerKind::word));

    pack.add(mk("MRPC", Variant::ptpt,
                "Nesta tarefa vais receber duas frases. Indica se as duas frases "
                "exprimem o mesmo conteúdo, ou seja, se uma é paráfrase da outra. "
                "Deves responder `sim' se as frases forem equivalentes ou `não' no "
                "caso contrário",
                two_sents, kSimNao10, AnswerKind::word));
    pack.add(mk("MRPC", Variant::ptbr,
                "Nesta tarefa você vai receber duas frases. Indique se as duas frases "
                "expressam o mesmo conteúdo, ou seja, se uma é paráfrase da outra. "
                "Você deve responder `sim' se as frases forem equivalentes ou `não' "
                "caso contrário",
                two_sents, kSimNao10, AnswerKind::word));

    pack.add(mk("STSB", Variant::ptpt,
                "Nesta tarefa vais receber duas frases. Avalia a semelhança semântica "
                "entre as duas frases numa escala de 0 a 5, em que 0 indica conteúdos "
                "completamente diferentes e 5 indica conteúdos equivalentes. Deves "
                "responder apenas com um dígito de 0 a 5",
                two_sents, kDigits05, AnswerKind::digit));
    pack.add(mk("STSB", Variant::ptbr,
                "Nesta tarefa você vai receber duas frases. Avalie a semelhança "
                "semântica entre as duas frases em uma escala de 0 a 5, em que 0 "
                "indica conteúdos completamente diferentes e 5 indica conteúdos "
                "equivalentes. Você deve responder apenas com um dígito de 0 a 5",
                two_sents, kDigits05, AnswerKind::digit));

    pack.add(mk("WNLI", Variant::ptpt,
                "Nesta tarefa vais receber duas frases. Indica se a segunda frase é "
                "verdadeira assumindo que a primeira frase é verdadeira. Deves "
                "responder `sim' se a segunda frase for verdadeira ou `não' no caso "
                "contrário",
                two_sents, kSimNao10, AnswerKind::word));
    pack.add(mk("WNLI", Variant::ptbr,
                "Nesta tarefa você vai receber duas frases. Indique se a segunda "
                "frase é verdadeira assumindo que a primeira frase é verdadeira. Você "
                "deve responder `sim' se a segunda frase for verdadeira ou `não' caso "
                "contrário",
                two_sents, kSimNao10, AnswerKind::word));

    const Prefixes boolq = {{"passage", "Texto:"}, {"question", "Pergunta:"}};
    pack.add(mk("BOOLQ", Variant::ptpt,
                "Nesta tarefa vais receber um texto e uma pergunta. Responde à "
                "pergunta com base na informação do texto. Deves responder apenas "
                "`sim' ou `não'",
                boolq, kSimNao10, AnswerKind::word));
    pack.add(mk("BOOLQ", Variant::ptbr,
                "Nesta tarefa você vai receber um texto e uma pergunta. Responda à "
                "pergunta com base na informação do texto. Você deve responder apenas "
                "`sim' ou `não'",
                boolq, kSimNao10, AnswerKind::word));

    const Labels cb_labels = {{"entailment", "implicação"},
                              {"contradiction", "contradição"},
                              {"neutral", "neutro"}};
    pack.add(mk("CB", Variant::ptpt,
                "Nesta tarefa vais receber duas frases. Indica a relação da segunda "
                "frase com a primeira frase. Deves responder `implicação' se a "
                "segunda frase decorre da primeira, `contradição' se a segunda frase "
                "contradiz a primeira, ou `neutro' em qualquer outro caso",
                prem_hyp, cb_labels, AnswerKind::word));
    pack.add(mk("CB", Variant::ptbr,
                "Nesta tarefa você vai receber duas frases. Indique a relação da "
                "segunda frase com a primeira frase. Você deve responder `implicação' "
                "se a segunda frase decorre da primeira, `contradição' se a segunda "
                "frase contradiz a primeira, ou `neutro' em qualquer outro caso",
                prem_hyp, cb_labels, AnswerKind::word));

    const Prefixes copa = {{"premise", "Premissa:"},
                           {"choice1", "Alternativa 1:"},
                           {"choice2", "Alternativa 2:"},
                           {"question", "Pergunta:"}};
    const Labels copa_labels = {{"0", "1"}, {"1", "2"}};
    pack.add(mk("COPA", Variant::ptpt,
                "Nesta tarefa vais receber uma premissa, duas alternativas e uma "
                "pergunta. Indica qual das alternativas corresponde ao que é pedido "
                "na pergunta. Deves responder apenas com o dígito 1 ou 2",
                copa, copa_labels, AnswerKind::digit));
    pack.add(mk("COPA", Variant::ptbr,
                "Nesta tarefa você vai receber uma premissa, duas alternativas e uma "
                "pergunta. Indique qual das alternativas corresponde ao que é pedido "
                "na pergunta. Você deve responder apenas com o dígito 1 ou 2",
                copa, copa_labels, AnswerKind::digit));

    const Prefixes multirc = {{"paragraph", "Texto:"},
                              {"question", "Pergunta:"},
                              {"answer", "Resposta candidata:"}};
    pack.add(mk("MULTIRC", Variant::ptpt,
                "Nesta tarefa vais receber um texto, uma pergunta e uma resposta "
                "candidata. Indica se a resposta candidata responde corretamente à "
                "pergunta com base no texto. Deves responder `sim' se a resposta "
                "estiver correta ou `não' no caso contrário",
                multirc, kSimNao10, AnswerKind::word));
    pack.add(mk("MULTIRC", Variant::ptbr,
                "Nesta tarefa você vai receber um texto, uma pergunta e uma resposta "
                "candidata. Indique se a resposta candidata responde corretamente à "
                "pergunta com base no texto. Você deve responder `sim' se a resposta "
                "estiver correta ou `não' caso contrário",
                multirc, kSimNao10, AnswerKind::word));

    // Reused tasks exist for ptbr only.
    pack.add(mk("ASSIN2_RTE", Variant::ptbr,
                "Nesta tarefa você vai receber duas frases. Indique se a primeira "
                "frase implica a segunda frase. Você deve responder `sim' se a "
                "primeira frase implica a segunda frase ou responder `não' caso "
                "contrário",
                prem_hyp, kSimNao10, AnswerKind::word));
    pack.add(mk("ASSIN2_STS", Variant::ptbr,
                "Nesta tarefa você vai receber duas frases. Avalie a semelhança "
                "semântica entre as duas frases em uma escala de 0 a 5, em que 0 "
                "indica conteúdos completamente diferentes e 5 indica conteúdos "
                "equivalentes. Você deve responder apenas com um dígito de 0 a 5",
                prem_hyp, kDigits05, AnswerKind::digit));

    const Prefixes bluex = {{"question", "Pergunta:"},
                            {"option_a", "Opção a:"},
                            {"option_b", "Opção b:"},
                            {"option_c", "Opção c:"},
                            {"option_d", "Opção d:"}};
    const Labels abcd = {{"a", "a"}, {"b", "b"}, {"c", "c"}, {"d", "d"}};
    pack.add(mk("BLUEX", Variant::ptbr,
                "Nesta tarefa você vai receber uma pergunta de exame e quatro opções "
                "de resposta. Indique a opção correta. Você deve responder apenas com "
                "a letra da opção correta",
                bluex, abcd, AnswerKind::word));

    Prefixes enem = bluex;
    enem.emplace_back("option_e", "Opção e:");
    Labels abcde = abcd;
    abcde.emplace_back("e", "e");
    pack.add(mk("ENEM2022", Variant::ptbr,
                "Nesta tarefa você vai receber uma pergunta de exame e cinco opções "
                "de resposta. Indique a opção correta. Você deve responder apenas com "
                "a letra da opção correta",
                enem, abcde, AnswerKind::word));

    // Derived-task templates for the augmentation transforms. Answers are
    // free text (the repurposed field), so no label map.
    const Labels none = {};
    const Prefixes frase_pont = {{"frase", "Frase:"}, {"pontuacao", "Pontuação:"}};
    pack.add(mk("STSB_AUG1", Variant::ptpt,
                "Nesta tarefa vais receber uma frase e uma pontuação de semelhança "
                "semântica numa escala de 0 a 5. Escreve uma segunda frase cuja "
                "semelhança semântica com a frase dada corresponda à pontuação "
                "indicada",
                frase_pont, none, AnswerKind::text));
    pack.add(mk("STSB_AUG1", Variant::ptbr,
                "Nesta tarefa você vai receber uma frase e uma pontuação de "
                "semelhança semântica em uma escala de 0 a 5. Escreva uma segunda "
                "frase cuja semelhança semântica com a frase dada corresponda à "
                "pontuação indicada",
                frase_pont, none, AnswerKind::text));

    const Prefixes frase_inf = {{"frase", "Frase:"}, {"inferencia", "Inferência:"}};
    pack.add(mk("WNLI_AUG1", Variant::ptpt,
                "Nesta tarefa vais receber uma frase e um tipo de inferência, "
                "positiva ou negativa. Escreve uma segunda frase que seja verdadeira "
                "se a inferência for positiva, ou falsa se a inferência for negativa, "
                "assumindo a frase dada",
                frase_inf, none, AnswerKind::text));
    pack.add(mk("WNLI_AUG1", Variant::ptbr,
                "Nesta tarefa você vai receber uma frase e um tipo de inferência, "
                "positiva ou negativa. Escreva uma segunda frase que seja verdadeira "
                "se a inferência for positiva, ou falsa se a inferência for negativa, "
                "assumindo a frase dada",
                frase_inf, none, AnswerKind::text));
    pack.add(mk("WNLI_AUG2", Variant::ptpt,
                "Nesta tarefa vais receber uma frase e um tipo de inferência, "
                "positiva ou negativa. Escreve uma primeira frase que, se for "
                "verdadeira, torne a frase dada verdadeira quando a inferência é "
                "positiva, ou falsa quando a inferência é negativa",
                frase_inf, none, AnswerKind::text));
    pack.add(mk("WNLI_AUG2", Variant::ptbr,
                "Nesta tarefa você vai receber uma frase e um tipo de inferência, "
                "positiva ou negativa. Escreva uma primeira frase que, se for "
                "verdadeira, torne a frase dada verdadeira quando a inferência é "
                "positiva, ou falsa quando a inferência é negativa",
                frase_inf, none, AnswerKind::text));

    const Prefixes texto_resp = {{"texto", "Texto:"},
                                 {"resposta_esperada", "Resposta esperada:"}};
    pack.add(mk("BOOLQ_AUG1", Variant::ptpt,
                "Nesta tarefa vais receber um texto e uma resposta, sim ou não. "
                "Escreve uma pergunta sobre o texto cuja resposta correta seja a "
                "resposta indicada",
                texto_resp, none, AnswerKind::text));
    pack.add(mk("BOOLQ_AUG1", Variant::ptbr,
                "Nesta tarefa você vai receber um texto e uma resposta, sim ou não. "
                "Escreva uma pergunta sobre o texto cuja resposta correta seja a "
                "resposta indicada",
                texto_resp, none, AnswerKind::text));
    const Prefixes perg_resp = {{"pergunta", "Pergunta:"},
                                {"resposta_esperada", "Resposta esperada:"}};
    pack.add(mk("BOOLQ_AUG2", Variant::ptpt,
                "Nesta tarefa vais receber uma pergunta e uma resposta, sim ou não. "
                "Escreve um texto com base no qual a resposta correta à pergunta seja "
                "a resposta indicada",
                perg_resp, none, AnswerKind::text));
    pack.add(mk("BOOLQ_AUG2", Variant::ptbr,
                "Nesta tarefa você vai receber uma pergunta e uma resposta, sim ou "
                "não. Escreva um texto com base no qual a resposta correta à pergunta "
                "seja a resposta indicada",
                perg_resp, none, AnswerKind::text));

    const Prefixes frase_rel = {{"frase", "Frase:"}, {"relacao", "Relação:"}};
    pack.add(mk("CB_AUG1", Variant::ptpt,
                "Nesta tarefa vais receber uma frase e uma relação de inferência, "
                "implicação, contradição ou neutro. Escreve uma segunda frase cuja "
                "relação com a frase dada seja a relação indicada",
                frase_rel, none, AnswerKind::text));
    pack.add(mk("CB_AUG1", Variant::ptbr,
                "Nesta tarefa você vai receber uma frase e uma relação de inferência, "
                "implicação, contradição ou neutro. Escreva uma segunda frase cuja "
                "relação com a frase dada seja a relação indicada",
                frase_rel, none, AnswerKind::text));
    pack.add(mk("CB_AUG2", Variant::ptpt,
                "Nesta tarefa vais receber uma frase e uma relação de inferência, "
                "implicação, contradição ou neutro. Escreve uma primeira frase que "
                "tenha com a frase dada a relação indicada",
                frase_rel, none, AnswerKind::text));
    pack.add(mk("CB_AUG2", Variant::ptbr,
                "Nesta tarefa você vai receber uma frase e uma relação de inferência, "
                "implicação, contradição ou neutro. Escreva uma primeira frase que "
                "tenha com a frase dada a relação indicada",
                frase_rel, none, AnswerKind::text));

    const Prefixes texto_cand = {{"texto", "Texto:"},
                                 {"resposta_candidata", "Resposta candidata:"}};
    pack.add(mk("MULTIRC_AUG1", Variant::ptpt,
                "Nesta tarefa vais receber um texto e uma resposta. Escreve uma "
                "pergunta sobre o texto à qual a resposta dada se refira",
                texto_cand, none, AnswerKind::text));
    pack.add(mk("MULTIRC_AUG1", Variant::ptbr,
                "Nesta tarefa você vai receber um texto e uma resposta. Escreva uma "
                "pergunta sobre o texto à qual a resposta dada se refira",
                texto_cand, none, AnswerKind::text));
    const Prefixes perg_cand = {{"pergunta", "Pergunta:"},
                                {"resposta_candidata", "Resposta candidata:"}};
    pack.add(mk("MULTIRC_AUG2", Variant::ptpt,
                "Nesta tarefa vais receber uma pergunta e uma resposta. Escreve um "
                "texto a partir do qual a pergunta e a resposta dadas façam sentido",
                perg_cand, none, AnswerKind::text));
    pack.add(mk("MULTIRC_AUG2", Variant::ptbr,
                "Nesta tarefa você vai receber uma pergunta e uma resposta. Escreva "
                "um texto a partir do qual a pergunta e a resposta dadas façam "
                "sentido",
                perg_cand, none, AnswerKind::text));
    const Prefixes texto_perg = {{"texto", "Texto:"}, {"pergunta", "Pergunta:"}};
    pack.add(mk("MULTIRC_AUG3", Variant::ptpt,
                "Nesta tarefa vais receber um texto e uma pergunta. Escreve uma "
                "resposta à pergunta com base no texto",
                texto_perg, none, AnswerKind::text));
    pack.add(mk("MULTIRC_AUG3", Variant::ptbr,
                "Nesta tarefa você vai receber um texto e uma pergunta. Escreva uma "
                "resposta à pergunta com base no texto",
                texto_perg, none, AnswerKind::text));

    return pack;
}

}  // namespace

void TemplatePack::add(PromptTemplate t) {
    validate_template(t);
    if (find(t.task_key, t.variant) != nullptr) {
        fail("template pack: duplicate template for " + t.task_key + "/" +
             variant_name(t.variant));
    }
    templates_.push_back(std::move(t));
}

const PromptTemplate* TemplatePack::find(const std::string& task_key,
                                         Variant variant) const {
    for (const auto& t : templates_) {
        if (t.task_key == task_key && t.variant == variant) return &t;
    }
    return nullptr;
}

const PromptTemplate& TemplatePack::get(const std::string& task_key,
                                        Variant variant) const {
    const PromptTemplate* t = find(task_key, variant);
    if (t == nullptr) {
        fail("template pack: no template for " + task_key + "/" + variant_name(variant));
    }
    return *t;
}

const TemplatePack& default_template_pack() {
    static const TemplatePack pack = make_default_pack();
    return pack;
}

TemplatePack template_pack_from_text(const std::string& text, const std::string& origin) {
    TemplatePack pack;
    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_all_whitespace(line)) continue;
        const std::string where = origin + ": line " + std::to_string(lineno);
        njson j;
        try {
            j = njson::parse(line);
        } catch (const njson::exception& ex) {
            fail(where + ": malformed template document: " + ex.what());
        }
        PromptTemplate t;
        try {
            t.task_key = j.at("task").get<std::string>();
            auto var = variant_from_name(j.at("variant").get<std::string>());
            if (!var) fail(where + ": bad variant");
            t.variant = *var;
            auto ak = answer_kind_from_name(j.at("answer_kind").get<std::string>());
            if (!ak) fail(where + ": bad answer_kind");
            t.answer_kind = *ak;
            t.canonical = j.value("canonical", false);
            t.instruction = j.at("instruction").get<std::string>();
            for (const auto& p : j.at("prefixes")) {
                t.field_prefixes.emplace_back(p.at(0).get<std::string>(),
                                              p.at(1).get<std::string>());
            }
            t.answer_prefix = j.at("answer_prefix").get<std::string>();
            for (const auto& p : j.at("labels")) {
                t.label_map.emplace_back(p.at(0).get<std::string>(),
                                         p.at(1).get<std::string>());
            }
        } catch (const njson::exception& ex) {
            fail(where + ": bad template document: " + ex.what());
        }
        if (auto kind = task_from_name(t.task_key)) {
            t.kind = *kind;
        } else if (auto aug = transform_from_name(t.task_key)) {
            t.kind = transform(*aug).source_kind;
        } else {
            fail(where + ": unknown task key '" + t.task_key + "'");
        }
        try {
            pack.add(std::move(t));
        } catch (const Error& ex) {
            fail(where + ": " + ex.what());
        }
    }
    return pack;
}

TemplatePack load_template_pack(const std::string& path) {
    return template_pack_from_text(read_file(path), path);
}

std::string template_pack_to_text(const TemplatePack& pack) {
    std::vector<const PromptTemplate*> sorted;
    for (const auto& t : pack.templates()) sorted.push_back(&t);
    std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
        if (a->task_key != b->task_key) return a->task_key < b->task_key;
        return static_cast<int>(a->variant) < static_cast<int>(b->variant);
    });
    std::string out;
    for (const auto* t : sorted) {
        njson j;
        j["task"] = t->task_key;
        j["variant"] = variant_name(t->variant);
        j["canonical"] = t->canonical;
        j["answer_kind"] = answer_kind_name(t->answer_kind);
        j["instruction"] = t->instruction;
        njson prefixes = njson::array();
        for (const auto& [f, p] : t->field_prefixes) prefixes.push_back({f, p});
        j["prefixes"] = prefixes;
        j["answer_prefix"] = t->answer_prefix;
        njson labels = njson::array();
        for (const auto& [r, s] : t->label_map) labels.push_back({r, s});
        j["labels"] = labels;
        out += j.dump();
        out += '\n';
    }
    return out;
}

void save_template_pack(const TemplatePack& pack, const std::string& path) {
    OutputFile out(path);
    out.write(template_pack_to_text(pack));
    out.commit();
}

std::string map_label(const PromptTemplate& t, const std::string& raw) {
    if (t.free_answer()) return raw;
    for (const auto& [r, s] : t.label_map) {
        if (r == raw) return s;
    }
    fail("template " + t.task_key + ": unknown raw label '" + raw + "'");
}

std::optional<std::string> try_unmap_label(const PromptTemplate& t,
                                           const std::string& surface) {
    if (t.free_answer()) return surface;
    for (const auto& [r, s] : t.label_map) {
        if (s == surface) return r;
    }
    return std::nullopt;
}

std::string unmap_label(const PromptTemplate& t, const std::string& surface) {
    auto raw = try_unmap_label(t, surface);
    if (!raw) fail("template " + t.task_key + ": unknown answer surface '" + surface + "'");
    return *raw;
}

std::string answer_surface(const PromptTemplate& t, const TaskExample& e) {
    return map_label(t, e.label);
}

namespace {

std::string render_impl(const PromptTemplate& t, const TaskExample& e, bool with_answer,
                        bool with_instruction) {
    if (e.template_key != t.task_key) {
        fail("render: example task '" + e.template_key + "' does not match template '" +
             t.task_key + "'");
    }
    std::string out;
    if (with_instruction) {
        out += t.instruction;
        out += '\n';
    }
    for (const auto& [field, prefix] : t.field_prefixes) {
        out += prefix;
        out += ' ';
        out += e.field(field);
        out += '\n';
    }
    out += t.answer_prefix;
    if (with_answer) {
        out += ' ';
        out += answer_surface(t, e);
    }
    return out;
}

}  // namespace

std::string render(const PromptTemplate& t, const TaskExample& e, bool with_answer) {
    return render_impl(t, e, with_answer, true);
}

std::string render_body(const PromptTemplate& t, const TaskExample& e, bool with_answer) {
    return render_impl(t, e, with_answer, false);
}

}  // namespace forge
