#include "chaosbreak/pipeline_json.hpp"

#include <fstream>

#include "chaosbreak/errors.hpp"

namespace chaosbreak {

namespace {

const char* family_name(DiffusionKind kind) {
    switch (kind) {
    case DiffusionKind::mod_sub: return "mod_sub";
    case DiffusionKind::mod_add_xor: return "mod_add_xor";
    }
    return "mod_sub";
}

DiffusionFamily family_from_json(const nlohmann::json& stage) {
    const std::string name = stage.at("family").get<std::string>();
    if (name == "mod_sub") {
        DiffusionFamily fam = DiffusionFamily::mod_sub();
        if (stage.contains("cipher_taps")) fam.memory_depth_cipher = stage["cipher_taps"].get<int>();
        return fam;
    }
    if (name == "mod_add_xor") return DiffusionFamily::mod_add_xor();
    throw FormatError("unknown diffusion family \"" + name + "\"");
}

} // namespace

nlohmann::json pipeline_to_json(const CipherPipeline& pipe) {
    nlohmann::json doc;
    doc["length"] = pipe.length();
    doc["rounds"] = pipe.rounds();
    doc["stages"] = nlohmann::json::array();
    for (const auto& stage : pipe.stages()) {
        nlohmann::json s;
        if (const auto* p = std::get_if<PermStage>(&stage)) {
            s["type"] = "perm";
            s["map"] = p->perm.to_one_based();
        } else {
            const auto& d = std::get<DiffStage>(stage).diff;
            s["type"] = "diff";
            s["family"] = family_name(d.family.kind);
            if (d.family.kind == DiffusionKind::mod_sub && d.family.memory_depth_cipher != 1)
                s["cipher_taps"] = d.family.memory_depth_cipher;
            s["key"] = d.key.values;
            if (!d.key.initial.empty()) s["key_initial"] = d.key.initial;
            s["init_c"] = d.initial_ciphertext;
            s["init_p"] = d.initial_plaintext;
        }
        doc["stages"].push_back(std::move(s));
    }
    return doc;
}

CipherPipeline pipeline_from_json(const nlohmann::json& doc) {
    try {
        const auto length = doc.at("length").get<std::size_t>();
        const int rounds = doc.value("rounds", 1);
        std::vector<PipelineStage> stages;
        for (const auto& s : doc.at("stages")) {
            const std::string type = s.at("type").get<std::string>();
            if (type == "perm") {
                stages.emplace_back(
                    PermStage{Permutation(s.at("map").get<std::vector<std::uint32_t>>())});
            } else if (type == "diff") {
                DiffusionStage d(family_from_json(s),
                                 KeyStream{s.at("key").get<std::vector<std::uint8_t>>(),
                                           s.value("key_initial", std::vector<std::uint8_t>{})});
                if (s.contains("init_c")) d.initial_ciphertext = s["init_c"].get<std::vector<std::uint8_t>>();
                if (s.contains("init_p")) d.initial_plaintext = s["init_p"].get<std::vector<std::uint8_t>>();
                stages.emplace_back(DiffStage{std::move(d)});
            } else {
                throw FormatError("unknown stage type \"" + type + "\"");
            }
        }
        return CipherPipeline(length, std::move(stages), rounds);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("pipeline config: ") + e.what());
    }
}

CipherPipeline load_pipeline(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open pipeline config " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
    return pipeline_from_json(doc);
}

void save_pipeline(const CipherPipeline& pipe, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write pipeline config " + path);
    out << pipeline_to_json(pipe).dump(2) << '\n';
}

} // namespace chaosbreak
