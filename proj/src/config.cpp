#include "ensemblekit/config.hpp"

#include <fstream>
#include <set>

#include "ensemblekit/archive.hpp"
#include "ensemblekit/errors.hpp"

namespace ensemblekit {

using json = nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError("config: '" + where + "' must be an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.contains(key)) throw ConfigError("config: unknown key '" + key + "' in " + where);
}

std::filesystem::path resolve(const json& value, const std::filesystem::path& base_dir) {
    std::filesystem::path p = value.get<std::string>();
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
}

}  // namespace

std::vector<LearnerSpec> RunConfig::default_stacking_bases() {
    return {
        {LearnerKind::logreg, 0.1, 300, 0.0},
        {LearnerKind::logreg, 0.05, 100, 0.0},
        {LearnerKind::logreg, 0.2, 400, 0.01},
        {LearnerKind::logreg, 0.02, 50, 0.0},
        {LearnerKind::stump, 0.1, 300, 0.0},
        {LearnerKind::logreg, 0.1, 500, 0.1},
    };
}

void RunConfig::validate() const {
    split.validate();
    if (dataset.format != "csv" && dataset.format != "images")
        throw ConfigError("config: dataset.format must be csv or images");
    if (dataset.resize < 1) throw ConfigError("config: dataset.resize must be positive");
    if (dataset.balance_per_class && *dataset.balance_per_class < 1)
        throw ConfigError("config: dataset.balance_per_class must be positive");
    if (bagging_m < 1) throw ConfigError("config: bagging.m must be at least 1");
    if (boosting_rounds < 1) throw ConfigError("config: boosting.T must be at least 1");
    if (stacking_folds < 2) throw ConfigError("config: stacking.folds must be at least 2");
    if (stacking_bases.empty()) throw ConfigError("config: stacking.bases must not be empty");
    if (stacking_meta.kind != LearnerKind::logreg) throw ConfigError("config: stacking.meta must be logreg");
    bagging_learner.validate();
    boosting_learner.validate();
    stacking_meta.validate();
    for (const auto& b : stacking_bases) b.validate();
}

json learner_to_json(const LearnerSpec& spec) {
    json j;
    j["kind"] = to_string(spec.kind);
    if (spec.kind == LearnerKind::logreg) {
        j["learning_rate"] = spec.learning_rate;
        j["epochs"] = spec.epochs;
        j["l2"] = spec.l2;
    }
    return j;
}

LearnerSpec learner_from_json(const json& j) {
    reject_unknown(j, {"kind", "learning_rate", "epochs", "l2"}, "learner");
    LearnerSpec spec;
    spec.kind = parse_learner_kind(j.value("kind", std::string("logreg")));
    spec.learning_rate = j.value("learning_rate", spec.learning_rate);
    spec.epochs = j.value("epochs", spec.epochs);
    spec.l2 = j.value("l2", spec.l2);
    return spec;
}

json RunConfig::to_json() const {
    json j;
    j["dataset"] = {{"path", dataset.path.string()},
                    {"format", dataset.format},
                    {"features", to_string(dataset.features)},
                    {"resize", dataset.resize},
                    {"augment", dataset.augment}};
    j["dataset"]["balance_per_class"] = dataset.balance_per_class ? json(*dataset.balance_per_class) : json(nullptr);
    j["split"] = {{"train", split.train_fraction}, {"val", split.val_fraction}, {"test", split.test_fraction}};
    j["method"] = to_string(method);
    j["bagging"] = {{"m", bagging_m}, {"learner", learner_to_json(bagging_learner)}};
    j["boosting"] = {{"T", boosting_rounds}, {"mode", to_string(boosting_mode)}, {"learner", learner_to_json(boosting_learner)}};
    json bases = json::array();
    for (const auto& b : stacking_bases) bases.push_back(learner_to_json(b));
    j["stacking"] = {{"folds", stacking_folds},
                     {"meta_leakage_mode", meta_leakage_mode},
                     {"bases", bases},
                     {"meta", learner_to_json(stacking_meta)}};
    j["seed"] = seed;
    return j;
}

std::string RunConfig::hash() const { return fnv1a_hex(to_json().dump()); }

void apply_config_json(RunConfig& cfg, const json& doc, const std::filesystem::path& base_dir) {
    try {
        reject_unknown(doc, {"dataset", "split", "method", "bagging", "boosting", "stacking", "train", "test", "archive",
                             "input", "seed", "out"},
                       "top level");
        if (doc.contains("dataset")) {
            const auto& d = doc["dataset"];
            reject_unknown(d, {"path", "format", "features", "resize", "balance_per_class", "augment"}, "dataset");
            if (d.contains("path")) cfg.dataset.path = resolve(d["path"], base_dir);
            cfg.dataset.format = d.value("format", cfg.dataset.format);
            if (d.contains("features")) cfg.dataset.features = parse_feature_method(d["features"].get<std::string>());
            cfg.dataset.resize = d.value("resize", cfg.dataset.resize);
            cfg.dataset.augment = d.value("augment", cfg.dataset.augment);
            if (d.contains("balance_per_class")) {
                if (d["balance_per_class"].is_null()) cfg.dataset.balance_per_class.reset();
                else cfg.dataset.balance_per_class = d["balance_per_class"].get<std::size_t>();
            }
        }
        if (doc.contains("split")) {
            const auto& s = doc["split"];
            reject_unknown(s, {"train", "val", "test"}, "split");
            cfg.split.train_fraction = s.value("train", cfg.split.train_fraction);
            cfg.split.val_fraction = s.value("val", cfg.split.val_fraction);
            cfg.split.test_fraction = s.value("test", cfg.split.test_fraction);
        }
        if (doc.contains("method")) cfg.method = parse_method(doc["method"].get<std::string>());
        if (doc.contains("bagging")) {
            const auto& b = doc["bagging"];
            reject_unknown(b, {"m", "learner"}, "bagging");
            cfg.bagging_m = b.value("m", cfg.bagging_m);
            if (b.contains("learner")) cfg.bagging_learner = learner_from_json(b["learner"]);
        }
        if (doc.contains("boosting")) {
            const auto& b = doc["boosting"];
            reject_unknown(b, {"T", "mode", "learner"}, "boosting");
            cfg.boosting_rounds = b.value("T", cfg.boosting_rounds);
            if (b.contains("mode")) cfg.boosting_mode = parse_boost_mode(b["mode"].get<std::string>());
            if (b.contains("learner")) cfg.boosting_learner = learner_from_json(b["learner"]);
        }
        if (doc.contains("stacking")) {
            const auto& s = doc["stacking"];
            reject_unknown(s, {"folds", "meta_leakage_mode", "bases", "meta"}, "stacking");
            cfg.stacking_folds = s.value("folds", cfg.stacking_folds);
            cfg.meta_leakage_mode = s.value("meta_leakage_mode", cfg.meta_leakage_mode);
            if (s.contains("bases")) {
                cfg.stacking_bases.clear();
                for (const auto& b : s["bases"]) cfg.stacking_bases.push_back(learner_from_json(b));
            }
            if (s.contains("meta")) cfg.stacking_meta = learner_from_json(s["meta"]);
        }
        if (doc.contains("train")) cfg.train_path = resolve(doc["train"], base_dir);
        if (doc.contains("test")) cfg.test_path = resolve(doc["test"], base_dir);
        if (doc.contains("archive")) cfg.archive_path = resolve(doc["archive"], base_dir);
        if (doc.contains("input")) cfg.input_path = resolve(doc["input"], base_dir);
        if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("out")) cfg.out_dir = resolve(doc["out"], base_dir);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    RunConfig cfg;
    apply_config_json(cfg, doc, path.parent_path());
    return cfg;
}

}  // namespace ensemblekit
