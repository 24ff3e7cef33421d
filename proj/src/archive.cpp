#include "ensemblekit/archive.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ensemblekit/errors.hpp"

namespace ensemblekit {

using json = nlohmann::ordered_json;

namespace {

json matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from(const json& rows, Eigen::Index cols) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != static_cast<std::size_t>(cols)) throw DataError("archive: ragged weight matrix");
        for (Eigen::Index c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)].get<double>();
    }
    return m;
}

json vector_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Eigen::VectorXd vector_from(const json& values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i].get<double>();
    return v;
}

json logreg_json(const LogRegModel& m) {
    json j;
    j["kind"] = "logreg";
    j["input_dim"] = m.dim();
    j["weights"] = matrix_json(m.weights);
    j["biases"] = vector_json(m.biases);
    return j;
}

LogRegModel logreg_from(const json& j, const ClassRegistry& registry) {
    LogRegModel m;
    m.weights = matrix_from(j.at("weights"), j.at("input_dim").get<Eigen::Index>());
    m.biases = vector_from(j.at("biases"));
    m.registry = registry;
    if (static_cast<std::size_t>(m.weights.rows()) != registry.size() || m.biases.size() != m.weights.rows())
        throw DataError("archive: logreg shape does not match class count");
    return m;
}

json base_json(const BaseModel& model) {
    if (const auto* lr = std::get_if<LogRegModel>(&model)) return logreg_json(*lr);
    const auto& s = std::get<StumpModel>(model);
    json j;
    j["kind"] = "stump";
    j["input_dim"] = s.input_dim;
    j["feature"] = s.feature;
    j["threshold"] = s.threshold;
    j["left"] = s.left;
    j["right"] = s.right;
    return j;
}

Label label_from(const json& j, const ClassRegistry& registry) {
    const auto v = j.get<Label>();
    if (v < 0 || static_cast<std::size_t>(v) >= registry.size()) throw DataError("archive: class index out of range");
    return v;
}

BaseModel base_from(const json& j, const ClassRegistry& registry) {
    const auto kind = parse_learner_kind(j.at("kind").get<std::string>());
    if (kind == LearnerKind::logreg) return logreg_from(j, registry);
    StumpModel s;
    s.input_dim = j.at("input_dim").get<Eigen::Index>();
    s.feature = j.at("feature").get<Eigen::Index>();
    s.threshold = j.at("threshold").get<double>();
    s.left = label_from(j.at("left"), registry);
    s.right = label_from(j.at("right"), registry);
    s.registry = registry;
    if (s.feature < 0 || s.feature >= s.input_dim) throw DataError("archive: stump feature out of range");
    return s;
}

json model_json(const EnsembleModel& model) {
    json j;
    if (const auto* bag = std::get_if<BaggingModel>(&model)) {
        j["members"] = json::array();
        for (const auto& m : bag->members) j["members"].push_back(base_json(m));
        j["seeds"] = bag->seeds;
    } else if (const auto* boost = std::get_if<BoostModel>(&model)) {
        j["mode"] = to_string(boost->mode);
        j["rounds"] = json::array();
        for (const auto& r : boost->rounds) {
            json round;
            round["alpha"] = r.alpha;
            round["learner"] = base_json(r.model);
            j["rounds"].push_back(std::move(round));
        }
        j["history"] = json::array();
        for (const auto& h : boost->history) {
            json rec;
            rec["round"] = h.round;
            rec["eps"] = h.eps;
            rec["alpha"] = h.alpha;
            j["history"].push_back(std::move(rec));
        }
    } else {
        const auto& st = std::get<StackingModel>(model);
        j["folds"] = st.folds;
        j["meta_leakage_mode"] = st.meta_leakage_mode;
        j["base_models"] = json::array();
        for (const auto& m : st.base_models) j["base_models"].push_back(base_json(m));
        j["meta_model"] = logreg_json(st.meta_model);
    }
    return j;
}

EnsembleModel model_from(Method method, const json& j, const ClassRegistry& registry) {
    switch (method) {
        case Method::bagging: {
            BaggingModel m;
            m.registry = registry;
            for (const auto& member : j.at("members")) m.members.push_back(base_from(member, registry));
            m.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
            if (m.members.empty() || m.seeds.size() != m.members.size())
                throw DataError("archive: bagging needs one seed per member and at least one member");
            return m;
        }
        case Method::boosting: {
            BoostModel m;
            m.registry = registry;
            m.mode = parse_boost_mode(j.at("mode").get<std::string>());
            for (const auto& r : j.at("rounds"))
                m.rounds.push_back({base_from(r.at("learner"), registry), r.at("alpha").get<double>()});
            for (const auto& h : j.at("history"))
                m.history.push_back({h.at("round").get<int>(), h.at("eps").get<double>(), h.at("alpha").get<double>()});
            if (m.rounds.empty()) throw DataError("archive: boosting model has no rounds");
            return m;
        }
        case Method::stacking: {
            StackingModel m;
            m.registry = registry;
            m.folds = j.at("folds").get<int>();
            m.meta_leakage_mode = j.at("meta_leakage_mode").get<bool>();
            for (const auto& b : j.at("base_models")) m.base_models.push_back(base_from(b, registry));
            m.meta_model = logreg_from(j.at("meta_model"), registry);
            if (m.base_models.empty()) throw DataError("archive: stacking model has no base models");
            if (m.meta_model.dim() != static_cast<Eigen::Index>(m.base_models.size() * registry.size()))
                throw DataError("archive: meta-model input dimension does not match base models");
            return m;
        }
    }
    throw InvariantError("unknown method");
}

}  // namespace

json archive_to_json(const ModelArchive& archive) {
    json j;
    j["format_version"] = kArchiveFormatVersion;
    j["method"] = to_string(method_of(archive.model));
    j["classes"] = registry_of(archive.model).names();
    j["input_dim"] = input_dim(archive.model);
    json prov;
    prov["config_hash"] = archive.provenance.config_hash;
    prov["seed"] = archive.provenance.seed;
    prov["artifact_version"] = archive.provenance.artifact_version;
    j["provenance"] = std::move(prov);
    j["model"] = model_json(archive.model);
    return j;
}

ModelArchive archive_from_json(const json& doc) {
    try {
        const int version = doc.at("format_version").get<int>();
        if (version != kArchiveFormatVersion)
            throw DataError("archive format_version " + std::to_string(version) + " is not supported (expected " +
                            std::to_string(kArchiveFormatVersion) + ")");
        const Method method = parse_method(doc.at("method").get<std::string>());
        const ClassRegistry registry(doc.at("classes").get<std::vector<std::string>>());
        ModelArchive archive{model_from(method, doc.at("model"), registry), {}};
        const auto& prov = doc.at("provenance");
        archive.provenance.config_hash = prov.at("config_hash").get<std::string>();
        archive.provenance.seed = prov.at("seed").get<std::uint64_t>();
        archive.provenance.artifact_version = prov.at("artifact_version").get<std::string>();
        if (input_dim(archive.model) != doc.at("input_dim").get<Eigen::Index>())
            throw DataError("archive: input_dim does not match model parameters");
        return archive;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("archive: malformed document: ") + e.what());
    } catch (const ConfigError& e) {
        throw DataError(std::string("archive: ") + e.what());
    }
}

std::string serialize_archive(const ModelArchive& archive) { return archive_to_json(archive).dump(2) + "\n"; }

ModelArchive parse_archive(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("archive: invalid JSON: ") + e.what());
    }
    return archive_from_json(doc);
}

void save_archive(const ModelArchive& archive, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    out << serialize_archive(archive);
    if (!out) throw DataError("cannot write archive '" + path.string() + "'");
}

ModelArchive load_archive(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open archive '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_archive(buf.str());
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace ensemblekit
