#include "suprb/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "suprb/config_file.hpp"
#include "suprb/errors.hpp"

namespace suprb {

using nlohmann::json;

namespace {

json vector_to_json(const Vector& v)
{
    auto arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        arr.push_back(v[i]);
    }
    return arr;
}

Vector vector_from_json(const json& j, std::size_t expected, const char* what)
{
    if (!j.is_array() || j.size() != expected) {
        throw DataError(std::string("model schema: '") + what + "' must be an array of " + std::to_string(expected) +
                        " numbers");
    }
    Vector v(static_cast<Eigen::Index>(expected));
    for (std::size_t i = 0; i < expected; ++i) {
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

std::string genome_to_string(const Genome& g)
{
    std::string s(g.size(), '0');
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i]) {
            s[i] = '1';
        }
    }
    return s;
}

Genome genome_from_string(const std::string& s)
{
    Genome g(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1') {
            throw DataError("model schema: genome must consist of '0' and '1'");
        }
        g[i] = s[i] == '1';
    }
    return g;
}

double finite(const json& j, const char* what)
{
    if (!j.is_number()) {
        throw DataError(std::string("model schema: '") + what + "' must be a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw DataError(std::string("model schema: '") + what + "' must be finite");
    }
    return v;
}

} // namespace

std::string serialize_model(const Model& model)
{
    json doc;
    doc["format"] = "suprb-model";
    doc["format_version"] = kModelFormatVersion;

    auto config = json::object();
    for (const auto& [key, value] : config_entries(model.config)) {
        config[key] = value;
    }
    doc["config"] = config;

    doc["n_features"] = model.dims();
    doc["feature_names"] = model.feature_names;
    doc["target_name"] = model.target_name;
    auto bounds = json::array();
    for (const auto& b : model.feature_bounds) {
        bounds.push_back({b.min, b.max});
    }
    doc["feature_bounds"] = bounds;
    doc["default_prediction"] = model.default_prediction;

    auto pool = json::array();
    for (const auto& rule : model.pool) {
        pool.push_back({
            {"lower", vector_to_json(rule.condition.lower)},
            {"upper", vector_to_json(rule.condition.upper)},
            {"coefficients", vector_to_json(rule.submodel.coefficients)},
            {"intercept", rule.submodel.intercept},
            {"experience", rule.experience},
            {"in_sample_error", rule.in_sample_error},
            {"fitness", rule.fitness},
        });
    }
    doc["pool"] = pool;

    doc["best"] = {
        {"genome", genome_to_string(model.best.genome)},
        {"mse", model.best.mse},
        {"complexity", model.best.complexity},
        {"fitness", model.best.fitness},
    };

    auto history = json::array();
    for (const auto& h : model.history) {
        history.push_back({
            {"phase", h.phase},
            {"best_fitness", h.best_fitness},
            {"mse", h.mse},
            {"complexity", h.complexity},
            {"pool_size", h.pool_size},
        });
    }
    doc["history"] = history;
    return doc.dump(2) + "\n";
}

Model deserialize_model(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw DataError(std::string("model file is not valid: ") + e.what());
    }

    try {
        if (!doc.is_object() || doc.value("format", std::string{}) != "suprb-model") {
            throw DataError("not a suprb model file");
        }
        const int version = doc.at("format_version").get<int>();
        if (version != kModelFormatVersion) {
            throw DataError("unsupported model format version " + std::to_string(version) + " (expected " +
                            std::to_string(kModelFormatVersion) + ")");
        }

        Model model;
        std::string config_text;
        for (const auto& [key, value] : doc.at("config").items()) {
            config_text += key + " = " + value.get<std::string>() + "\n";
        }
        try {
            model.config = parse_config(config_text);
        } catch (const UsageError& e) {
            throw DataError(std::string("model config snapshot: ") + e.what());
        }

        const auto dims = doc.at("n_features").get<std::size_t>();
        if (dims == 0) {
            throw DataError("model schema: n_features must be positive");
        }
        model.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
        if (!model.feature_names.empty() && model.feature_names.size() != dims) {
            throw DataError("model schema: feature_names length differs from n_features");
        }
        model.target_name = doc.at("target_name").get<std::string>();

        const auto& bounds = doc.at("feature_bounds");
        if (!bounds.is_array() || bounds.size() != dims) {
            throw DataError("model schema: feature_bounds must hold one [min, max] pair per feature");
        }
        for (const auto& b : bounds) {
            if (!b.is_array() || b.size() != 2) {
                throw DataError("model schema: feature bound must be a [min, max] pair");
            }
            const FeatureBound fb{finite(b[0], "feature_bounds"), finite(b[1], "feature_bounds")};
            if (fb.min > fb.max) {
                throw DataError("model schema: feature bound has min > max");
            }
            model.feature_bounds.push_back(fb);
        }
        model.default_prediction = finite(doc.at("default_prediction"), "default_prediction");

        for (const auto& r : doc.at("pool")) {
            Rule rule;
            rule.condition.lower = vector_from_json(r.at("lower"), dims, "lower");
            rule.condition.upper = vector_from_json(r.at("upper"), dims, "upper");
            rule.submodel.coefficients = vector_from_json(r.at("coefficients"), dims, "coefficients");
            rule.submodel.intercept = finite(r.at("intercept"), "intercept");
            rule.experience = r.at("experience").get<std::size_t>();
            rule.in_sample_error = finite(r.at("in_sample_error"), "in_sample_error");
            rule.fitness = finite(r.at("fitness"), "fitness");
            if (rule.degenerate()) {
                throw DataError("model schema: pool rule with zero experience");
            }
            model.pool.add(std::move(rule));
        }
        if (model.pool.empty()) {
            throw DataError("model schema: empty rule pool");
        }

        const auto& best = doc.at("best");
        model.best.genome = genome_from_string(best.at("genome").get<std::string>());
        if (model.best.genome.size() != model.pool.size()) {
            throw DataError("model schema: best genome length differs from pool size");
        }
        model.best.mse = finite(best.at("mse"), "mse");
        model.best.complexity = best.at("complexity").get<std::size_t>();
        model.best.fitness = finite(best.at("fitness"), "fitness");
        if (model.best.complexity !=
            static_cast<std::size_t>(std::count(model.best.genome.begin(), model.best.genome.end(), true))) {
            throw DataError("model schema: best complexity differs from genome popcount");
        }

        for (const auto& h : doc.at("history")) {
            model.history.push_back({
                h.at("phase").get<std::size_t>(),
                finite(h.at("best_fitness"), "best_fitness"),
                finite(h.at("mse"), "mse"),
                h.at("complexity").get<std::size_t>(),
                h.at("pool_size").get<std::size_t>(),
            });
        }
        return model;
    } catch (const json::exception& e) {
        throw DataError(std::string("model schema violation: ") + e.what());
    }
}

void save_model(const Model& model, const std::filesystem::path& path)
{
    const auto text = serialize_model(model);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write model file '" + path.string() + "'");
    }
    out << text;
    if (!out) {
        throw DataError("failed writing model file '" + path.string() + "'");
    }
}

Model load_model(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open model file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_model(buf.str());
}

} // namespace suprb
