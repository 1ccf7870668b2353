#include "regretlab/gamespec.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "regretlab/games.hpp"

namespace regretlab {

namespace {

int param_int(const BuiltinParams& params, const std::string& key, int fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    return static_cast<int>(it->second);
}

}  // namespace

Game make_builtin_game(const std::string& name, const BuiltinParams& params) {
    if (name == "quadratic")
        return quadratic_game(param_int(params, "grid", 257), param_int(params, "exact", 1) != 0);
    if (name == "experts-simple")
        return experts_simple_game(param_int(params, "N", 2), param_int(params, "uniform_action", 0) != 0);
    if (name == "experts-general") return experts_general_game(param_int(params, "N", 2));
    if (name == "disjoint-interval") return disjoint_interval_game(param_int(params, "grid", 64));
    throw std::invalid_argument("unknown builtin game: " + name);
}

Game load_game_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open game spec: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("bad game spec " + path + ": " + e.what());
    }

    if (j.contains("builtin")) {
        BuiltinParams params;
        if (j.contains("params"))
            for (auto& [k, v] : j["params"].items()) params[k] = v.get<double>();
        return make_builtin_game(j["builtin"].get<std::string>(), params);
    }

    Game g;
    g.name = j.value("name", path);
    if (!j.contains("outcomes") || !j.contains("actions") || !j.contains("loss"))
        throw std::invalid_argument("game spec needs outcomes, actions, loss (or builtin)");

    auto read_side = [](const nlohmann::json& arr, std::vector<std::string>& labels,
                        std::vector<std::vector<double>>& coords) {
        for (const auto& item : arr) {
            if (item.is_string()) {
                labels.push_back(item.get<std::string>());
            } else {
                labels.push_back(item.value("label", "#" + std::to_string(labels.size())));
                if (item.contains("coords")) coords.push_back(item["coords"].get<std::vector<double>>());
            }
        }
    };
    read_side(j["outcomes"], g.outcome_labels, g.outcome_coords);
    read_side(j["actions"], g.action_labels, g.action_coords);
    g.loss = j["loss"].get<std::vector<std::vector<double>>>();
    if (j.contains("embedding_norm")) {
        std::string tag = j["embedding_norm"].get<std::string>();
        if (tag == "euclidean")
            g.embedding_norm = NormTag::euclidean;
        else if (tag == "sup")
            g.embedding_norm = NormTag::sup;
        else if (tag == "abs-1d")
            g.embedding_norm = NormTag::abs1d;
        else
            throw std::invalid_argument("unknown embedding_norm: " + tag);
    }
    try {
        g.validate();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("invalid game spec " + path + ": " + e.what());
    }
    return g;
}

}  // namespace regretlab
