#include "wba/json_io.hpp"

#include <cstdio>
#include <fstream>

namespace wba {

namespace {

nlohmann::json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad JSON in " + path + ": " + e.what());
    }
    return j;
}

std::string dir_of(const std::string& path) {
    auto pos = path.find_last_of('/');
    return pos == std::string::npos ? std::string(".") : path.substr(0, pos);
}

}  // namespace

WeightSequence load_weights(const nlohmann::json& spec, const std::string& base_dir) {
    try {
        std::string family = spec.at("family").get<std::string>();
        if (family == "constant") return WeightSequence::constant();
        if (family == "harmonic") return WeightSequence::harmonic();
        if (family == "power") return WeightSequence::power(spec.at("d").get<double>());
        if (family == "explicit") {
            std::string path = spec.at("path").get<std::string>();
            if (!path.empty() && path.front() != '/') path = base_dir + "/" + path;
            std::ifstream in(path);
            if (!in) throw ConfigError("cannot open weight list " + path);
            std::vector<double> values;
            double v;
            while (in >> v) values.push_back(v);
            return WeightSequence::explicit_list(std::move(values));
        }
        throw ConfigError("unknown weight family '" + family + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad weight spec: ") + e.what());
    }
}

WeightSequence load_weights_file(const std::string& path) {
    return load_weights(parse_file(path), dir_of(path));
}

Sft load_sft(const nlohmann::json& spec) {
    try {
        auto alphabet = spec.at("alphabet").get<std::vector<std::string>>();
        auto adjacency = spec.at("adjacency").get<std::vector<std::vector<int>>>();
        if (alphabet.size() != adjacency.size())
            throw ConfigError("alphabet size does not match adjacency dimension");
        return Sft::from_adjacency(adjacency);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad SFT spec: ") + e.what());
    }
}

Sft load_sft_file(const std::string& path) { return load_sft(parse_file(path)); }

Potential load_potential(const nlohmann::json& spec, const Sft& sft) {
    try {
        int depth = spec.at("depth").get<int>();
        std::map<std::string, double> table;
        for (const auto& [key, val] : spec.at("values").items())
            table[key] = val.get<double>();
        return Potential::from_table(sft, depth, table);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad potential spec: ") + e.what());
    }
}

Potential load_potential_file(const std::string& path, const Sft& sft) {
    return load_potential(parse_file(path), sft);
}

nlohmann::json scheme_to_json(const ConcatenationScheme& sch) {
    nlohmann::json j;
    j["N"] = sch.N;
    j["t"] = sch.t;
    j["eps"] = sch.eps;
    j["delta"] = sch.delta;
    j["p"] = sch.p;
    j["integral_x_only"] = sch.integral_x_only;
    j["integral_y_only"] = sch.integral_y_only;
    j["target_log_x"] = sch.target_log_x;
    j["target_log_y"] = sch.target_log_y;
    j["cardinality_met"] = sch.cardinality_met;
    auto dump = [](const std::vector<Word>& fam) {
        std::vector<std::string> out;
        out.reserve(fam.size());
        for (const Word& w : fam) out.push_back(word_to_string(w));
        return out;
    };
    j["X"] = dump(sch.X);
    j["Y"] = dump(sch.Y);
    return j;
}

std::string fmt12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace wba
