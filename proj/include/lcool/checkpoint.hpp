#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "lcool/error.hpp"
#include "lcool/mlp.hpp"

namespace lcool {

using json = nlohmann::json;

// Weights are written with round-trip precision, so a loaded model
// reproduces forward() bit-exactly.
inline json to_json(const Mlp& model) {
    json layers = json::array();
    for (const auto& layer : model.layers()) {
        layers.push_back({{"in", layer.in},
                          {"out", layer.out},
                          {"activation", std::string(to_string(layer.activation))},
                          {"weight", layer.weight},
                          {"bias", layer.bias}});
    }
    return {{"input_dim", model.input_dim()}, {"output_dim", model.output_dim()}, {"layers", layers}};
}

inline Mlp mlp_from_json(const json& doc) {
    try {
        std::vector<Layer> layers;
        for (const auto& item : doc.at("layers")) {
            Layer layer;
            layer.in = item.at("in").get<std::size_t>();
            layer.out = item.at("out").get<std::size_t>();
            layer.activation = activation_from_string(item.at("activation").get<std::string>());
            layer.weight = item.at("weight").get<std::vector<double>>();
            layer.bias = item.at("bias").get<std::vector<double>>();
            layers.push_back(std::move(layer));
        }
        Mlp model(std::move(layers));
        if (doc.contains("input_dim") && doc.at("input_dim").get<std::size_t>() != model.input_dim())
            throw DimensionError("checkpoint input_dim disagrees with its first layer");
        if (doc.contains("output_dim") && doc.at("output_dim").get<std::size_t>() != model.output_dim())
            throw DimensionError("checkpoint output_dim disagrees with its last layer");
        return model;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed model checkpoint: ") + e.what());
    }
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw DataError("write to '" + path.string() + "' failed");
}

inline json read_json_file(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw DataError("malformed JSON in '" + path.string() + "': " + e.what());
    }
}

inline void write_json_file(const std::filesystem::path& path, const json& doc) {
    write_text_file(path, doc.dump(2) + "\n");
}

/// 64-bit FNV-1a of a byte string, hex encoded. Used for manifest hashes.
inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string file_hash(const std::filesystem::path& path) { return fnv1a_hex(read_text_file(path)); }

} // namespace lcool
