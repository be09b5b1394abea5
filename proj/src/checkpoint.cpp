#include "aigc/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

#include "aigc/errors.hpp"

namespace aigc::training {

using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'A', 'I', 'G', 'C'};

json config_to_json(const head::HeadConfig& config) {
    return json{{"d_in", config.d_in},
                {"hidden", config.hidden},
                {"num_classes", config.num_classes},
                {"dropout_p", config.dropout_p},
                {"bidirectional", config.bidirectional},
                {"use_attention", config.use_attention},
                {"variant", head::to_string(config.variant)}};
}

head::HeadConfig config_from_json(const json& j) {
    head::HeadConfig config;
    config.d_in = j.at("d_in").get<std::size_t>();
    config.hidden = j.at("hidden").get<std::size_t>();
    config.num_classes = j.at("num_classes").get<std::size_t>();
    config.dropout_p = j.at("dropout_p").get<double>();
    config.bidirectional = j.at("bidirectional").get<bool>();
    config.use_attention = j.at("use_attention").get<bool>();
    config.variant = head::variant_from_string(j.at("variant").get<std::string>());
    return config;
}

template <typename T>
void write_raw(std::ofstream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& in) {
    T value;
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw ValidationError("truncated checkpoint file");
    return value;
}

}  // namespace

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
    json header;
    header["config"] = config_to_json(checkpoint.params.config);
    header["encoder"] = checkpoint.encoder_name;
    header["epoch"] = checkpoint.epoch;
    header["metrics"] = checkpoint.metrics;
    json tensors = json::array();
    for (const auto& section : checkpoint.params.sections)
        tensors.push_back(
            json{{"name", section.name}, {"rows", section.rows}, {"cols", section.cols}});
    header["tensors"] = tensors;
    const std::string header_text = header.dump();

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write checkpoint: " + path);
    out.write(kMagic, sizeof(kMagic));
    write_raw(out, kCheckpointVersion);
    write_raw(out, static_cast<std::uint64_t>(header_text.size()));
    out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));
    out.write(reinterpret_cast<const char*>(checkpoint.params.data.data()),
              static_cast<std::streamsize>(checkpoint.params.data.size() * sizeof(float)));
    if (!out) throw ConfigError("write failed for checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open checkpoint: " + path);
    char magic[4];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw ValidationError("not a checkpoint file: " + path);
    auto version = read_raw<std::uint32_t>(in);
    if (version != kCheckpointVersion)
        throw ValidationError("unsupported checkpoint version " + std::to_string(version));
    auto header_len = read_raw<std::uint64_t>(in);
    std::string header_text(header_len, '\0');
    in.read(header_text.data(), static_cast<std::streamsize>(header_len));
    if (!in) throw ValidationError("truncated checkpoint header");
    json header = json::parse(header_text);

    Checkpoint checkpoint;
    checkpoint.params.config = config_from_json(header.at("config"));
    checkpoint.params.sections = head::parameter_layout(checkpoint.params.config);
    checkpoint.encoder_name = header.at("encoder").get<std::string>();
    checkpoint.epoch = header.at("epoch").get<std::uint32_t>();
    if (header.contains("metrics"))
        checkpoint.metrics = header.at("metrics").get<std::map<std::string, double>>();

    // The manifest must match the layout derived from the config.
    const json& tensors = header.at("tensors");
    if (tensors.size() != checkpoint.params.sections.size())
        throw ValidationError("checkpoint tensor manifest does not match config");
    std::size_t total = 0;
    for (std::size_t i = 0; i < tensors.size(); ++i) {
        const auto& section = checkpoint.params.sections[i];
        if (tensors[i].at("name").get<std::string>() != section.name ||
            tensors[i].at("rows").get<std::size_t>() != section.rows ||
            tensors[i].at("cols").get<std::size_t>() != section.cols)
            throw ValidationError("checkpoint tensor manifest does not match config");
        total += section.size();
    }
    checkpoint.params.data.resize(total);
    in.read(reinterpret_cast<char*>(checkpoint.params.data.data()),
            static_cast<std::streamsize>(total * sizeof(float)));
    if (!in) throw ValidationError("truncated checkpoint tensor data");
    return checkpoint;
}

}  // namespace aigc::training
