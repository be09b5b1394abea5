#include "aigc/head.hpp"

namespace aigc::head {

std::string to_string(Variant v) {
    switch (v) {
        case Variant::recurrent_attn: return "recurrent_attn";
        case Variant::recurrent_plain: return "recurrent_plain";
        case Variant::mlp_pool: return "mlp_pool";
    }
    return "recurrent_attn";
}

Variant variant_from_string(const std::string& s) {
    if (s == "recurrent_attn") return Variant::recurrent_attn;
    if (s == "recurrent_plain") return Variant::recurrent_plain;
    if (s == "mlp_pool") return Variant::mlp_pool;
    throw ConfigError("unknown head variant: " + s);
}

std::vector<Section> parameter_layout(const HeadConfig& config) {
    config.validate();
    std::vector<Section> sections;
    std::size_t offset = 0;
    auto add = [&](const std::string& name, std::size_t rows, std::size_t cols) {
        sections.push_back({name, offset, rows, cols});
        offset += rows * cols;
    };
    const std::size_t h = config.hidden;
    const std::size_t width = config.layer_width();
    const std::size_t feat = config.feature_dim();
    if (config.variant == Variant::mlp_pool) {
        add("mlp.w1", feat, config.d_in);
        add("mlp.b1", feat, 1);
    } else {
        auto add_direction = [&](const std::string& prefix, std::size_t in_width) {
            add(prefix + ".wx", 4 * h, in_width);
            add(prefix + ".wh", 4 * h, h);
            add(prefix + ".bi", 4 * h, 1);
            add(prefix + ".bh", 4 * h, 1);
        };
        add_direction("l1f", config.d_in);
        if (config.bidirectional) add_direction("l1b", config.d_in);
        add_direction("l2f", width);
        if (config.bidirectional) add_direction("l2b", width);
        if (config.use_attention) {
            add("attn1", width, 1);
            add("attn2", width, 1);
        }
    }
    add("dense.w", config.num_classes, feat);
    add("dense.b", config.num_classes, 1);
    return sections;
}

std::size_t param_count(const HeadConfig& config) {
    config.validate();
    const std::size_t h = config.hidden;
    const std::size_t dirs = config.directions();
    const std::size_t width = config.layer_width();
    const std::size_t feat = config.feature_dim();
    if (config.variant == Variant::mlp_pool)
        return feat * config.d_in + feat + feat * config.num_classes + config.num_classes;
    auto per_direction = [&](std::size_t in_width) { return 4 * (in_width * h + h * h + 2 * h); };
    std::size_t total = dirs * per_direction(config.d_in) + dirs * per_direction(width);
    if (config.use_attention) total += 2 * width;
    total += feat * config.num_classes + config.num_classes;
    return total;
}

}  // namespace aigc::head
