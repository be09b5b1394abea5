#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "aigc/head.hpp"

namespace aigc::training {

// Self-describing container: magic + format version + JSON header (config,
// encoder name, epoch, metrics, tensor manifest) + row-major float32 data.
struct Checkpoint {
    head::Parameters<float> params;
    std::string encoder_name;
    std::uint32_t epoch = 0;
    std::map<std::string, double> metrics;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace aigc::training
