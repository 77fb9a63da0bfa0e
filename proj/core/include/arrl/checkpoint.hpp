#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "arrl/net.hpp"

namespace arrl {

/// Portable flat-binary checkpoint: a JSON manifest (tensor names, shapes,
/// offsets plus caller metadata) followed by little-endian float64 data.
struct NamedTensors {
  std::vector<std::pair<std::string, Mat>> items;
};

void write_checkpoint(const std::string& path, const NamedTensors& tensors,
                      const nlohmann::json& meta);
NamedTensors read_checkpoint(const std::string& path, nlohmann::json* meta = nullptr);

}  // namespace arrl
