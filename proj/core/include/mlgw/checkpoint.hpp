#pragma once

#include <string>

#include "mlgw/nn.hpp"

namespace mlgw::nn {

inline constexpr int kParameterFormatVersion = 1;

// Versioned JSON document mapping tensor names to shape + row-major values.
// Serialization is round-trip exact: load_parameters(save_parameters(p))
// reproduces every tensor value bit for bit.
void save_parameters(const std::string& path, const ModelParams& params);
ModelParams load_parameters(const std::string& path);

}  // namespace mlgw::nn
