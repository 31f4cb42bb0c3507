#pragma once

#include <string>

#include "oclab/learner.hpp"

namespace oclab {

// Versioned binary container: magic, version, config JSON, flat f64 params.
// Round-trips exactly (raw IEEE-754 bytes, little-endian hosts).
void save_checkpoint(const std::string& path, const LMParams& params);
LMParams load_checkpoint(const std::string& path);

}  // namespace oclab
