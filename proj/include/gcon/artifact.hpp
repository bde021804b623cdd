#pragma once

#include "gcon/trainer.hpp"

#include <string>

namespace gcon {

// Single self-describing binary container: magic + version, a JSON
// metadata block, then named matrices as little-endian 64-bit floats with
// explicit dimensions.
void save_artifact(const std::string& path, const ModelArtifact& artifact);
ModelArtifact load_artifact(const std::string& path);

} // namespace gcon
