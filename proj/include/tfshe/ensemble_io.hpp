#pragma once

// Binary ensemble container:
//   "TFSHEENS" | u64 header length | JSON header | f64 snapshots | f64 probe series | f64 mean squares
// Integers and doubles are little-endian.

#include <filesystem>

#include "tfshe/mcsim.hpp"

namespace tfshe::mc {

void write_ensemble(const FieldEnsemble& e, const std::filesystem::path& path);
FieldEnsemble read_ensemble(const std::filesystem::path& path);

} // namespace tfshe::mc
