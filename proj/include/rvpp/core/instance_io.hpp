#pragma once

#include <filesystem>
#include <string>

#include "rvpp/core/types.hpp"

namespace rvpp {

inline constexpr int kSchemaVersion = 1;

// Parse and validate a JSON instance document. Throws SchemaError for
// structural problems (the message names the field and, for series, the
// period) and InvariantError for domain violations.
RvppInstance load_instance(const std::string& document);
RvppInstance load_instance_file(const std::filesystem::path& path);

// Canonical form: fixed key order, 2-space indent, every optional field written.
std::string to_json(const RvppInstance& instance);
void save_instance_file(const RvppInstance& instance, const std::filesystem::path& path);

}  // namespace rvpp
