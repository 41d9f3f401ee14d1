#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "semem/world.hpp"

namespace semem {

inline constexpr int kFormatVersion = 1;

/// Canonical `.semem.json` text for a world: nodes sorted by id, edges by
/// (source, dest, kind, label, object), two-space indent, trailing newline.
/// Identical state gives identical bytes. Scene nodes and the edges touching
/// them are left out unless `include_scene` is set; counters are always kept.
std::string serialize(const World& world, bool include_scene = false);

/// Writes `serialize(world)` to `path`. Returns the byte count; throws IoFailure.
std::size_t save(const World& world, const std::filesystem::path& path, bool include_scene = false);

/// Rebuilds a world from document text. Throws MalformedDocument (position or
/// field path in the message), UnsupportedVersion or IntegrityViolation. The
/// returned graph passes every graph invariant.
World deserialize(std::string_view text);

/// Reads and deserializes a file; IoFailure when it cannot be read.
World load(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace semem
