#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "frslab/count.hpp"

namespace frslab {

// File name for one cached cell: <scheme-hash>.p<p>.r<r>.n<n>. The file
// holds the decimal count on the first line and the engine tag on the
// second.
std::string cache_key(const std::string& scheme_hash, std::uint64_t p, int r,
                      int n);

// Reads one cached record. Missing or malformed files are misses (nullopt),
// never errors, so a damaged cache degrades to recomputation.
std::optional<CountRecord> cache_read(const std::string& dir,
                                      const std::string& key);

// Writes through a temporary file in the same directory followed by a
// rename, so concurrent readers never observe a torn entry. Creates the
// directory if needed. Throws invalid_input_error when the directory is
// unusable.
void cache_write(const std::string& dir, const std::string& key,
                 const CountRecord& rec);

// Cache directory resolution: an explicit flag value wins, then the
// FRSLAB_CACHE environment variable, then ./.frslab-cache.
std::string resolve_cache_dir(const std::string& flag_value);

}  // namespace frslab
