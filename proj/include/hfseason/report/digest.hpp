#pragma once

#include <string>
#include <string_view>

namespace hfseason::report {

/// SHA-256 of a byte string, lowercase hex.
std::string sha256_hex(std::string_view data);

/// SHA-256 of a file's bytes. Throws DataError when unreadable.
std::string sha256_file(const std::string& path);

}  // namespace hfseason::report
