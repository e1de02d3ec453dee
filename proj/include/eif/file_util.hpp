#pragma once

#include <string>

namespace eif {

std::string read_file(const std::string& path);

/// Writes to a sibling temporary file, fsyncs, then renames over path.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace eif
