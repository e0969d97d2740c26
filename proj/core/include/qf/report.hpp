#pragma once

#include <cstdint>
#include <string>

namespace qf {

// FNV-1a 64-bit content hash used to identify inputs in reports.
uint64_t fnv1a64(const std::string& bytes);
std::string hash_hex(const std::string& bytes);

// Writes via a temporary file in the same directory followed by rename, so
// readers never observe a partial report.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace qf
