#ifndef RMSIM_FSIO_HPP
#define RMSIM_FSIO_HPP

#include <filesystem>
#include <string>

namespace rmsim {

std::string read_text_file(const std::filesystem::path& path);

/// Writes to a temporary sibling first, then renames into place.
void write_text_file_atomic(const std::filesystem::path& path,
                            const std::string& content);

}  // namespace rmsim

#endif
