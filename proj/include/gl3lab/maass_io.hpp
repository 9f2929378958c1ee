#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gl3lab/lfunctions.hpp"

namespace gl3lab {

// One form per text: '#' comments, a `t <float> parity <even|odd>` header,
// then `p <prime> lambda <float>` lines. An empty text gives no form.
std::vector<MaassFormGL2> parse_maass_text(const std::string& text, const std::string& source_id);

// A file yields at most one form; a directory yields the forms of its regular
// files in name order.
std::vector<MaassFormGL2> ingest_maass_data(const std::filesystem::path& path);

std::string serialize_maass(const MaassFormGL2& f);

}  // namespace gl3lab
