#pragma once

#include <string>

namespace rsph {

// Directory holding the database files. Overridable with RSPH_DATA_DIR;
// defaults to the path compiled in from the source tree.
std::string data_dir();
std::string data_file(const std::string& name);

}  // namespace rsph
