#include "rsph/data.hpp"

#include <cstdlib>

#ifndef RSPH_DATA_DIR_DEFAULT
#define RSPH_DATA_DIR_DEFAULT "data"
#endif

namespace rsph {

std::string data_dir() {
    if (const char* env = std::getenv("RSPH_DATA_DIR"); env && *env) return env;
    return RSPH_DATA_DIR_DEFAULT;
}

std::string data_file(const std::string& name) {
    return data_dir() + "/" + name;
}

}  // namespace rsph
