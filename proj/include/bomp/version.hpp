#pragma once

#define BOMP_VERSION "0.1.0"

namespace bomp {

inline const char* version() { return BOMP_VERSION; }

}  // namespace bomp
