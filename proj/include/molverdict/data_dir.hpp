//
// Project MolVerdict - Copyright 2026 MolVerdict Developers.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdlib>
#include <string>

namespace molverdict {

// Bundled data directory: compile-time default, overridable with the
// MOLVERDICT_DATA_DIR environment variable.
inline std::string default_data_dir() {
  const char* env = std::getenv("MOLVERDICT_DATA_DIR");
#ifdef MOLVERDICT_DATA_DIR
  return env != nullptr ? std::string(env) : std::string(MOLVERDICT_DATA_DIR);
#else
  return env != nullptr ? std::string(env) : std::string("data");
#endif
}

}  // namespace molverdict
