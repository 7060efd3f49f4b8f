#pragma once

#include <string>

#include "stocon/report.hpp"

namespace stocon::testing {

inline std::string data_path(const std::string& name) { return std::string(STOCON_TEST_DATA) + "/" + name; }

inline std::string read_data(const std::string& name) { return read_file(data_path(name)); }

}  // namespace stocon::testing
