#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qmeas/config.hpp"

namespace qmeas {

// Every subcommand schema, with the shared out_dir and name keys appended.
const std::vector<Schema>& command_schemas();

std::string usage();

// Full command line without the program name. Returns the process exit code:
// 0 success, 2 configuration error, 1 numeric failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qmeas
