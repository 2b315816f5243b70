#pragma once

#include <ostream>

namespace recint::cli {

// Runs the command line; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace recint::cli
