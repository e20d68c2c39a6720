#ifndef KRONLAB_CLI_HPP_
#define KRONLAB_CLI_HPP_

#include "kronlab/generators.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace kronlab {

// Exit status: 0 success, 1 validation or I/O error, 2 usage error.
// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Parses a generator flag list (the `generate` options minus --out,
// --rng-seed and --threads). Throws CLI11 parse errors on bad usage.
GenConfig parse_generator_flags(const std::vector<std::string>& args);

// Splits a probe config file into tokens: one flag (optionally followed by
// its value) per line, '#' starts a comment.
std::vector<std::string> read_flag_file(const std::string& path);

}  // namespace kronlab

#endif  // KRONLAB_CLI_HPP_
