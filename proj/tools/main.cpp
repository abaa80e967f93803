#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  jxlab::cli::ParseResult parsed;
  try {
    parsed = jxlab::cli::parse_args(args);
  } catch (const jxlab::cli::UsageError& e) {
    std::cerr << "jxlab: " << e.what() << "\nRun 'jxlab --help' for usage.\n";
    return 2;
  }
  if (const auto* help = std::get_if<jxlab::cli::HelpRequest>(&parsed)) {
    std::cout << help->text;
    return 0;
  }
  return jxlab::cli::execute(std::get<jxlab::cli::Command>(parsed), std::cout, std::cerr);
}
