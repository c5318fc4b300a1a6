#include <cstdlib>
#include <cstring>
#include <iostream>

#include "fastlight/acceptance.hpp"

int main(int argc, char** argv) {
  fastlight::AcceptanceOptions options;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--reduced") == 0) options.reduced = true;
  if (const char* t = std::getenv("FASTLIGHT_THREADS")) options.threads = std::atoi(t);

  const auto checks = fastlight::run_acceptance(options);
  std::cout << fastlight::format_report(checks) << std::flush;
  return fastlight::all_passed(checks) ? 0 : 1;
}
