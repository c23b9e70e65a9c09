// Rewrites tests/golden from the current build of the tool. Review the diff
// before committing.
#include <fstream>
#include <iostream>

#include "cli_cases.hpp"

int main() {
  for (const auto& c : cli::cases()) {
    const cli::Result r = cli::run(c, NLIE_CLI_PATH, NLIE_TEST_DIR);
    std::ofstream(cli::golden_path(NLIE_TEST_DIR, c, ".out"), std::ios::binary) << r.out;
    std::ofstream(cli::golden_path(NLIE_TEST_DIR, c, ".err"), std::ios::binary) << r.err;
    if (r.exit_code != c.exit_code)
      std::cout << c.name << ": exit " << r.exit_code << ", expected " << c.exit_code << "\n";
  }
  std::cout << "wrote " << cli::cases().size() << " cases\n";
}
