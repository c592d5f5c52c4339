// CLI entry point; subcommands are registered in main() once the
// partitioning pipeline is in place.
#include <iostream>

int main() {
  std::cout << "hypar\n";
  return 0;
}
