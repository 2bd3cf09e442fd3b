#include <iostream>

int main() {
  std::cout << "pgsynth: CLI not wired up yet\n";
  return 2;
}
