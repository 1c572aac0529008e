#include <cstdio>

int main() {
  std::puts("sl4cohom: commands land with the full build");
  return 0;
}
