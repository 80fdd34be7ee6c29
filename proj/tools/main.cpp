#include <cstdio>

int main() {
  std::puts("gfb (placeholder)");
  return 0;
}
