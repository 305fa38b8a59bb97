#include <cstdio>

int main() {
  std::puts("qrep CLI placeholder");
  return 0;
}
