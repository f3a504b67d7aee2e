#include <cstdio>

int main() {
    std::puts("tfpp: placeholder");
    return 0;
}
