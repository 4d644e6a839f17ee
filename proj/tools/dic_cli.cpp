#include <cstdio>
int main() { std::printf("stub\n"); return 0; }
