// CLI entry point; subcommands are wired up in cli_main.
#include <cstdio>

int main(int, char**) {
    std::puts("snlcm: not wired up yet");
    return 1;
}
