#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

int main(int argc, char** argv) {
    doctest::Context ctx;
    // Default to the fast suite when no filter is given.
    ctx.applyCommandLine(argc, argv);
    return ctx.run();
}
