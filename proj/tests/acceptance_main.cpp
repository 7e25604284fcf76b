// Acceptance gate: one line per criterion, nonzero exit on any failure.

#include <cstdio>
#include <cstring>

#include "yamabe/acceptance.hpp"

int main(int argc, char** argv) {
    auto profile = yamabe::accept::Profile::full;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--quick") == 0) profile = yamabe::accept::Profile::quick;
    const auto results = yamabe::accept::run_all(profile);
    std::fputs(yamabe::accept::format_lines(results).c_str(), stdout);
    return yamabe::accept::all_passed(results) ? 0 : 1;
}
