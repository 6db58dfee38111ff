#include "normlab/acceptance.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iostream>

int main(int argc, char** argv) {
    normlab::AcceptanceOptions opt;
    opt.full = true;
    opt.workers = 4;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) opt.full = false;
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) opt.only = std::atoi(argv[++i]);
    }
    const auto results = normlab::run_acceptance(opt);
    int failures = 0;
    for (const auto& r : results) {
        std::printf("[%s] criterion %2d %-24s %8.2f s  %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.seconds, r.measured.dump().c_str());
        failures += r.passed ? 0 : 1;
    }
    std::printf("%zu criteria, %d failed\n", results.size(), failures);
    return failures == 0 ? 0 : 1;
}
