// Runs every acceptance criterion and prints one line per criterion.
// Exit status is non-zero if any criterion fails.

#include <cstdlib>
#include <iostream>
#include <string>

#include "radix_approx/acceptance.hpp"

int main(int argc, char** argv) {
    radix_approx::acceptance::Options opt;
    for (int i = 1; i + 1 < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--seed") opt.seed = std::stoull(argv[++i], nullptr, 0);
        else if (a == "--threads") opt.threads = static_cast<unsigned>(std::stoul(argv[++i]));
    }
    int failed = 0;
    for (const auto& r : radix_approx::acceptance::run_all(opt)) {
        std::cout << radix_approx::acceptance::format_line(r) << std::endl;
        failed += r.passed ? 0 : 1;
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
    return failed ? EXIT_FAILURE : EXIT_SUCCESS;
}
