// Acceptance suite: one numbered criterion per invocation (or "all").
// Each criterion prints a single PASS/FAIL line; the process exit code is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <iostream>

int run_criterion(int id); // defined in acceptance_criteria.cpp

int main(int argc, char** argv) {
    int lo = 1, hi = 11;
    if (argc > 1 && std::string(argv[1]) != "all") {
        lo = hi = std::atoi(argv[1]);
        if (lo < 1 || hi > 11) {
            std::cerr << "usage: acceptance [1..11|all]\n";
            return 64;
        }
    }
    int failures = 0;
    for (int id = lo; id <= hi; ++id) failures += run_criterion(id);
    return failures;
}
