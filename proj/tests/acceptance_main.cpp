// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
#include <iostream>

#include "prodesc/verify.hpp"

int main() {
    auto report = prodesc::verify_paper(&std::cout);
    std::cout << (report.all_pass() ? "ALL CRITERIA PASS" : "SOME CRITERIA FAILED") << std::endl;
    return report.all_pass() ? 0 : 1;
}
