#include <cstring>
#include <iostream>

#include "abtunnel/verify.hpp"

// Runs criteria 1-11 and prints one line per criterion. --full includes
// the large lattice runs.
int main(int argc, char** argv)
{
    abtunnel::VerifyOptions opt;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--full") == 0) opt.level = abtunnel::VerifyLevel::full;
    opt.log = &std::cerr;
    const auto results = abtunnel::run_acceptance(opt);
    for (const auto& r : results) std::cout << abtunnel::format_result(r) << '\n';
    const bool ok = abtunnel::all_passed(results);
    std::cout << (ok ? "acceptance: all criteria passed" : "acceptance: FAILED") << std::endl;
    return ok ? 0 : 1;
}
