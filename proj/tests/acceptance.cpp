// Runs the built-in reproduction suite and prints one line per criterion.

#include <iostream>

#include "triarb/verify.hpp"

int main() {
    auto results = triarb::verify::run_all();
    bool ok = triarb::verify::report(results, std::cout);
    if (!ok) {
        std::cout << "verification FAILED\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
