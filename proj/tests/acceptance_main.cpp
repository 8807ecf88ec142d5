// Runs the full verification suite, one PASS/FAIL line per check.
#include <iostream>

#include "fsi/checks.hpp"

int main() { return fsi::run_checks("", std::cout) == 0 ? 0 : 1; }
