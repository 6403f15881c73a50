#include <chrono>
#include <cstdio>

#include "rabeam/selfcheck.hpp"

// Runs every acceptance criterion at its full advertised budget and prints
// one PASS/FAIL line per criterion. Exit status is the number of failures.
int main()
{
    rabeam::CheckParams params;
    params.protocol.out_csv = "acceptance_results.csv";
    params.protocol.out_svg = "acceptance_mean_sinr.svg";

    const auto t0 = std::chrono::steady_clock::now();
    const auto outcomes = rabeam::acceptance_checks(params);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    int failures = 0;
    for (const auto& o : outcomes) {
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", o.name.c_str(), o.detail.c_str());
        if (!o.pass)
            ++failures;
    }
    std::printf("%zu/%zu criteria passed in %.1f s\n", outcomes.size() - failures,
                outcomes.size(), secs);
    return failures;
}
