// gamma_N = 1/(b^k - 1) keeps every one of the first N elements of Db away
// from the integers. Prints the certificate for a few N.

#include <cstdio>

#include "radix_approx/radix_approx.hpp"

using namespace radix_approx;

int main() {
    std::printf("%3s %8s %3s %14s %14s %14s\n", "b", "N", "k", "min dist", "1/(b^k-1)", "b^-4 N^-e");
    for (long b : {3L, 5L, 10L}) {
        for (long N : {7L, 100L, 1L << 12, 1L << 16}) {
            const AdversaryCertificate c = adversarial_gamma(Base(b), Integer(N));
            std::printf("%3ld %8ld %3ld %14.6e %14.6e %14.6e %s\n", b, N, c.k, c.min_distance.to_double(),
                        c.sharper_bound.to_double(), c.lower_bound.to_double(), c.passed ? "ok" : "FAILED");
        }
    }
}
