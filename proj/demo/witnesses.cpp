// Approximate a few reals by n gamma with n a 0/1-digit integer, comparing the
// pigeonhole witness with the true optimum.

#include <cstdio>

#include "radix_approx/radix_approx.hpp"

using namespace radix_approx;

int main() {
    const Integer N = 1'000'000;
    for (const char* g : {"355/113", "sqrt2", "pi", "0.1234567"}) {
        const RealValue gamma = parse_real(g);
        for (long b : {2L, 3L, 10L}) {
            const ApproxResult pig = pigeonhole_witness(gamma, Base(b), N);
            const ApproxResult best = oracle_min(gamma, SetSpec::Db(Base(b)), N);
            std::printf("gamma=%-10s b=%-2ld  pigeonhole n=%-8s ||n gamma||~%.3e (<= %s)   best n=%-8s ~%.3e\n", g, b,
                        pig.witness.get_str().c_str(), pig.distance.to_double(), pig.guarantee->str().c_str(),
                        best.witness.get_str().c_str(), best.distance.to_double());
        }
    }
}
