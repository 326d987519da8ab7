#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "hk/montecarlo.hpp"
#include "hk/rng.hpp"

using hk::rng::cell_seed;
using hk::rng::mix64;
using hk::rng::trial_seed;
using hk::rng::Xoshiro256pp;

// Frozen stream values: these are part of the reproducibility contract, so a
// change here is a breaking change for recorded seeds.
TEST_CASE("seed mixing golden values") {
    REQUIRE(trial_seed(1, 0) == 0xe4d971771b652c20ull);
    REQUIRE(trial_seed(1, 1) == 0xbeeb8da1658eec67ull);
    REQUIRE(trial_seed(9, 41) == 0x6c8a673398e6abdeull);
    REQUIRE(cell_seed(9, 2, 0) == 0xb32934cbd2fbf86full);
    REQUIRE(cell_seed(1, 10, 2) == 0x7001395b2a4bce51ull);
}

TEST_CASE("xoshiro256++ golden stream") {
    Xoshiro256pp gen(42);
    REQUIRE(gen() == 0xd0764d4f4476689full);
    REQUIRE(gen() == 0x519e4174576f3791ull);
    REQUIRE(gen() == 0xfbe07cfb0c24ed8cull);
}

TEST_CASE("trial seeds are pairwise distinct across nearby indices and masters") {
    std::set<std::uint64_t> outs;
    for (std::uint64_t i = 0; i < 4096; ++i) {
        outs.insert(trial_seed(7, i));
        outs.insert(trial_seed(8, i));
    }
    REQUIRE(outs.size() == 2 * 4096);
    REQUIRE(mix64(1) != 1);
}

TEST_CASE("uniform01 stays in [0,1)") {
    Xoshiro256pp gen(123);
    for (int i = 0; i < 100000; ++i) {
        const double u = gen.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("sample_initial is deterministic and canonical") {
    const auto a = hk::sample_initial<double>(5, 99);
    const auto b = hk::sample_initial<double>(5, 99);
    REQUIRE(a.opinions() == b.opinions());
    REQUIRE(std::is_sorted(a.opinions().begin(), a.opinions().end()));
    REQUIRE(hk::sample_initial<double>(5, 100).opinions() != a.opinions());
}

TEST_CASE("sample_initial rejects n = 0 and handles n = 1") {
    REQUIRE_THROWS_AS(hk::sample_initial<double>(0, 1), std::invalid_argument);
    const auto p = hk::sample_initial<double>(1, 7);
    REQUIRE(p.size() == 1);
    REQUIRE(p[0] >= 0.0);
    REQUIRE(p[0] <= 1.0);
}

TEST_CASE("sample_initial empirical mean matches uniform moments") {
    const std::size_t n = 100000;
    const auto p = hk::sample_initial<double>(n, 2718);
    double mean = 0.0;
    for (const double v : p.opinions()) {
        mean += v;
    }
    mean /= static_cast<double>(n);
    const double three_sigma = 3.0 / std::sqrt(12.0 * static_cast<double>(n));
    REQUIRE(std::abs(mean - 0.5) <= three_sigma);
}

TEST_CASE("rational sampling is the exact twin of the float sampling") {
    const auto pf = hk::sample_initial<double>(16, 555);
    const auto pr = hk::sample_initial<hk::rational>(16, 555);
    for (std::size_t i = 0; i < pf.size(); ++i) {
        REQUIRE(hk::rational(pf[i]) == pr[i]);
    }
}
