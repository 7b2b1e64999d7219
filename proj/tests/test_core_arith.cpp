#include <catch2/catch_amalgamated.hpp>

#include <cstdint>

#include "snlcm/factor.hpp"
#include "snlcm/primality.hpp"
#include "snlcm/rational_poly.hpp"
#include "snlcm/rng.hpp"

using namespace snlcm;

namespace {

// independent oracle: trial division up to sqrt(n)
bool trial_division_is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace

TEST_CASE("is_prime on small cases") {
    CHECK_FALSE(is_prime_u64(0));
    CHECK_FALSE(is_prime_u64(1));
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(3));
    CHECK_FALSE(is_prime_u64(4));
}

TEST_CASE("is_prime(1000000007) agrees with the trial-division oracle") {
    REQUIRE(trial_division_is_prime(1000000007ULL));
    CHECK(is_prime_u64(1000000007ULL));
    CHECK(is_prime(mpz_class(1000000007)));
}

TEST_CASE("is_prime agrees with trial division up to 20000") {
    for (uint64_t n = 0; n <= 20000; ++n)
        REQUIRE(is_prime_u64(n) == trial_division_is_prime(n));
}

TEST_CASE("is_prime on strong-pseudoprime traps") {
    // Carmichael numbers and near misses
    CHECK_FALSE(is_prime_u64(561));
    CHECK_FALSE(is_prime_u64(1729));
    CHECK_FALSE(is_prime_u64(25326001));
    CHECK_FALSE(is_prime_u64(3215031751ULL));
    CHECK(is_prime_u64(18446744073709551557ULL)); // largest prime below 2^64
    CHECK_FALSE(is_prime_u64(18446744073709551615ULL));
}

TEST_CASE("classify_prime flags the probabilistic range") {
    CHECK(classify_prime(mpz_class(97)) == Primality::ProvenPrime);
    // 2^89 - 1 is a Mersenne prime, beyond the proven witness range
    mpz_class m89 = (mpz_class(1) << 89) - 1;
    CHECK(classify_prime(m89) == Primality::ProbablePrime);
    CHECK(classify_prime(m89 + 2) == Primality::Composite);
}

TEST_CASE("factor examples") {
    CHECK(factor(mpz_class(1)).entries.empty());

    Factorization f360 = factor(mpz_class(360)); // 8 * 9 * 5 by hand
    REQUIRE(f360.entries.size() == 3);
    CHECK(f360.entries[0].prime == 2);
    CHECK(f360.entries[0].exponent == 3);
    CHECK(f360.entries[1].prime == 3);
    CHECK(f360.entries[1].exponent == 2);
    CHECK(f360.entries[2].prime == 5);
    CHECK(f360.entries[2].exponent == 1);

    // lcm(1..10) = 2520 computed by brute force
    mpz_class l = 1;
    for (int i = 1; i <= 10; ++i) {
        mpz_class v(i);
        l = lcm(l, v);
    }
    REQUIRE(l == 2520);
    Factorization f = factor(l);
    REQUIRE(f.entries.size() == 4);
    CHECK(f.entries[0].prime == 2);
    CHECK(f.entries[0].exponent == 3);
    CHECK(f.entries[1].prime == 3);
    CHECK(f.entries[1].exponent == 2);
    CHECK(f.entries[2].prime == 5);
    CHECK(f.entries[3].prime == 7);
}

TEST_CASE("factor reconstructs random inputs below 1e15") {
    CounterRng rng(20240811, 0);
    for (int i = 0; i < 10000; ++i) {
        mpz_class n(rng.below(1000000000000000ULL) + 1);
        Factorization f = factor(n);
        REQUIRE(f.product() == n);
        CHECK(f.proven());
        for (size_t j = 0; j < f.entries.size(); ++j) {
            CHECK(is_prime(f.entries[j].prime));
            CHECK(f.entries[j].exponent >= 1);
            if (j > 0) CHECK(f.entries[j - 1].prime < f.entries[j].prime);
        }
    }
}

TEST_CASE("factor handles perfect powers and large semiprimes") {
    mpz_class p("1000000000039"), q("1000000000061");
    Factorization f = factor(p * q);
    REQUIRE(f.entries.size() == 2);
    CHECK(f.entries[0].prime == p);
    CHECK(f.entries[1].prime == q);

    Factorization g = factor(p * p);
    REQUIRE(g.entries.size() == 1);
    CHECK(g.entries[0].prime == p);
    CHECK(g.entries[0].exponent == 2);
}

TEST_CASE("moebius examples and divisor-sum identity") {
    CHECK(moebius(mpz_class(1)) == 1);
    CHECK(moebius(mpz_class(6)) == 1);
    CHECK(moebius(mpz_class(12)) == 0);
    CHECK(moebius(mpz_class(2)) == -1);
    CHECK(moebius(mpz_class(30)) == -1);

    // sum_{d | n} mu(d) = [n == 1]
    for (int n = 1; n <= 10000; ++n) {
        int s = 0;
        for (int d = 1; d * d <= n; ++d) {
            if (n % d != 0) continue;
            s += moebius(mpz_class(d));
            if (d != n / d) s += moebius(mpz_class(n / d));
        }
        REQUIRE(s == (n == 1 ? 1 : 0));
    }
}

TEST_CASE("poly_binomial examples") {
    RationalPoly q = RationalPoly::variable();

    // C(q, 2) = (q^2 - q)/2
    RationalPoly c2 = poly_binomial(q, 2);
    CHECK(c2.coeff(2) == mpq_class(1, 2));
    CHECK(c2.coeff(1) == mpq_class(-1, 2));
    CHECK(c2.coeff(0) == 0);
    CHECK(c2.degree() == 2);

    // C(P, 1) = P
    CHECK(poly_binomial(c2, 1) == c2);

    // C((q^2-q)/2, 2) = (q^4 - 2q^3 - q^2 + 2q)/8
    RationalPoly c22 = poly_binomial(c2, 2);
    CHECK(c22.degree() == 4);
    CHECK(c22.coeff(4) == mpq_class(1, 8));
    CHECK(c22.coeff(3) == mpq_class(-1, 4));
    CHECK(c22.coeff(2) == mpq_class(-1, 8));
    CHECK(c22.coeff(1) == mpq_class(1, 4));
    CHECK(c22.coeff(0) == 0);
}

TEST_CASE("poly_binomial agrees with integer binomial at integer points") {
    std::vector<RationalPoly> ps;
    RationalPoly q = RationalPoly::variable();
    ps.push_back(q);
    ps.push_back(poly_binomial(q, 2));                       // (q^2-q)/2
    ps.push_back(q * q + q);                                 // q^2+q
    ps.push_back(q * q * q - q);                             // q^3-q
    for (const RationalPoly& P : ps) {
        for (unsigned r = 0; r <= 4; ++r) {
            RationalPoly B = poly_binomial(P, r);
            for (int x = 0; x <= 7; ++x) {
                mpq_class v = P.eval(x);
                REQUIRE(v.get_den() == 1);
                if (v < 0) continue;
                mpz_class n = v.get_num();
                mpz_class expect;
                mpz_bin_ui(expect.get_mpz_t(), n.get_mpz_t(), r);
                mpq_class got = B.eval(x);
                REQUIRE(got.get_den() == 1);
                REQUIRE(got.get_num() == expect);
            }
        }
    }
}

TEST_CASE("rational poly arithmetic and printing") {
    RationalPoly q = RationalPoly::variable();
    RationalPoly p = q * q - q;
    CHECK(p.to_string() == "q^2 - q");
    CHECK((p / mpq_class(2)).to_string() == "1/2*q^2 - 1/2*q");
    CHECK(RationalPoly().to_string() == "0");
    CHECK((p - p).is_zero());
}
