#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "snlcm/lcm_ideal.hpp"
#include "snlcm/number_field.hpp"
#include "snlcm/rng.hpp"

using namespace snlcm;

namespace {

// oracle: norm as the determinant of the multiplication-by-e matrix in the
// power basis, via fraction-free Gaussian elimination over Q
mpz_class norm_via_matrix(const NumberField& K, const FieldElement& e) {
    const unsigned d = K.degree();
    std::vector<std::vector<mpq_class>> M(d, std::vector<mpq_class>(d));
    FieldElement cur = e;
    for (unsigned j = 0; j < d; ++j) {
        for (unsigned i = 0; i < d; ++i) M[i][j] = cur.coords[i];
        if (j + 1 < d) cur = K.mul(cur, K.theta());
    }
    mpq_class det = 1;
    for (unsigned col = 0; col < d; ++col) {
        unsigned piv = col;
        while (piv < d && M[piv][col] == 0) ++piv;
        if (piv == d) return 0;
        if (piv != col) {
            std::swap(M[piv], M[col]);
            det = -det;
        }
        det *= M[col][col];
        mpq_class inv = 1 / M[col][col];
        for (unsigned i = col + 1; i < d; ++i) {
            mpq_class fac = M[i][col] * inv;
            for (unsigned j = col; j < d; ++j) M[i][j] -= fac * M[col][j];
        }
    }
    REQUIRE(det.get_den() == 1);
    return det.get_num();
}

FieldElement rand_element(const NumberField& K, CounterRng& rng, int64_t height) {
    std::vector<mpz_class> c;
    for (unsigned i = 0; i < K.degree(); ++i)
        c.emplace_back(rng.uniform_int(-height, height));
    return K.element(std::move(c));
}

const char* kGaussian = "x^2+1";
const char* kEisenstein = "x^2+x+1";
const char* kDisc7 = "x^2-x+2"; // disc -7

} // namespace

TEST_CASE("field construction and validation") {
    CHECK(NumberField::parse("x").degree() == 1);
    CHECK(NumberField::parse(kGaussian).degree() == 2);
    CHECK(NumberField::parse(kGaussian).disc() == -4);
    CHECK(NumberField::parse(kEisenstein).disc() == -3);
    CHECK(NumberField::parse(kDisc7).disc() == -7);
    CHECK(NumberField::parse("x^3-x-1").disc() == -23);

    // not monic
    CHECK_THROWS_AS(NumberField::parse("2x^2+1"), std::invalid_argument);
    // reducible: rational root
    CHECK_THROWS_AS(NumberField::parse("x^2-1"), std::invalid_argument);
    CHECK_THROWS_AS(NumberField::parse("x^2"), std::invalid_argument);
    // Z[sqrt(-3)] is not maximal at 2
    CHECK_THROWS_AS(NumberField::parse("x^2+3"), UnsupportedFieldError);
    // x^4+1 is irreducible over Q but reducible mod every prime
    CHECK(NumberField::parse("x^4+1").degree() == 4);
    CHECK_THROWS_AS(NumberField::parse("x^4+2x^2+1"), std::invalid_argument);
}

TEST_CASE("unit group finiteness detection") {
    CHECK(NumberField::parse("x").unit_group_finite());
    CHECK(NumberField::parse(kGaussian).unit_group_finite());
    CHECK_FALSE(NumberField::parse("x^2-2").unit_group_finite());  // real quadratic
    CHECK_FALSE(NumberField::parse("x^3-x-1").unit_group_finite());
}

TEST_CASE("norm examples") {
    NumberField K = NumberField::parse(kGaussian);
    CHECK(K.norm(K.element({3, 2})) == 13); // 3^2 + 2^2
    CHECK(K.norm(K.one()) == 1);
    // N(theta) = (-1)^d g(0)
    CHECK(K.norm(K.theta()) == 1);
    NumberField K7 = NumberField::parse(kDisc7);
    CHECK(K7.norm(K7.theta()) == 2);
    NumberField Q = NumberField::parse("x");
    CHECK(Q.norm(Q.from_int(-17)) == -17);
}

TEST_CASE("norm routes agree: closed form, resultant, matrix determinant") {
    CounterRng rng(777, 0);
    for (const char* spec : {"x", kGaussian, kEisenstein, kDisc7, "x^3-x-1"}) {
        NumberField K = NumberField::parse(spec);
        for (int i = 0; i < 200; ++i) {
            FieldElement e = rand_element(K, rng, 50);
            mpz_class n1 = K.norm(e);
            CHECK(n1 == K.norm_via_resultant(e));
            CHECK(n1 == norm_via_matrix(K, e));
        }
    }
}

TEST_CASE("multiplication satisfies the defining relation") {
    NumberField K = NumberField::parse("x^3-x-1");
    // theta^3 = theta + 1
    FieldElement t3 = K.mul(K.mul(K.theta(), K.theta()), K.theta());
    CHECK(t3 == K.element({1, 1, 0}));
    // norm is multiplicative
    CounterRng rng(13, 5);
    for (int i = 0; i < 100; ++i) {
        FieldElement a = rand_element(K, rng, 20), b = rand_element(K, rng, 20);
        CHECK(K.norm(K.mul(a, b)) == K.norm(a) * K.norm(b));
    }
}

TEST_CASE("factor_prime examples over Q(i)") {
    NumberField K = NumberField::parse(kGaussian);

    auto p5 = K.factor_prime(5); // x^2+1 = (x-2)(x-3) mod 5
    REQUIRE(p5.size() == 2);
    CHECK(p5[0].e == 1);
    CHECK(p5[0].f == 1);
    CHECK(p5[1].f == 1);
    CHECK(p5[0].norm == 5);

    auto p3 = K.factor_prime(3); // inert
    REQUIRE(p3.size() == 1);
    CHECK(p3[0].e == 1);
    CHECK(p3[0].f == 2);
    CHECK(p3[0].norm == 9);

    auto p2 = K.factor_prime(2); // ramified: (x+1)^2
    REQUIRE(p2.size() == 1);
    CHECK(p2[0].e == 2);
    CHECK(p2[0].f == 1);
}

TEST_CASE("sum of e*f equals the degree for p <= 10^4") {
    for (const char* spec : {"x", kGaussian, kEisenstein, kDisc7, "x^3-x-1"}) {
        NumberField K = NumberField::parse(spec);
        for (uint64_t p = 2; p <= 10000; ++p) {
            if (!is_prime_u64(p)) continue;
            unsigned total = 0;
            for (const auto& P : K.factor_prime(mpz_class(static_cast<unsigned long>(p)))) {
                total += P.e * P.f;
                mpz_class expect_norm;
                mpz_pow_ui(expect_norm.get_mpz_t(), P.p.get_mpz_t(), P.f);
                REQUIRE(P.norm == expect_norm);
            }
            REQUIRE(total == K.degree());
        }
    }
}

TEST_CASE("reduce examples") {
    NumberField K = NumberField::parse(kGaussian);
    auto p5 = K.factor_prime(5);
    // the prime with local factor x+3 has theta |-> 2
    const PrimeIdeal& P = p5[0].local_factor[0] == 3 ? p5[0] : p5[1];
    FqElem r = K.reduce(K.element({3, 2}), P);
    CHECK(r == K.residue_field(P).from_uint(2)); // 3 + 2*2 = 7 = 2 mod 5

    CHECK(K.residue_field(P).is_zero(K.reduce(K.zero(), P)));

    auto p2 = K.factor_prime(2);
    FqElem r2 = K.reduce(K.element({1, 1}), p2[0]); // theta |-> 1, so 1+1 = 0
    CHECK(K.residue_field(p2[0]).is_zero(r2));

    auto p3 = K.factor_prime(3); // residue field F_9
    const FiniteField& F9 = K.residue_field(p3[0]);
    CHECK(F9.order() == 9);
    FqElem r3 = K.reduce(K.element({1, 1}), p3[0]); // 1 + t
    CHECK(r3 == std::vector<uint64_t>{1, 1});
}

TEST_CASE("valuation examples") {
    NumberField K = NumberField::parse(kGaussian);
    auto p2 = K.factor_prime(2);
    CHECK(K.valuation(K.from_int(2), p2[0]) == 2); // 2 = -i (1+i)^2

    auto p5 = K.factor_prime(5);
    CHECK(K.valuation(K.from_int(5), p5[0]) == 1);
    CHECK(K.valuation(K.from_int(5), p5[1]) == 1);
    CHECK(K.valuation(K.one(), p5[0]) == 0);

    // 1 + i has valuation 1 at the ramified prime
    CHECK(K.valuation(K.element({1, 1}), p2[0]) == 1);

    auto p3 = K.factor_prime(3);
    CHECK(K.valuation(K.from_int(9), p3[0]) == 2);
    CHECK(K.valuation(K.from_int(3), p3[0]) == 1);
}

TEST_CASE("prime ideal HNF has the right norm") {
    for (const char* spec : {kGaussian, kEisenstein, kDisc7, "x^3-x-1"}) {
        NumberField K = NumberField::parse(spec);
        for (uint64_t p : {2, 3, 5, 7, 11, 13}) {
            for (const auto& P : K.factor_prime(mpz_class(static_cast<unsigned long>(p)))) {
                IdealHNF H = K.prime_ideal_hnf(P);
                CHECK(H.norm() == P.norm);
                IdealHNF H2 = K.ideal_pow(H, 2);
                CHECK(H2.norm() == P.norm * P.norm);
            }
        }
    }
}

TEST_CASE("product of p^{f v} over all primes equals |N(e)|") {
    CounterRng rng(424242, 1);
    for (const char* spec : {"x", kGaussian, kEisenstein, kDisc7}) {
        NumberField K = NumberField::parse(spec);
        for (int i = 0; i < 1000; ++i) {
            FieldElement e = rand_element(K, rng, 40);
            if (K.is_zero(e)) continue;
            mpz_class N = abs(K.norm(e));
            if (N == 0) continue;
            mpz_class recomposed = 1;
            for (const auto& entry : factor(N).entries) {
                for (const auto& P : K.factor_prime(entry.prime)) {
                    unsigned v = K.valuation(e, P);
                    mpz_class t;
                    mpz_pow_ui(t.get_mpz_t(), P.p.get_mpz_t(),
                               static_cast<unsigned long>(P.f) * v);
                    recomposed *= t;
                }
            }
            REQUIRE(recomposed == N);
        }
    }
}

TEST_CASE("Hensel fast path agrees with HNF containment path") {
    CounterRng rng(31415926, 2);
    std::vector<NumberField> fields;
    for (const char* spec : {kGaussian, kEisenstein, kDisc7, "x^3-x-1"})
        fields.push_back(NumberField::parse(spec));
    int checked = 0;
    while (checked < 10000) {
        const NumberField& K = fields[rng.below(fields.size())];
        FieldElement e = rand_element(K, rng, 60);
        if (K.is_zero(e)) continue;
        mpz_class N = abs(K.norm(e));
        for (const auto& entry : factor(N).entries) {
            for (const auto& P : K.factor_prime(entry.prime)) {
                if (P.e != 1 || P.f != 1) continue;
                const unsigned via_hensel = K.valuation_hensel(e, P, entry.exponent);
                const unsigned via_hnf = K.valuation_hnf(e, P, entry.exponent);
                REQUIRE(via_hensel == via_hnf);
                ++checked;
            }
        }
    }
}

TEST_CASE("primes_up_to examples") {
    NumberField Q = NumberField::parse("x");
    CHECK(Q.primes_up_to(10).size() == 4); // 2, 3, 5, 7
    CHECK(Q.primes_up_to(1).empty());

    NumberField K = NumberField::parse(kGaussian);
    auto primes = K.primes_up_to(10); // norms 2, 5, 5, 9
    REQUIRE(primes.size() == 4);
    CHECK(primes[0].norm == 2);
    CHECK(primes[1].norm == 5);
    CHECK(primes[2].norm == 5);
    CHECK(primes[3].norm == 9);
    // sorted by norm and canonical within
    CHECK(std::is_sorted(primes.begin(), primes.end(),
                         [](const PrimeIdeal& a, const PrimeIdeal& b) { return a.norm < b.norm; }));
}

TEST_CASE("elements_up_to_norm examples") {
    NumberField Q = NumberField::parse("x");
    auto v = Q.elements_up_to_norm(5, ElementEnumMode::OrbitRepresentatives);
    REQUIRE(v.size() == 5);
    for (int i = 1; i <= 5; ++i) CHECK(v[i - 1] == Q.from_int(i));

    NumberField K = NumberField::parse(kGaussian);
    auto all = K.elements_up_to_norm(2, ElementEnumMode::AllUnits);
    CHECK(all.size() == 8); // +-1, +-i, +-1 +- i

    auto orbits = K.elements_up_to_norm(2, ElementEnumMode::OrbitRepresentatives);
    REQUIRE(orbits.size() == 2);
    CHECK(orbits[0] == K.element({1, 0}));
    CHECK(orbits[1] == K.element({1, 1}));

    CHECK_THROWS_AS(NumberField::parse("x^2-2").elements_up_to_norm(5, ElementEnumMode::AllUnits),
                    UnsupportedFieldError);
}

TEST_CASE("orbit counts times unit order equals total point count") {
    for (const char* spec : {kGaussian, kEisenstein, kDisc7}) {
        NumberField K = NumberField::parse(spec);
        const size_t units = K.torsion_units().size();
        for (int M : {5, 17, 60}) {
            auto all = K.elements_up_to_norm(M, ElementEnumMode::AllUnits);
            auto orb = K.elements_up_to_norm(M, ElementEnumMode::OrbitRepresentatives);
            CHECK(all.size() == units * orb.size());
            for (const auto& e : all) {
                CHECK(!K.is_zero(e));
                CHECK(K.norm(e) <= M);
                CHECK(K.norm(e) >= 1);
            }
        }
    }
}

TEST_CASE("torsion unit counts") {
    CHECK(NumberField::parse(kGaussian).torsion_units().size() == 4);
    CHECK(NumberField::parse(kEisenstein).torsion_units().size() == 6);
    CHECK(NumberField::parse(kDisc7).torsion_units().size() == 2);
    CHECK(NumberField::parse("x").torsion_units().size() == 2);
}

TEST_CASE("accumulate examples over Q") {
    NumberField Q = NumberField::parse("x");
    LcmAccumulator acc;
    accumulate(Q, acc, Q.from_int(12));
    REQUIRE(acc.exponents().size() == 2);
    CHECK(acc.norm_value() == 12);

    accumulate(Q, acc, Q.from_int(8));
    CHECK(acc.norm_value() == 24); // exponent of 2 bumps to 3

    LcmAccumulator acc10;
    for (int i = 1; i <= 10; ++i) accumulate(Q, acc10, Q.from_int(i));
    CHECK(acc10.norm_value() == 2520);
    CHECK(acc10.element_count() == 10);
    CHECK(acc10.log_norm() == Catch::Approx(std::log(2520.0)).epsilon(1e-12));
}

TEST_CASE("log_norm example over Q(i)") {
    NumberField K = NumberField::parse(kGaussian);
    LcmAccumulator acc;
    acc.update(K.factor_prime(2)[0], 2);
    CHECK(acc.log_norm() == Catch::Approx(2 * std::log(2.0)).epsilon(1e-12));
    CHECK(acc.norm_value() == 4);
}

TEST_CASE("accumulation is order independent") {
    NumberField K = NumberField::parse(kEisenstein);
    CounterRng rng(99, 3);
    std::vector<FieldElement> elems;
    for (int i = 0; i < 40; ++i) {
        FieldElement e = rand_element(K, rng, 30);
        if (!K.is_zero(e)) elems.push_back(e);
    }
    LcmAccumulator fwd, bwd, merged_halves;
    for (const auto& e : elems) accumulate(K, fwd, e);
    for (auto it = elems.rbegin(); it != elems.rend(); ++it) accumulate(K, bwd, *it);
    LcmAccumulator a, b;
    for (size_t i = 0; i < elems.size(); ++i) accumulate(K, i % 2 ? a : b, elems[i]);
    merged_halves.merge(a);
    merged_halves.merge(b);
    CHECK(fwd.norm_value() == bwd.norm_value());
    CHECK(fwd.norm_value() == merged_halves.norm_value());
    CHECK(fwd.element_count() == merged_halves.element_count());
}

TEST_CASE("lcm over Q matches the integer lcm oracle") {
    NumberField Q = NumberField::parse("x");
    CounterRng rng(2718281828, 4);
    for (int rep = 0; rep < 20; ++rep) {
        LcmAccumulator acc;
        mpz_class oracle = 1;
        for (int i = 0; i < 50; ++i) {
            mpz_class v(rng.uniform_int(-100000, 100000));
            if (v == 0) continue;
            accumulate(Q, acc, Q.from_int(v));
            mpz_class av = abs(v);
            oracle = lcm(oracle, av);
        }
        REQUIRE(acc.norm_value() == oracle);
    }
}

TEST_CASE("valuation at a huge split prime") {
    NumberField K = NumberField::parse(kGaussian);
    mpz_class p = (mpz_class(1) << 64) + 13; // prime, 1 mod 4
    auto primes = K.factor_prime(p);
    REQUIRE(primes.size() == 2);
    CHECK(primes[0].f == 1);
    // pick an element divisible by one of the primes: (a + i) with a the
    // lifted root satisfies theta = -a mod P for the factor x + a
    mpz_class root = p - primes[0].local_factor[0];
    FieldElement e = K.element({root, 1});
    CHECK(K.valuation(e, primes[0]) + K.valuation(e, primes[1]) >= 1);
    mpz_class N = abs(K.norm(e));
    mpz_class rest;
    unsigned m = static_cast<unsigned>(mpz_remove(rest.get_mpz_t(), N.get_mpz_t(), p.get_mpz_t()));
    CHECK(K.valuation(e, primes[0]) + K.valuation(e, primes[1]) == m);
}

TEST_CASE("element parsing and printing") {
    NumberField K = NumberField::parse(kGaussian);
    CHECK(K.parse_element("(3,2)") == K.element({3, 2}));
    CHECK(K.parse_element("7") == K.from_int(7));
    CHECK(K.to_string(K.element({3, -2})) == "(3,-2)");
    NumberField Q = NumberField::parse("x");
    CHECK(Q.to_string(Q.from_int(-5)) == "-5");
    CHECK_THROWS_AS(K.parse_element("(1,2,3)"), std::invalid_argument);
}
