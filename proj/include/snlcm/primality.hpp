#ifndef SNLCM_PRIMALITY_HPP
#define SNLCM_PRIMALITY_HPP

#include <cstdint>
#include <gmpxx.h>

#include "snlcm/rng.hpp"

namespace snlcm {

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t r = m > 1 ? 1 % m : 0;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return r;
}

/// Deterministic strong-pseudoprime test. The witness set of the first
/// twelve primes is proven correct for all n < 3.3e24, which covers the
/// whole uint64 range.
inline bool is_prime_u64(uint64_t n) {
    constexpr uint64_t witnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    if (n < 2) return false;
    for (uint64_t p : witnesses) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (uint64_t a : witnesses) {
        uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

enum class Primality { Composite, ProvenPrime, ProbablePrime };

namespace detail {

inline bool fits_u64(const mpz_class& n) {
    return mpz_sizeinbase(n.get_mpz_t(), 2) <= 64 && sgn(n) >= 0;
}

inline uint64_t to_u64(const mpz_class& n) {
    // unsigned long is 64-bit here; mpz_get_ui truncates to that width
    return mpz_get_ui(n.get_mpz_t());
}

// One strong-pseudoprime round to base a; n odd, n > 3.
inline bool miller_rabin_round(const mpz_class& n, const mpz_class& a,
                               const mpz_class& d, unsigned long s) {
    mpz_class x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1) return true;
    for (unsigned long i = 1; i < s; ++i) {
        x = x * x % n;
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace detail

/// Below 2^64 the answer is proven. Above, 64 strong-pseudoprime rounds with
/// deterministically derived bases give error probability below 2^-128; such
/// results are reported as ProbablePrime so callers can flag them.
inline Primality classify_prime(const mpz_class& n) {
    if (n < 2) return Primality::Composite;
    if (detail::fits_u64(n))
        return is_prime_u64(detail::to_u64(n)) ? Primality::ProvenPrime
                                               : Primality::Composite;
    for (uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return Primality::Composite;
    }
    mpz_class d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    d >>= s;
    CounterRng rng(0x736e6c636d2d4d52ULL, mpz_fdiv_ui(n.get_mpz_t(), 0x7fffffff));
    mpz_class span = n - 3;
    for (int round = 0; round < 64; ++round) {
        mpz_class a = 2 + mpz_class(rng.next()) % span;
        if (!detail::miller_rabin_round(n, a, d, s)) return Primality::Composite;
    }
    return Primality::ProbablePrime;
}

inline bool is_prime(const mpz_class& n) {
    return classify_prime(n) != Primality::Composite;
}

} // namespace snlcm

#endif
