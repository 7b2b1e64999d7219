#ifndef SNLCM_FACTOR_HPP
#define SNLCM_FACTOR_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "snlcm/primality.hpp"
#include "snlcm/rng.hpp"

namespace snlcm {

struct FactorEntry {
    mpz_class prime;
    unsigned exponent;
};

/// Prime factorization with primes strictly increasing. proven() is false
/// only when some prime factor lies beyond the deterministic primality range.
struct Factorization {
    std::vector<FactorEntry> entries;

    mpz_class product() const {
        mpz_class r = 1;
        for (const auto& e : entries) {
            mpz_class pk;
            mpz_pow_ui(pk.get_mpz_t(), e.prime.get_mpz_t(), e.exponent);
            r *= pk;
        }
        return r;
    }

    bool proven() const {
        for (const auto& e : entries)
            if (!detail::fits_u64(e.prime)) return false;
        return true;
    }
};

struct FactorConfig {
    uint64_t trial_bound = 10000;          // trial division up to this bound
    uint64_t rho_iteration_budget = 10000000;
};

/// Raised when a composite cofactor resists splitting within the iteration
/// budget. Carries the offending cofactor so the failure is attributable.
class FactorBudgetError : public std::runtime_error {
public:
    explicit FactorBudgetError(const mpz_class& cofactor)
        : std::runtime_error("factorization budget exceeded on cofactor " +
                             cofactor.get_str()),
          cofactor_(cofactor) {}
    const mpz_class& cofactor() const { return cofactor_; }

private:
    mpz_class cofactor_;
};

namespace detail {

inline uint64_t gcd_u64(uint64_t a, uint64_t b) { return std::gcd(a, b); }

// Brent-cycle Pollard rho on a uint64 composite. Returns a nontrivial factor
// or throws once the shared iteration budget runs out.
inline uint64_t pollard_brent_u64(uint64_t n, CounterRng& rng, uint64_t& budget) {
    if ((n & 1) == 0) return 2;
    while (budget > 0) {
        uint64_t y = rng.below(n - 3) + 2;
        uint64_t c = rng.below(n - 3) + 1;
        uint64_t g = 1, r = 1, q = 1, x = y, ys = y;
        const uint64_t block = 128;
        while (g == 1 && budget > 0) {
            x = y;
            for (uint64_t i = 0; i < r; ++i) y = (mulmod_u64(y, y, n) + c) % n;
            for (uint64_t k = 0; k < r && g == 1 && budget > 0; k += block) {
                ys = y;
                const uint64_t lim = std::min(block, r - k);
                for (uint64_t i = 0; i < lim; ++i) {
                    y = (mulmod_u64(y, y, n) + c) % n;
                    q = mulmod_u64(q, x > y ? x - y : y - x, n);
                }
                g = gcd_u64(q, n);
                budget -= std::min(budget, lim);
            }
            r <<= 1;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = (mulmod_u64(ys, ys, n) + c) % n;
                g = gcd_u64(x > ys ? x - ys : ys - x, n);
            }
        }
        if (g != n && g > 1) return g;
    }
    throw FactorBudgetError(mpz_class(static_cast<unsigned long>(n)));
}

inline mpz_class pollard_brent_mpz(const mpz_class& n, CounterRng& rng, uint64_t& budget) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    mpz_class span = n - 3;
    while (budget > 0) {
        mpz_class y = 2 + mpz_class(rng.next()) % span;
        mpz_class c = 1 + mpz_class(rng.next()) % span;
        mpz_class g = 1, q = 1, x = y, ys = y;
        uint64_t r = 1;
        const uint64_t block = 128;
        while (g == 1 && budget > 0) {
            x = y;
            for (uint64_t i = 0; i < r; ++i) y = (y * y + c) % n;
            for (uint64_t k = 0; k < r && g == 1 && budget > 0; k += block) {
                ys = y;
                const uint64_t lim = std::min(block, r - k);
                for (uint64_t i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = q * (x > y ? x - y : y - x) % n;
                }
                g = gcd(q, n);
                budget -= std::min(budget, lim);
            }
            r <<= 1;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = (ys * ys + c) % n;
                g = gcd(mpz_class(x > ys ? x - ys : ys - x), n);
            }
        }
        if (g != n && g > 1) return g;
    }
    throw FactorBudgetError(n);
}

} // namespace detail

/// Factor n >= 1: trial division below a small bound, then Brent-cycle
/// Pollard rho with primality certification of every cofactor.
inline Factorization factor(const mpz_class& n, const FactorConfig& cfg = {}) {
    if (n < 1) throw std::invalid_argument("factor: argument must be >= 1");
    std::map<mpz_class, unsigned> found;
    mpz_class m = n;

    for (uint64_t p = 2; p <= cfg.trial_bound && mpz_class(p) * p <= m; p = (p == 2 ? 3 : p + 2)) {
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            ++found[mpz_class(static_cast<unsigned long>(p))];
            mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
        }
    }

    uint64_t budget = cfg.rho_iteration_budget;
    CounterRng rng(0x736e6c636d2d7268ULL, mpz_fdiv_ui(m.get_mpz_t(), 0x7fffffff));
    std::vector<mpz_class> stack;
    if (m > 1) stack.push_back(m);
    while (!stack.empty()) {
        mpz_class v = stack.back();
        stack.pop_back();
        if (v == 1) continue;
        if (is_prime(v)) {
            ++found[v];
            continue;
        }
        // perfect powers would stall rho's gcd trick, peel them first
        if (mpz_perfect_power_p(v.get_mpz_t())) {
            for (unsigned long k = 2; k <= mpz_sizeinbase(v.get_mpz_t(), 2); ++k) {
                mpz_class root;
                if (mpz_root(root.get_mpz_t(), v.get_mpz_t(), k) != 0) {
                    for (unsigned long i = 0; i < k; ++i) stack.push_back(root);
                    break;
                }
            }
            continue;
        }
        mpz_class d;
        if (detail::fits_u64(v)) {
            d = mpz_class(static_cast<unsigned long>(
                detail::pollard_brent_u64(detail::to_u64(v), rng, budget)));
        } else {
            d = detail::pollard_brent_mpz(v, rng, budget);
        }
        stack.push_back(d);
        stack.push_back(mpz_class(v / d));
    }

    Factorization out;
    for (const auto& [p, e] : found) out.entries.push_back({p, e});
    return out;
}

/// Moebius function.
inline int moebius(const mpz_class& n) {
    if (n < 1) throw std::invalid_argument("moebius: argument must be >= 1");
    if (n == 1) return 1;
    Factorization f = factor(n);
    for (const auto& e : f.entries)
        if (e.exponent >= 2) return 0;
    return f.entries.size() % 2 == 0 ? 1 : -1;
}

/// Euler totient (used by the classical linear-case constant).
inline mpz_class euler_phi(const mpz_class& n) {
    mpz_class r = n;
    for (const auto& e : factor(n).entries) r = r / e.prime * (e.prime - 1);
    return r;
}

/// q = p^f for a prime p; returns (p, f) or throws.
inline std::pair<mpz_class, unsigned> prime_power_decompose(const mpz_class& q) {
    if (q < 2) throw std::invalid_argument("prime power expected, got " + q.get_str());
    Factorization f = factor(q);
    if (f.entries.size() != 1)
        throw std::invalid_argument("not a prime power: " + q.get_str());
    return {f.entries[0].prime, f.entries[0].exponent};
}

} // namespace snlcm

#endif
