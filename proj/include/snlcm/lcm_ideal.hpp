#ifndef SNLCM_LCM_IDEAL_HPP
#define SNLCM_LCM_IDEAL_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

#include "snlcm/number_field.hpp"

namespace snlcm {

/// Running lcm of principal ideals: for each prime the largest exponent seen.
/// A commutative-monoid value under merge (pointwise max), so shards built in
/// any order combine to the same result.
class LcmAccumulator {
public:
    using Map = std::map<PrimeIdeal, unsigned, PrimeIdealLess>;

    void update(const PrimeIdeal& P, unsigned exponent) {
        if (exponent == 0) return;
        auto [it, inserted] = exps_.emplace(P, exponent);
        if (!inserted && it->second < exponent) it->second = exponent;
    }

    void merge(const LcmAccumulator& o) {
        for (const auto& [P, m] : o.exps_) update(P, m);
        count_ += o.count_;
    }

    void note_element() { ++count_; }

    uint64_t element_count() const { return count_; }
    const Map& exponents() const { return exps_; }

    /// log of the absolute norm of the lcm ideal: sum m f log p.
    double log_norm() const {
        long double acc = 0;
        for (const auto& [P, m] : exps_)
            acc += static_cast<long double>(m) * P.f *
                   std::log(static_cast<long double>(mpz_get_d(P.p.get_mpz_t())));
        return static_cast<double>(acc);
    }

    /// Exact norm of the lcm ideal, prod p^{f m}.
    mpz_class norm_value() const {
        mpz_class r = 1;
        for (const auto& [P, m] : exps_) {
            mpz_class t;
            mpz_pow_ui(t.get_mpz_t(), P.p.get_mpz_t(), static_cast<unsigned long>(P.f) * m);
            r *= t;
        }
        return r;
    }

    /// Histogram: exponent -> number of primes carrying it.
    std::map<unsigned, uint64_t> exponent_histogram() const {
        std::map<unsigned, uint64_t> h;
        for (const auto& [P, m] : exps_) ++h[m];
        return h;
    }

private:
    Map exps_;
    uint64_t count_ = 0;
};

/// Fold a nonzero element into the accumulator: factor |N(e)| and take the
/// valuation at every prime above each rational prime factor. The exponents
/// must recompose |N(e)| exactly; anything else is a logic error.
inline void accumulate(const NumberField& K, LcmAccumulator& acc, const FieldElement& e,
                       const FactorConfig& cfg = {}) {
    if (K.is_zero(e)) throw std::invalid_argument("accumulate: zero element");
    acc.note_element();
    mpz_class N = abs(K.norm(e));
    if (N == 1) return;
    for (const auto& entry : factor(N, cfg).entries) {
        if (K.degree() == 1) {
            acc.update(K.factor_prime(entry.prime)[0], entry.exponent);
            continue;
        }
        unsigned remaining = entry.exponent;
        for (const PrimeIdeal& P : K.factor_prime(entry.prime)) {
            const unsigned v = K.valuation_with_norm_multiplicity(e, P, entry.exponent);
            if (v) {
                acc.update(P, v);
                remaining -= v * P.f;
            }
        }
        if (remaining != 0)
            throw std::logic_error("valuations above " + entry.prime.get_str() +
                                   " do not account for the norm");
    }
}

} // namespace snlcm

#endif
