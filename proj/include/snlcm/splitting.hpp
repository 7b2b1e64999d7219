#ifndef SNLCM_SPLITTING_HPP
#define SNLCM_SPLITTING_HPP

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "snlcm/finite_field.hpp"
#include "snlcm/rational_poly.hpp"

namespace snlcm {

/// Degree multiset of a squarefree factorization, encoded as (r_1,...,r_n)
/// with sum k*r_k = n; equivalently a cycle type / partition of n.
struct SplittingType {
    std::vector<unsigned> r;

    unsigned n() const {
        unsigned s = 0;
        for (size_t k = 0; k < r.size(); ++k) s += static_cast<unsigned>(k + 1) * r[k];
        return s;
    }

    bool operator==(const SplittingType& o) const { return r == o.r; }
    bool operator<(const SplittingType& o) const { return r < o.r; }

    std::string to_string() const {
        std::string s;
        for (size_t i = 0; i < r.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(r[i]);
        }
        return s;
    }

    /// Parse "r_1,...,r_n", e.g. "1,1,0".
    static SplittingType parse(const std::string& text) {
        SplittingType t;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) throw std::invalid_argument("bad splitting type: " + text);
            t.r.push_back(static_cast<unsigned>(std::stoul(item)));
        }
        if (t.r.empty()) throw std::invalid_argument("empty splitting type");
        return t;
    }

    /// Validates sum k*r_k = n with exactly n slots.
    void check(unsigned expected_n) const {
        if (r.size() != expected_n || n() != expected_n)
            throw std::invalid_argument("splitting type " + to_string() +
                                        " is not a type for n=" + std::to_string(expected_n));
    }
};

/// All types for degree n (partitions of n), ordered by decreasing largest
/// part, ties broken reverse-lexicographically.
inline std::vector<SplittingType> all_types(unsigned n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    std::vector<SplittingType> out;
    std::vector<unsigned> parts;
    // descending partitions in reverse-lexicographic order
    auto rec = [&](auto&& self, unsigned remaining, unsigned maxpart) -> void {
        if (remaining == 0) {
            SplittingType t;
            t.r.assign(n, 0);
            for (unsigned p : parts) ++t.r[p - 1];
            out.push_back(std::move(t));
            return;
        }
        for (unsigned p = std::min(remaining, maxpart); p >= 1; --p) {
            parts.push_back(p);
            self(self, remaining - p, p);
            parts.pop_back();
        }
    };
    rec(rec, n, n);
    return out;
}

/// Exact count of monic irreducible degree-k polynomials over F_q as a
/// polynomial in q: (1/k) sum_{d | k} mu(d) q^{k/d}.
inline RationalPoly irreducible_count_poly(unsigned k) {
    if (k < 1) throw std::invalid_argument("degree must be >= 1");
    RationalPoly sum;
    for (unsigned d = 1; d <= k; ++d) {
        if (k % d != 0) continue;
        const int mu = moebius(mpz_class(d));
        if (mu == 0) continue;
        sum = sum + RationalPoly::monomial(mpq_class(mu), k / d);
    }
    return sum / mpq_class(k);
}

/// Census polynomial: the exact count, as a polynomial in q, of monic
/// degree-n polynomials over F_q whose squarefree factorization has degree
/// multiset r. Product over k of C(A_k(q), r_k).
inline RationalPoly census(unsigned n, const SplittingType& r) {
    r.check(n);
    RationalPoly acc{mpq_class(1)};
    for (size_t k = 1; k <= r.r.size(); ++k) {
        if (r.r[k - 1] == 0) continue;
        acc = acc * poly_binomial(irreducible_count_poly(static_cast<unsigned>(k)), r.r[k - 1]);
    }
    return acc;
}

/// Leading census coefficient: the density of the corresponding conjugacy
/// class of S_n, equal to prod_k 1/(r_k! k^{r_k}).
inline mpq_class census_density(unsigned n, const SplittingType& r) {
    RationalPoly c = census(n, r);
    if (c.degree() != static_cast<int>(n)) throw std::logic_error("census degree mismatch");
    return c.leading();
}

/// Coefficient of q^{n-1} in the census polynomial (the second-order term of
/// the splitting probability).
inline mpq_class census_subleading(unsigned n, const SplittingType& r) {
    if (n < 2) throw std::invalid_argument("subleading coefficient needs n >= 2");
    return census(n, r).coeff(n - 1);
}

/// Closed-form candidate -delta(r) C(r_2) (r_1+1)(r_1+2) / (2 r_1!) where
/// C(r_2) is the coefficient of q^{2 r_2 - 1} in C(A_2(q), r_2). Reported for
/// comparison only; it does not match the exact expansion in general (already
/// at n=2), so the census coefficient is the operative value.
inline mpq_class census_subleading_closed_form(unsigned n, const SplittingType& r) {
    if (n < 2) throw std::invalid_argument("subleading coefficient needs n >= 2");
    r.check(n);
    const unsigned r1 = r.r[0];
    const unsigned r2 = n >= 2 ? r.r[1] : 0;
    RationalPoly b2 = poly_binomial(irreducible_count_poly(2), r2);
    mpq_class c_r2 = r2 >= 1 ? b2.coeff(2 * r2 - 1) : mpq_class(0);
    mpz_class r1fact = 1;
    for (unsigned i = 2; i <= r1; ++i) r1fact *= i;
    mpq_class factor = mpq_class(mpz_class((r1 + 1) * (r1 + 2))) / mpq_class(2 * r1fact);
    return -census_density(n, r) * c_r2 * factor;
}

class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Splitting type of a monic squarefree polynomial, or nullopt when the input
/// is not squarefree.
template <class F>
std::optional<SplittingType> splitting_type(const F& K, const Poly<F>& f, unsigned n) {
    if (poly_degree(f) != static_cast<int>(n) || !poly_is_monic(K, f))
        throw std::invalid_argument("splitting_type expects a monic polynomial of degree n");
    auto counts = poly_splitting_counts(K, f);
    if (!counts) return std::nullopt;
    return SplittingType{std::move(*counts)};
}

/// Enumerate every monic degree-n polynomial over F_q and tally splitting
/// types; nonsquarefree inputs are dropped. Oracle for the census polynomial.
inline std::map<SplittingType, mpz_class> brute_force_census(
    const FiniteField& K, unsigned n, uint64_t enumeration_budget = 10000000) {
    mpz_class total;
    mpz_pow_ui(total.get_mpz_t(), K.order().get_mpz_t(), n);
    if (total > static_cast<unsigned long>(enumeration_budget))
        throw BudgetExceeded("q^n = " + total.get_str() + " exceeds enumeration budget");
    const uint64_t count = detail::to_u64(total);
    std::map<SplittingType, mpz_class> tally;
    for (uint64_t idx = 0; idx < count; ++idx) {
        FqPoly f = poly_from_index(K, n, idx);
        auto t = splitting_type(K, f, n);
        if (t) ++tally[*t];
    }
    return tally;
}

inline mpz_class brute_force_count(unsigned n, const SplittingType& r, const FiniteField& K,
                                   uint64_t enumeration_budget = 10000000) {
    r.check(n);
    auto tally = brute_force_census(K, n, enumeration_budget);
    auto it = tally.find(r);
    return it == tally.end() ? mpz_class(0) : it->second;
}

} // namespace snlcm

#endif
