#ifndef SNLCM_ENSEMBLE_HPP
#define SNLCM_ENSEMBLE_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "snlcm/number_field.hpp"
#include "snlcm/parallel.hpp"
#include "snlcm/rng.hpp"
#include "snlcm/splitting.hpp"

namespace snlcm {

/// Monic degree-n polynomial over O_K with every coefficient coordinate in
/// [-N, N]; the random model draws those n*d coordinates independently and
/// uniformly.
struct PolynomialSample {
    unsigned n = 0;
    mpz_class height_bound;
    std::vector<FieldElement> coeffs; // alpha_0 ... alpha_{n-1}
};

inline PolynomialSample sample_polynomial(const NumberField& K, unsigned n, const mpz_class& N,
                                          CounterRng& rng) {
    if (n < 1) throw std::invalid_argument("degree must be >= 1");
    if (N < 1) throw std::invalid_argument("height bound must be >= 1");
    if (!detail::fits_u64(2 * N + 1))
        throw std::invalid_argument("height bound too large for the sampler");
    const uint64_t span = detail::to_u64(2 * N + 1);
    const mpz_class offset = N;
    PolynomialSample f;
    f.n = n;
    f.height_bound = N;
    for (unsigned k = 0; k < n; ++k) {
        std::vector<mpz_class> c;
        for (unsigned i = 0; i < K.degree(); ++i)
            c.push_back(mpz_class(rng.below(span)) - offset);
        f.coeffs.push_back(K.element(std::move(c)));
    }
    return f;
}

inline mpz_class sample_height(const NumberField& K, const PolynomialSample& f) {
    mpz_class h = 0;
    for (const auto& a : f.coeffs)
        for (const auto& c : a.coords) h = std::max(h, mpz_class(abs(c)));
    return h;
}

inline FieldElement sample_eval(const NumberField& K, const PolynomialSample& f,
                                const FieldElement& lambda) {
    FieldElement acc = K.one(); // Horner from the monic leading coefficient
    for (unsigned k = f.n; k-- > 0;) acc = K.add(K.mul(acc, lambda), f.coeffs[k]);
    return acc;
}

/// Canonical text form: degree-descending, coordinate tuples for d >= 2,
/// plain integers over Q. Example: "x^3+(-1,2)x+(0,1)".
inline std::string sample_to_string(const NumberField& K, const PolynomialSample& f) {
    std::string s = "x";
    if (f.n > 1) s += "^" + std::to_string(f.n);
    for (unsigned k = f.n; k-- > 0;) {
        const FieldElement& a = f.coeffs[k];
        if (K.is_zero(a)) continue;
        if (K.degree() == 1) {
            const mpz_class& v = a.coords[0];
            s += v < 0 ? "-" : "+";
            std::string mag = mpz_class(abs(v)).get_str();
            if (mag != "1" || k == 0) s += mag;
        } else {
            s += "+" + K.to_string(a);
        }
        if (k > 0) {
            s += "x";
            if (k > 1) s += "^" + std::to_string(k);
        }
    }
    return s;
}

/// Parse the canonical text form; the polynomial must be monic of the stated
/// leading degree.
inline PolynomialSample parse_sample(const NumberField& K, const std::string& text) {
    std::string t = text;
    t.erase(std::remove_if(t.begin(), t.end(), ::isspace), t.end());
    if (t.empty()) throw std::invalid_argument("empty polynomial");
    struct Term {
        std::string coeff;
        size_t deg;
    };
    std::vector<Term> terms;
    size_t i = 0;
    while (i < t.size()) {
        std::string coeff;
        int sign = 1;
        if (t[i] == '+' || t[i] == '-') {
            sign = t[i] == '-' ? -1 : 1;
            ++i;
        } else if (!terms.empty()) {
            throw std::invalid_argument("expected '+' or '-': " + text);
        }
        if (i < t.size() && t[i] == '(') {
            const size_t close = t.find(')', i);
            if (close == std::string::npos) throw std::invalid_argument("unbalanced '('");
            coeff = t.substr(i, close - i + 1);
            i = close + 1;
        } else {
            while (i < t.size() && (std::isdigit(static_cast<unsigned char>(t[i])))) coeff += t[i++];
        }
        size_t deg = 0;
        if (i < t.size() && t[i] == 'x') {
            ++i;
            deg = 1;
            if (i < t.size() && t[i] == '^') {
                ++i;
                std::string d;
                while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) d += t[i++];
                if (d.empty()) throw std::invalid_argument("missing exponent: " + text);
                deg = std::stoul(d);
            }
        } else if (coeff.empty()) {
            throw std::invalid_argument("expected coefficient or variable: " + text);
        }
        if (coeff.empty()) coeff = "1";
        if (sign < 0) {
            if (coeff.front() == '(')
                throw std::invalid_argument("write negatives inside the tuple: " + text);
            coeff = "-" + coeff;
        }
        terms.push_back({coeff, deg});
    }
    size_t n = 0;
    for (const auto& term : terms) n = std::max(n, term.deg);
    if (n < 1) throw std::invalid_argument("polynomial must have degree >= 1");
    PolynomialSample f;
    f.n = static_cast<unsigned>(n);
    f.coeffs.assign(n, K.zero());
    bool leading_seen = false;
    for (const auto& term : terms) {
        FieldElement c = K.parse_element(term.coeff);
        if (term.deg == n) {
            if (leading_seen || c != K.one())
                throw std::invalid_argument("polynomial must be monic: " + text);
            leading_seen = true;
        } else {
            f.coeffs[term.deg] = K.add(f.coeffs[term.deg], c);
        }
    }
    f.height_bound = sample_height(K, f);
    return f;
}

/// Reduction of the sample mod P: a monic degree-n polynomial over the
/// residue field.
inline FqPoly reduce_sample(const NumberField& K, const PolynomialSample& f, const PrimeIdeal& P) {
    const FiniteField& F = K.residue_field(P);
    FqPoly out;
    for (const auto& a : f.coeffs) out.c.push_back(K.reduce(a, P));
    out.c.push_back(F.one());
    return out;
}

/// Cycle type of Frobenius at P, read off the factorization degrees of
/// f mod P. nullopt means ramified: either P ramifies in K or f mod P is not
/// squarefree.
inline std::optional<SplittingType> frobenius_type(const NumberField& K,
                                                   const PolynomialSample& f,
                                                   const PrimeIdeal& P) {
    if (P.ramified()) return std::nullopt;
    return splitting_type(K.residue_field(P), reduce_sample(K, f, P), f.n);
}

/// pi_{f,r}(x): primes of norm <= x, unramified for f, of splitting type r.
inline uint64_t pi_fr(const NumberField& K, const PolynomialSample& f, const SplittingType& r,
                      uint64_t x) {
    r.check(f.n);
    uint64_t count = 0;
    for (const auto& P : K.primes_up_to(x)) {
        auto t = frobenius_type(K, f, P);
        if (t && *t == r) ++count;
    }
    return count;
}

/// Number of distinct roots of f in the residue field at P.
inline unsigned s_wp(const NumberField& K, const PolynomialSample& f, const PrimeIdeal& P) {
    return poly_distinct_root_count(K.residue_field(P), reduce_sample(K, f, P));
}

/// Discriminant of the sample as an element of O_K (resultant of f and f'
/// over K, with the degree sign).
struct NumberFieldRationalOps {
    const NumberField* K;
    using Elem = std::vector<mpq_class>;

    Elem zero() const { return Elem(K->degree(), 0); }
    Elem one() const {
        Elem e(K->degree(), 0);
        e[0] = 1;
        return e;
    }
    bool is_zero(const Elem& a) const {
        for (const auto& c : a)
            if (c != 0) return false;
        return true;
    }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    Elem add(const Elem& a, const Elem& b) const {
        Elem r = a;
        for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
        return r;
    }
    Elem sub(const Elem& a, const Elem& b) const {
        Elem r = a;
        for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
        return r;
    }
    Elem neg(const Elem& a) const {
        Elem r = a;
        for (auto& c : r) c = -c;
        return r;
    }
    Elem mul(const Elem& a, const Elem& b) const {
        const unsigned d = K->degree();
        std::vector<mpq_class> conv(2 * d - 1, 0);
        for (unsigned i = 0; i < d; ++i) {
            if (a[i] == 0) continue;
            for (unsigned j = 0; j < d; ++j) conv[i + j] += a[i] * b[j];
        }
        Elem out(conv.begin(), conv.begin() + d);
        const auto& table = K->theta_power_table();
        for (unsigned k = d; k < 2 * d - 1; ++k) {
            if (conv[k] == 0) continue;
            for (unsigned i = 0; i < d; ++i) out[i] += conv[k] * table[k - d][i];
        }
        return out;
    }
    Elem inv(const Elem& a) const {
        const unsigned d = K->degree();
        // columns of M are the coordinates of a * theta^j; solve M y = e_0
        std::vector<std::vector<mpq_class>> M(d, std::vector<mpq_class>(d + 1, 0));
        Elem cur = a;
        for (unsigned j = 0; j < d; ++j) {
            for (unsigned i = 0; i < d; ++i) M[i][j] = cur[i];
            if (j + 1 < d) {
                Elem theta(K->degree(), 0);
                if (d >= 2) theta[1] = 1;
                cur = mul(cur, theta);
            }
        }
        M[0][d] = 1;
        for (unsigned col = 0; col < d; ++col) {
            unsigned piv = col;
            while (piv < d && M[piv][col] == 0) ++piv;
            if (piv == d) throw std::domain_error("inverse of zero");
            std::swap(M[piv], M[col]);
            const mpq_class pivinv = 1 / M[col][col];
            for (unsigned j = col; j <= d; ++j) M[col][j] *= pivinv;
            for (unsigned i = 0; i < d; ++i) {
                if (i == col || M[i][col] == 0) continue;
                const mpq_class fac = M[i][col];
                for (unsigned j = col; j <= d; ++j) M[i][j] -= fac * M[col][j];
            }
        }
        Elem y(d);
        for (unsigned i = 0; i < d; ++i) y[i] = M[i][d];
        return y;
    }
};

inline FieldElement sample_disc(const NumberField& K, const PolynomialSample& f) {
    const unsigned d = K.degree(), n = f.n;
    NumberFieldRationalOps F{&K};
    std::vector<NumberFieldRationalOps::Elem> a, b;
    for (unsigned k = 0; k < n; ++k) {
        NumberFieldRationalOps::Elem e(d);
        for (unsigned i = 0; i < d; ++i) e[i] = f.coeffs[k].coords[i];
        a.push_back(e);
    }
    a.push_back(F.one());
    for (unsigned k = 1; k <= n; ++k) {
        NumberFieldRationalOps::Elem e(d);
        for (unsigned i = 0; i < d; ++i) e[i] = a[k][i] * static_cast<unsigned long>(k);
        b.push_back(e);
    }
    auto res = resultant_generic(F, a, b);
    if ((static_cast<unsigned long>(n) * (n - 1) / 2) % 2 == 1) res = F.neg(res);
    std::vector<mpz_class> coords;
    for (const auto& c : res) {
        if (c.get_den() != 1) throw std::logic_error("discriminant not integral");
        coords.push_back(c.get_num());
    }
    return K.element(std::move(coords));
}

// --- S_n certification ------------------------------------------------------

enum class CertStatus { CertifiedSn, Unknown };

struct SnWitness {
    PrimeIdeal prime;
    SplittingType type;
};

/// One-sided Galois-group certificate from factorization patterns at
/// unramified primes: an n-cycle forces transitivity (and irreducibility),
/// an (n-1)-cycle then forces 2-transitivity hence primitivity, and a
/// transposition in a primitive group generates all of S_n. CertifiedSn is
/// always correct; Unknown is inconclusive.
struct SnCertificate {
    CertStatus status = CertStatus::Unknown;
    std::optional<SnWitness> n_cycle;
    std::optional<SnWitness> n1_cycle;     // degrees {1, n-1}
    std::optional<SnWitness> transposition; // degrees {2, 1^{n-2}}
    uint64_t primes_examined = 0;

    bool certified() const { return status == CertStatus::CertifiedSn; }
};

namespace detail {

inline bool is_n_cycle(const SplittingType& t) {
    return t.r.back() == 1;
}
inline bool is_n1_cycle(const SplittingType& t) {
    const size_t n = t.r.size();
    return n >= 3 && t.r[0] == 1 && t.r[n - 2] == 1;
}
inline bool is_transposition_pattern(const SplittingType& t) {
    const size_t n = t.r.size();
    return n >= 2 && t.r[1] == 1 && t.r[0] == n - 2;
}

} // namespace detail

inline SnCertificate certify_sn(const NumberField& K, const PolynomialSample& f,
                                uint64_t prime_budget) {
    SnCertificate cert;
    const unsigned n = f.n;
    if (n < 2) throw std::invalid_argument("certification needs degree >= 2");
    const auto done = [&] {
        if (!cert.n_cycle) return false;
        if (n == 2) return true;
        if (!cert.transposition) return false;
        if (n == 3) return true;
        return cert.n1_cycle.has_value();
    };
    uint64_t bound = 64;
    size_t scanned = 0;
    while (cert.primes_examined < prime_budget && !done()) {
        auto primes = K.primes_up_to(bound);
        for (; scanned < primes.size() && cert.primes_examined < prime_budget && !done();
             ++scanned) {
            const PrimeIdeal& P = primes[scanned];
            ++cert.primes_examined;
            if (P.ramified()) continue;
            auto t = frobenius_type(K, f, P);
            if (!t) continue;
            if (!cert.n_cycle && detail::is_n_cycle(*t)) cert.n_cycle = SnWitness{P, *t};
            if (!cert.n1_cycle && detail::is_n1_cycle(*t)) cert.n1_cycle = SnWitness{P, *t};
            if (!cert.transposition && detail::is_transposition_pattern(*t))
                cert.transposition = SnWitness{P, *t};
        }
        if (bound >= (uint64_t{1} << 40)) break; // runaway guard
        bound *= 2;
    }
    cert.status = done() ? CertStatus::CertifiedSn : CertStatus::Unknown;
    return cert;
}

struct FractionEstimate {
    uint64_t samples = 0;
    uint64_t unknown = 0;
    mpq_class fraction;
    double standard_error = 0;
};

/// Fraction of samples whose certificate stays Unknown at the given budget,
/// with the binomial standard error of the estimate.
inline FractionEstimate non_sn_fraction(const NumberField& K, unsigned n, const mpz_class& N,
                                        uint64_t samples, uint64_t budget, uint64_t seed,
                                        unsigned workers = 1) {
    std::vector<uint8_t> unknown(samples, 0);
    parallel_for(samples, workers, [&](uint64_t i) {
        CounterRng rng(seed, i);
        PolynomialSample f = sample_polynomial(K, n, N, rng);
        unknown[i] = certify_sn(K, f, budget).certified() ? 0 : 1;
    });
    FractionEstimate est;
    est.samples = samples;
    for (uint8_t u : unknown) est.unknown += u;
    if (samples > 0) {
        est.fraction = mpq_class(mpz_class(est.unknown), mpz_class(samples));
        est.fraction.canonicalize();
        const double p = mpq_get_d(est.fraction.get_mpq_t());
        est.standard_error = std::sqrt(p * (1 - p) / static_cast<double>(samples));
    }
    return est;
}

} // namespace snlcm

#endif
