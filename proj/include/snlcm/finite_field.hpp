#ifndef SNLCM_FINITE_FIELD_HPP
#define SNLCM_FINITE_FIELD_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "snlcm/factor.hpp"
#include "snlcm/primality.hpp"
#include "snlcm/rng.hpp"

namespace snlcm {

template <class F>
struct Poly;

template <class F>
bool poly_is_irreducible(const F& K, const Poly<F>& f);

/// F_{p^f} with a fixed monic modulus over F_p. Elements are coefficient
/// vectors of length f (residue polynomials in the generator t). For f = 1
/// the modulus is t by convention and elements are plain residues mod p.
class FiniteField {
public:
    using Elem = std::vector<uint64_t>;

    FiniteField(uint64_t p, std::vector<uint64_t> modulus, bool check_irreducible = true)
        : p_(p), mod_(std::move(modulus)) {
        if (p < 2 || p >= (uint64_t{1} << 62) || !is_prime_u64(p))
            throw std::invalid_argument("characteristic must be a prime below 2^62");
        if (mod_.size() < 2 || mod_.back() != 1)
            throw std::invalid_argument("modulus must be monic of degree >= 1");
        for (uint64_t c : mod_)
            if (c >= p_) throw std::invalid_argument("modulus coefficients must be reduced mod p");
        f_ = static_cast<unsigned>(mod_.size() - 1);
        mpz_ui_pow_ui(order_.get_mpz_t(), p_, f_);
        if (f_ >= 2 && check_irreducible && !modulus_irreducible())
            throw std::invalid_argument("modulus is reducible over F_p");
    }

    static FiniteField prime_field(uint64_t p) { return FiniteField(p, {0, 1}); }

    /// F_{p^f} relative to the first irreducible modulus in the fixed
    /// enumeration order (non-leading coefficients as base-p digits).
    static FiniteField with_canonical_modulus(uint64_t p, unsigned f);

    uint64_t p() const { return p_; }
    unsigned extension_degree() const { return f_; }
    mpz_class characteristic() const { return mpz_class(static_cast<unsigned long>(p_)); }
    const mpz_class& order() const { return order_; }
    const std::vector<uint64_t>& modulus() const { return mod_; }

    Elem zero() const { return Elem(f_, 0); }
    Elem one() const { return from_uint(1); }
    Elem from_uint(uint64_t v) const {
        Elem e(f_, 0);
        e[0] = v % p_;
        return e;
    }
    Elem from_mpz(const mpz_class& v) const {
        mpz_class r = v % static_cast<unsigned long>(p_);
        if (r < 0) r += static_cast<unsigned long>(p_);
        return from_uint(mpz_get_ui(r.get_mpz_t()));
    }

    bool is_zero(const Elem& a) const {
        for (uint64_t c : a)
            if (c) return false;
        return true;
    }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }

    Elem add(const Elem& a, const Elem& b) const {
        Elem r(f_);
        for (unsigned i = 0; i < f_; ++i) r[i] = addmod(a[i], b[i]);
        return r;
    }
    Elem sub(const Elem& a, const Elem& b) const {
        Elem r(f_);
        for (unsigned i = 0; i < f_; ++i) r[i] = submod(a[i], b[i]);
        return r;
    }
    Elem neg(const Elem& a) const {
        Elem r(f_);
        for (unsigned i = 0; i < f_; ++i) r[i] = a[i] ? p_ - a[i] : 0;
        return r;
    }
    Elem mul(const Elem& a, const Elem& b) const {
        if (f_ == 1) return {mulmod_u64(a[0], b[0], p_)};
        std::vector<uint64_t> t(2 * f_ - 1, 0);
        for (unsigned i = 0; i < f_; ++i) {
            if (!a[i]) continue;
            for (unsigned j = 0; j < f_; ++j)
                t[i + j] = addmod(t[i + j], mulmod_u64(a[i], b[j], p_));
        }
        for (unsigned i = 2 * f_ - 2; i >= f_; --i) {
            const uint64_t c = t[i];
            if (c) {
                for (unsigned j = 0; j < f_; ++j)
                    t[i - f_ + j] = submod(t[i - f_ + j], mulmod_u64(c, mod_[j], p_));
            }
        }
        t.resize(f_);
        return t;
    }
    Elem pow(Elem base, mpz_class e) const {
        Elem r = one();
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) r = mul(r, base);
            e >>= 1;
            if (e > 0) base = mul(base, base);
        }
        return r;
    }
    Elem inv(const Elem& a) const {
        if (is_zero(a)) throw std::domain_error("inverse of zero");
        if (f_ == 1) return {powmod_u64(a[0], p_ - 2, p_)};
        return pow(a, order_ - 2);
    }
    /// p-th root (inverse Frobenius): a^(q/p).
    Elem frobenius_inv(const Elem& a) const {
        if (f_ == 1) return a;
        mpz_class e = order_ / static_cast<unsigned long>(p_);
        return pow(a, e);
    }

    Elem random(CounterRng& rng) const {
        Elem e(f_);
        for (unsigned i = 0; i < f_; ++i) e[i] = rng.below(p_);
        return e;
    }

    uint64_t encode_u64(const Elem& a) const {
        uint64_t v = 0;
        for (unsigned i = f_; i-- > 0;) v = v * p_ + a[i];
        return v;
    }
    Elem decode_u64(uint64_t v) const {
        Elem e(f_);
        for (unsigned i = 0; i < f_; ++i) {
            e[i] = v % p_;
            v /= p_;
        }
        return e;
    }
    mpz_class encode(const Elem& a) const {
        mpz_class v = 0;
        for (unsigned i = f_; i-- > 0;)
            v = v * static_cast<unsigned long>(p_) + static_cast<unsigned long>(a[i]);
        return v;
    }

    std::string to_string(const Elem& a) const {
        if (f_ == 1) return std::to_string(a[0]);
        std::string s = "[";
        for (unsigned i = 0; i < f_; ++i) {
            if (i) s += ",";
            s += std::to_string(a[i]);
        }
        return s + "]";
    }

private:
    uint64_t addmod(uint64_t a, uint64_t b) const {
        const uint64_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    uint64_t submod(uint64_t a, uint64_t b) const { return a >= b ? a - b : a + p_ - b; }

    bool modulus_irreducible() const;

    uint64_t p_;
    unsigned f_;
    std::vector<uint64_t> mod_;
    mpz_class order_;
};

/// Prime field with arbitrary-precision characteristic; only what the prime
/// decomposition of a defining polynomial at a huge prime needs.
class BigPrimeField {
public:
    using Elem = mpz_class;

    explicit BigPrimeField(mpz_class p) : p_(std::move(p)) {
        if (p_ < 2 || !is_prime(p_)) throw std::invalid_argument("characteristic must be prime");
    }

    unsigned extension_degree() const { return 1; }
    const mpz_class& characteristic() const { return p_; }
    const mpz_class& order() const { return p_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem from_uint(uint64_t v) const { return mpz_class(static_cast<unsigned long>(v)) % p_; }
    Elem from_mpz(const mpz_class& v) const {
        Elem r = v % p_;
        if (r < 0) r += p_;
        return r;
    }
    bool is_zero(const Elem& a) const { return a == 0; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    Elem add(const Elem& a, const Elem& b) const {
        Elem r = a + b;
        if (r >= p_) r -= p_;
        return r;
    }
    Elem sub(const Elem& a, const Elem& b) const {
        Elem r = a - b;
        if (r < 0) r += p_;
        return r;
    }
    Elem neg(const Elem& a) const { return a == 0 ? a : Elem(p_ - a); }
    Elem mul(const Elem& a, const Elem& b) const { return a * b % p_; }
    Elem inv(const Elem& a) const {
        Elem r;
        if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), p_.get_mpz_t()) == 0)
            throw std::domain_error("inverse of zero");
        return r;
    }
    Elem pow(const Elem& base, const mpz_class& e) const {
        Elem r;
        mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), p_.get_mpz_t());
        return r;
    }
    Elem frobenius_inv(const Elem& a) const { return a; }
    Elem random(CounterRng& rng) const {
        mpz_class v = mpz_class(rng.next());
        v = (v << 64) + mpz_class(rng.next());
        return v % p_;
    }
    mpz_class encode(const Elem& a) const { return a; }

private:
    mpz_class p_;
};

// ---------------------------------------------------------------------------
// Dense polynomials over a finite field, generic in the field type.
// ---------------------------------------------------------------------------

template <class F>
struct Poly {
    std::vector<typename F::Elem> c; // c[i] = coefficient of x^i, normalized
};

template <class F>
void poly_normalize(const F& K, Poly<F>& f) {
    while (!f.c.empty() && K.is_zero(f.c.back())) f.c.pop_back();
}

template <class F>
int poly_degree(const Poly<F>& f) {
    return static_cast<int>(f.c.size()) - 1;
}

template <class F>
bool poly_is_zero(const Poly<F>& f) {
    return f.c.empty();
}

template <class F>
Poly<F> poly_zero(const F&) {
    return {};
}

template <class F>
Poly<F> poly_one(const F& K) {
    return Poly<F>{{K.one()}};
}

template <class F>
Poly<F> poly_x(const F& K) {
    return Poly<F>{{K.zero(), K.one()}};
}

template <class F>
bool poly_eq(const F& K, const Poly<F>& a, const Poly<F>& b) {
    if (a.c.size() != b.c.size()) return false;
    for (size_t i = 0; i < a.c.size(); ++i)
        if (!K.eq(a.c[i], b.c[i])) return false;
    return true;
}

template <class F>
bool poly_is_monic(const F& K, const Poly<F>& f) {
    return !f.c.empty() && K.eq(f.c.back(), K.one());
}

template <class F>
Poly<F> poly_add(const F& K, const Poly<F>& a, const Poly<F>& b) {
    Poly<F> r;
    r.c.resize(std::max(a.c.size(), b.c.size()), K.zero());
    for (size_t i = 0; i < r.c.size(); ++i) {
        if (i < a.c.size() && i < b.c.size())
            r.c[i] = K.add(a.c[i], b.c[i]);
        else if (i < a.c.size())
            r.c[i] = a.c[i];
        else
            r.c[i] = b.c[i];
    }
    poly_normalize(K, r);
    return r;
}

template <class F>
Poly<F> poly_sub(const F& K, const Poly<F>& a, const Poly<F>& b) {
    Poly<F> r;
    r.c.resize(std::max(a.c.size(), b.c.size()), K.zero());
    for (size_t i = 0; i < r.c.size(); ++i) {
        typename F::Elem x = i < a.c.size() ? a.c[i] : K.zero();
        typename F::Elem y = i < b.c.size() ? b.c[i] : K.zero();
        r.c[i] = K.sub(x, y);
    }
    poly_normalize(K, r);
    return r;
}

template <class F>
Poly<F> poly_mul(const F& K, const Poly<F>& a, const Poly<F>& b) {
    if (poly_is_zero(a) || poly_is_zero(b)) return {};
    Poly<F> r;
    r.c.assign(a.c.size() + b.c.size() - 1, K.zero());
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (K.is_zero(a.c[i])) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = K.add(r.c[i + j], K.mul(a.c[i], b.c[j]));
    }
    poly_normalize(K, r);
    return r;
}

template <class F>
Poly<F> poly_scale(const F& K, const Poly<F>& a, const typename F::Elem& s) {
    if (K.is_zero(s)) return {};
    Poly<F> r = a;
    for (auto& v : r.c) v = K.mul(v, s);
    return r;
}

template <class F>
Poly<F> poly_make_monic(const F& K, const Poly<F>& a) {
    if (poly_is_zero(a) || poly_is_monic(K, a)) return a;
    return poly_scale(K, a, K.inv(a.c.back()));
}

template <class F>
void poly_divrem(const F& K, const Poly<F>& a, const Poly<F>& b, Poly<F>& q, Poly<F>& r) {
    if (poly_is_zero(b)) throw std::domain_error("polynomial division by zero");
    q = {};
    r = a;
    if (a.c.size() < b.c.size()) return;
    q.c.assign(a.c.size() - b.c.size() + 1, K.zero());
    const typename F::Elem lb_inv = K.inv(b.c.back());
    while (r.c.size() >= b.c.size()) {
        const size_t shift = r.c.size() - b.c.size();
        const typename F::Elem t = K.mul(r.c.back(), lb_inv);
        q.c[shift] = t;
        for (size_t j = 0; j < b.c.size(); ++j)
            r.c[shift + j] = K.sub(r.c[shift + j], K.mul(t, b.c[j]));
        poly_normalize(K, r);
    }
    poly_normalize(K, q);
}

template <class F>
Poly<F> poly_mod(const F& K, const Poly<F>& a, const Poly<F>& b) {
    Poly<F> q, r;
    poly_divrem(K, a, b, q, r);
    return r;
}

template <class F>
Poly<F> poly_div_exact(const F& K, const Poly<F>& a, const Poly<F>& b) {
    Poly<F> q, r;
    poly_divrem(K, a, b, q, r);
    if (!poly_is_zero(r)) throw std::logic_error("inexact polynomial division");
    return q;
}

/// Monic gcd.
template <class F>
Poly<F> poly_gcd(const F& K, Poly<F> a, Poly<F> b) {
    while (!poly_is_zero(b)) {
        Poly<F> r = poly_mod(K, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return poly_make_monic(K, a);
}

template <class F>
Poly<F> poly_derivative(const F& K, const Poly<F>& f) {
    Poly<F> d;
    for (size_t i = 1; i < f.c.size(); ++i) {
        typename F::Elem k = K.from_mpz(mpz_class(static_cast<unsigned long>(i)));
        d.c.push_back(K.mul(f.c[i], k));
    }
    poly_normalize(K, d);
    return d;
}

template <class F>
Poly<F> poly_powmod(const F& K, Poly<F> base, mpz_class e, const Poly<F>& m) {
    Poly<F> r = poly_one(K);
    base = poly_mod(K, base, m);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = poly_mod(K, poly_mul(K, r, base), m);
        e >>= 1;
        if (e > 0) base = poly_mod(K, poly_mul(K, base, base), m);
    }
    return r;
}

template <class F>
typename F::Elem poly_eval(const F& K, const Poly<F>& f, const typename F::Elem& x) {
    typename F::Elem acc = K.zero();
    for (size_t i = f.c.size(); i-- > 0;) acc = K.add(K.mul(acc, x), f.c[i]);
    return acc;
}

/// Canonical total order: degree, then the base-q value of the coefficient
/// word (constant term least significant).
template <class F>
mpz_class poly_encode(const F& K, const Poly<F>& f) {
    mpz_class v = 0;
    for (size_t i = f.c.size(); i-- > 0;) v = v * K.order() + K.encode(f.c[i]);
    return v;
}

template <class F>
bool poly_canonical_less(const F& K, const Poly<F>& a, const Poly<F>& b) {
    if (a.c.size() != b.c.size()) return a.c.size() < b.c.size();
    return poly_encode(K, a) < poly_encode(K, b);
}

/// Monic degree-n polynomial from the enumeration index of its non-leading
/// coefficients (base-q digits, constant term first).
template <class F>
Poly<F> poly_from_index(const F& K, unsigned n, uint64_t idx) {
    Poly<F> f;
    f.c.reserve(n + 1);
    const uint64_t q = mpz_get_ui(K.order().get_mpz_t());
    for (unsigned i = 0; i < n; ++i) {
        f.c.push_back(K.decode_u64(idx % q));
        idx /= q;
    }
    f.c.push_back(K.one());
    return f;
}

// --- squarefree / distinct-degree / equal-degree factorization -------------

namespace detail {

template <class F>
Poly<F> poly_pth_root(const F& K, const Poly<F>& f) {
    const mpz_class& pc = K.characteristic();
    if (!detail::fits_u64(pc) || pc > 1000000)
        throw std::logic_error("p-th root extraction at implausibly large characteristic");
    const unsigned long p = mpz_get_ui(pc.get_mpz_t());
    Poly<F> g;
    for (size_t i = 0; i < f.c.size(); i += p) g.c.push_back(K.frobenius_inv(f.c[i]));
    poly_normalize(K, g);
    return g;
}

template <class F>
void squarefree_decompose_into(const F& K, const Poly<F>& f, unsigned outer,
                               std::vector<std::pair<Poly<F>, unsigned>>& out) {
    Poly<F> fp = poly_derivative(K, f);
    if (poly_is_zero(fp)) {
        squarefree_decompose_into(
            K, poly_pth_root(K, f),
            outer * static_cast<unsigned>(mpz_get_ui(K.characteristic().get_mpz_t())), out);
        return;
    }
    Poly<F> c = poly_gcd(K, f, fp);
    Poly<F> w = poly_div_exact(K, f, c);
    unsigned i = 1;
    while (poly_degree(w) > 0) {
        Poly<F> y = poly_gcd(K, w, c);
        Poly<F> z = poly_div_exact(K, w, y);
        if (poly_degree(z) > 0) out.emplace_back(z, i * outer);
        ++i;
        w = std::move(y);
        c = poly_div_exact(K, c, w);
    }
    if (poly_degree(c) > 0)
        squarefree_decompose_into(
            K, poly_pth_root(K, c),
            outer * static_cast<unsigned>(mpz_get_ui(K.characteristic().get_mpz_t())), out);
}

} // namespace detail

/// f = prod g_i^{m_i} with the g_i squarefree and pairwise coprime.
template <class F>
std::vector<std::pair<Poly<F>, unsigned>> poly_squarefree_decomposition(const F& K,
                                                                        const Poly<F>& f) {
    if (!poly_is_monic(K, f) || poly_degree(f) < 1)
        throw std::invalid_argument("squarefree decomposition needs a monic nonconstant input");
    std::vector<std::pair<Poly<F>, unsigned>> out;
    detail::squarefree_decompose_into(K, f, 1, out);
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    return out;
}

/// Distinct-degree split of a monic squarefree polynomial:
/// list of (product of all irreducible factors of degree d, d).
template <class F>
std::vector<std::pair<Poly<F>, unsigned>> poly_distinct_degree(const F& K, Poly<F> f) {
    std::vector<std::pair<Poly<F>, unsigned>> out;
    Poly<F> h = poly_mod(K, poly_x(K), f);
    for (unsigned d = 1; 2 * d <= static_cast<unsigned>(poly_degree(f)); ++d) {
        h = poly_powmod(K, h, K.order(), f);
        Poly<F> g = poly_gcd(K, poly_sub(K, h, poly_x(K)), f);
        if (poly_degree(g) > 0) {
            out.emplace_back(g, d);
            f = poly_div_exact(K, f, g);
            h = poly_mod(K, h, f);
        }
    }
    if (poly_degree(f) > 0) out.emplace_back(f, static_cast<unsigned>(poly_degree(f)));
    return out;
}

/// Equal-degree split (Cantor-Zassenhaus; trace construction in char 2).
/// f is monic squarefree with all irreducible factors of degree d.
template <class F>
void poly_equal_degree_into(const F& K, const Poly<F>& f, unsigned d, CounterRng& rng,
                            std::vector<Poly<F>>& out) {
    const unsigned deg = static_cast<unsigned>(poly_degree(f));
    if (deg == d) {
        out.push_back(f);
        return;
    }
    Poly<F> g;
    while (true) {
        Poly<F> h;
        h.c.resize(deg);
        for (unsigned i = 0; i < deg; ++i) h.c[i] = K.random(rng);
        poly_normalize(K, h);
        if (poly_degree(h) < 1) continue;
        if (mpz_odd_p(K.order().get_mpz_t())) {
            mpz_class e;
            mpz_pow_ui(e.get_mpz_t(), K.order().get_mpz_t(), d);
            e = (e - 1) / 2;
            Poly<F> t = poly_powmod(K, h, e, f);
            g = poly_gcd(K, poly_sub(K, t, poly_one(K)), f);
        } else {
            // absolute trace over F_2
            const unsigned bits = static_cast<unsigned>(mpz_sizeinbase(K.order().get_mpz_t(), 2)) - 1;
            Poly<F> t = poly_mod(K, h, f);
            Poly<F> acc = t;
            for (unsigned i = 1; i < bits * d; ++i) {
                t = poly_mod(K, poly_mul(K, t, t), f);
                acc = poly_add(K, acc, t);
            }
            g = poly_gcd(K, acc, f);
        }
        const int dg = poly_degree(g);
        if (dg > 0 && dg < static_cast<int>(deg)) break;
    }
    poly_equal_degree_into(K, g, d, rng, out);
    poly_equal_degree_into(K, poly_div_exact(K, f, g), d, rng, out);
}

/// Complete factorization of a monic polynomial into monic irreducibles with
/// multiplicities, canonically sorted. The randomized equal-degree stage only
/// affects running time; the sorted output is a pure function of the input.
template <class F>
std::vector<std::pair<Poly<F>, unsigned>> poly_factor(const F& K, const Poly<F>& f,
                                                      CounterRng& rng) {
    if (!poly_is_monic(K, f) || poly_degree(f) < 1)
        throw std::invalid_argument("factorization needs a monic input of degree >= 1");
    std::vector<std::pair<Poly<F>, unsigned>> out;
    for (const auto& [part, mult] : poly_squarefree_decomposition(K, f)) {
        for (const auto& [prod, d] : poly_distinct_degree(K, part)) {
            std::vector<Poly<F>> irred;
            poly_equal_degree_into(K, prod, d, rng, irred);
            for (auto& h : irred) out.emplace_back(std::move(h), mult);
        }
    }
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        return poly_canonical_less(K, a.first, b.first);
    });
    return out;
}

template <class F>
std::vector<std::pair<Poly<F>, unsigned>> poly_factor(const F& K, const Poly<F>& f) {
    CounterRng rng(0x736e6c636d2d6571ULL,
                   mpz_fdiv_ui(poly_encode(K, f).get_mpz_t(), 0x7fffffff));
    return poly_factor(K, f, rng);
}

/// Degree multiset of a monic squarefree polynomial of degree n:
/// counts[k-1] = number of degree-k irreducible factors. Returns nullopt when
/// the input is not squarefree (gcd(f, f') != 1).
template <class F>
std::optional<std::vector<unsigned>> poly_splitting_counts(const F& K, const Poly<F>& f) {
    if (!poly_is_monic(K, f) || poly_degree(f) < 1)
        throw std::invalid_argument("splitting type needs a monic input of degree >= 1");
    const unsigned n = static_cast<unsigned>(poly_degree(f));
    Poly<F> fp = poly_derivative(K, f);
    if (poly_is_zero(fp) || poly_degree(poly_gcd(K, f, fp)) != 0) return std::nullopt;
    std::vector<unsigned> counts(n, 0);
    for (const auto& [prod, d] : poly_distinct_degree(K, f))
        counts[d - 1] = static_cast<unsigned>(poly_degree(prod)) / d;
    return counts;
}

/// Number of distinct roots of f in F_q: deg gcd(x^q - x, f).
template <class F>
unsigned poly_distinct_root_count(const F& K, const Poly<F>& f) {
    if (poly_degree(f) < 1) return 0;
    Poly<F> xq = poly_powmod(K, poly_x(K), K.order(), f);
    Poly<F> g = poly_gcd(K, poly_sub(K, xq, poly_x(K)), f);
    return static_cast<unsigned>(poly_degree(g));
}

template <class F>
bool poly_is_irreducible(const F& K, const Poly<F>& f) {
    const int n = poly_degree(f);
    if (n < 1 || !poly_is_monic(K, f)) return false;
    if (n == 1) return true;
    // x^{q^n} = x mod f, and gcd(x^{q^{n/l}} - x, f) = 1 for prime l | n
    Poly<F> h = poly_mod(K, poly_x(K), f);
    std::vector<Poly<F>> powers(n + 1); // powers[i] = x^{q^i} mod f
    powers[0] = h;
    for (int i = 1; i <= n; ++i) {
        h = poly_powmod(K, h, K.order(), f);
        powers[i] = h;
    }
    if (!poly_eq(K, powers[n], powers[0])) return false;
    for (const auto& e : factor(mpz_class(n)).entries) {
        const int m = n / static_cast<int>(mpz_get_ui(e.prime.get_mpz_t()));
        Poly<F> g = poly_gcd(K, poly_sub(K, powers[m], powers[0]), f);
        if (poly_degree(g) != 0) return false;
    }
    return true;
}

inline bool FiniteField::modulus_irreducible() const {
    FiniteField base(p_, {0, 1});
    Poly<FiniteField> m;
    for (uint64_t c : mod_) m.c.push_back({c});
    return poly_is_irreducible(base, m);
}

inline FiniteField FiniteField::with_canonical_modulus(uint64_t p, unsigned f) {
    if (f == 0) throw std::invalid_argument("extension degree must be >= 1");
    if (f == 1) return prime_field(p);
    prime_field(p); // validate p before scanning moduli
    mpz_class total;
    mpz_ui_pow_ui(total.get_mpz_t(), p, f);
    if (!detail::fits_u64(total))
        throw std::invalid_argument("canonical modulus search space too large");
    const uint64_t limit = detail::to_u64(total);
    for (uint64_t idx = 0; idx < limit; ++idx) {
        std::vector<uint64_t> mod(f + 1, 0);
        uint64_t v = idx;
        for (unsigned i = 0; i < f; ++i) {
            mod[i] = v % p;
            v /= p;
        }
        mod[f] = 1;
        try {
            return FiniteField(p, std::move(mod));
        } catch (const std::invalid_argument&) {
            continue;
        }
    }
    throw std::logic_error("no irreducible modulus found"); // unreachable
}

using FqPoly = Poly<FiniteField>;
using FqElem = FiniteField::Elem;

/// Number of monic irreducible degree-k polynomials over F_q, by Moebius
/// inversion: (1/k) sum_{d | k} mu(d) q^{k/d}.
inline mpz_class count_irreducibles(const mpz_class& q, unsigned k) {
    if (k < 1) throw std::invalid_argument("degree must be >= 1");
    mpz_class sum = 0;
    for (unsigned d = 1; d <= k; ++d) {
        if (k % d != 0) continue;
        const int mu = moebius(mpz_class(d));
        if (mu == 0) continue;
        mpz_class t;
        mpz_pow_ui(t.get_mpz_t(), q.get_mpz_t(), k / d);
        sum += mu * t;
    }
    mpz_class out = sum / k;
    if (out * k != sum) throw std::logic_error("irreducible count not integral");
    return out;
}

inline std::string poly_to_string(const FiniteField& K, const FqPoly& f,
                                  const std::string& var = "x") {
    if (poly_is_zero(f)) return "0";
    std::string s;
    for (size_t i = f.c.size(); i-- > 0;) {
        if (K.is_zero(f.c[i])) continue;
        if (!s.empty()) s += "+";
        const bool unit = K.eq(f.c[i], K.one()) && i > 0;
        if (!unit) s += K.to_string(f.c[i]);
        if (i > 0) {
            if (!unit) s += "*";
            s += var;
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s;
}

} // namespace snlcm

#endif
