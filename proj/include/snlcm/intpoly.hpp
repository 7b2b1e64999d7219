#ifndef SNLCM_INTPOLY_HPP
#define SNLCM_INTPOLY_HPP

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace snlcm {

/// Dense integer polynomial, index = degree. Canonical form strips trailing
/// zeros; the zero polynomial is empty.
using IntPoly = std::vector<mpz_class>;

inline void ipoly_normalize(IntPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int ipoly_degree(const IntPoly& p) { return static_cast<int>(p.size()) - 1; }

inline bool ipoly_is_monic(const IntPoly& p) { return !p.empty() && p.back() == 1; }

inline IntPoly ipoly_derivative(const IntPoly& p) {
    IntPoly d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<unsigned long>(i));
    ipoly_normalize(d);
    return d;
}

inline mpz_class ipoly_eval(const IntPoly& p, const mpz_class& x) {
    mpz_class acc = 0;
    for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

inline std::string ipoly_to_string(const IntPoly& p, const std::string& var = "x") {
    if (p.empty()) return "0";
    std::string s;
    for (size_t i = p.size(); i-- > 0;) {
        const mpz_class& a = p[i];
        if (a == 0) continue;
        mpz_class mag = abs(a);
        if (s.empty()) {
            if (a < 0) s += "-";
        } else {
            s += a < 0 ? "-" : "+";
        }
        const bool unit = mag == 1 && i > 0;
        if (!unit) s += mag.get_str();
        if (i > 0) {
            s += var;
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s;
}

/// Parse an integer polynomial in one variable, e.g. "x^2+1", "x^3 - 2x + 5".
inline IntPoly ipoly_parse(const std::string& text, char var = 'x') {
    IntPoly out;
    size_t i = 0;
    const auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    if (i == text.size()) throw std::invalid_argument("empty polynomial");
    bool first = true;
    while (i < text.size()) {
        skip_ws();
        int sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
            skip_ws();
        } else if (!first) {
            throw std::invalid_argument("expected '+' or '-' in polynomial: " + text);
        }
        first = false;
        std::string digits;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
            digits += text[i++];
        skip_ws();
        mpz_class coeff = digits.empty() ? mpz_class(1) : mpz_class(digits);
        size_t deg = 0;
        if (i < text.size() && text[i] == var) {
            ++i;
            deg = 1;
            skip_ws();
            if (i < text.size() && text[i] == '^') {
                ++i;
                skip_ws();
                std::string expd;
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                    expd += text[i++];
                if (expd.empty()) throw std::invalid_argument("missing exponent: " + text);
                deg = std::stoul(expd);
            }
        } else if (digits.empty()) {
            throw std::invalid_argument("expected coefficient or variable: " + text);
        }
        if (out.size() < deg + 1) out.resize(deg + 1, mpz_class(0));
        out[deg] += sign * coeff;
        skip_ws();
    }
    ipoly_normalize(out);
    return out;
}

/// Resultant over an arbitrary field, by the Euclidean remainder sequence.
/// Ops must provide Elem, zero(), one(), is_zero, eq, add, sub, neg, mul, inv.
template <class Ops>
typename Ops::Elem resultant_generic(const Ops& F,
                                     std::vector<typename Ops::Elem> a,
                                     std::vector<typename Ops::Elem> b) {
    using Elem = typename Ops::Elem;
    const auto norm = [&](std::vector<Elem>& p) {
        while (!p.empty() && F.is_zero(p.back())) p.pop_back();
    };
    norm(a);
    norm(b);
    if (a.empty() || b.empty()) return F.zero();
    Elem res = F.one();
    while (true) {
        if (b.size() == 1) { // deg b == 0: Res(a, b0) = b0^deg(a)
            Elem acc = F.one();
            for (size_t i = 0; i + 1 < a.size(); ++i) acc = F.mul(acc, b[0]);
            return F.mul(res, acc);
        }
        // r = a mod b
        std::vector<Elem> r = a;
        const Elem lb_inv = F.inv(b.back());
        while (r.size() >= b.size()) {
            const size_t shift = r.size() - b.size();
            const Elem q = F.mul(r.back(), lb_inv);
            for (size_t j = 0; j < b.size(); ++j)
                r[shift + j] = F.sub(r[shift + j], F.mul(q, b[j]));
            norm(r); // top term cancels exactly
        }
        if (r.empty()) return F.zero();
        const size_t dega = a.size() - 1, degb = b.size() - 1, degr = r.size() - 1;
        // Res(a,b) = (-1)^{dega*degb} lc(b)^{dega-degr} Res(b,r)
        Elem scale = F.one();
        for (size_t i = 0; i < dega - degr; ++i) scale = F.mul(scale, b.back());
        if ((dega * degb) % 2 == 1) scale = F.neg(scale);
        res = F.mul(res, scale);
        a = std::move(b);
        b = std::move(r);
    }
}

struct RationalOps {
    using Elem = mpq_class;
    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    bool is_zero(const Elem& e) const { return e == 0; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem inv(const Elem& a) const { return mpq_class(1) / a; }
};

/// Resultant of two integer polynomials (exact; computed over Q).
inline mpz_class ipoly_resultant(const IntPoly& a, const IntPoly& b) {
    RationalOps F;
    std::vector<mpq_class> qa(a.begin(), a.end()), qb(b.begin(), b.end());
    mpq_class r = resultant_generic(F, qa, qb);
    if (r.get_den() != 1) throw std::logic_error("integer resultant not integral");
    return r.get_num();
}

/// Discriminant of a monic integer polynomial; deg 1 gives 1 by convention.
inline mpz_class ipoly_disc(const IntPoly& g) {
    const int d = ipoly_degree(g);
    if (d < 1) throw std::invalid_argument("discriminant needs degree >= 1");
    if (d == 1) return 1;
    mpz_class res = ipoly_resultant(g, ipoly_derivative(g));
    if ((static_cast<long>(d) * (d - 1) / 2) % 2 == 1) res = -res;
    return res;
}

} // namespace snlcm

#endif
