#ifndef SNLCM_RATIONAL_POLY_HPP
#define SNLCM_RATIONAL_POLY_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace snlcm {

/// Dense univariate polynomial with exact rational coefficients.
/// Canonical form: no trailing zero coefficients; the zero polynomial is the
/// empty coefficient vector (degree -1). mpq_class keeps every coefficient
/// reduced with positive denominator.
class RationalPoly {
public:
    RationalPoly() = default;
    explicit RationalPoly(const mpq_class& constant) {
        if (constant != 0) c_.push_back(constant);
    }
    explicit RationalPoly(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) {
        normalize();
    }

    static RationalPoly monomial(const mpq_class& a, size_t k) {
        if (a == 0) return {};
        std::vector<mpq_class> c(k + 1);
        c[k] = a;
        return RationalPoly(std::move(c));
    }
    static RationalPoly variable() { return monomial(1, 1); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }

    mpq_class coeff(size_t i) const { return i < c_.size() ? c_[i] : mpq_class(0); }
    const mpq_class& leading() const {
        if (c_.empty()) throw std::logic_error("leading coefficient of zero polynomial");
        return c_.back();
    }

    RationalPoly operator+(const RationalPoly& o) const {
        std::vector<mpq_class> r(std::max(c_.size(), o.c_.size()));
        for (size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) + o.coeff(i);
        return RationalPoly(std::move(r));
    }
    RationalPoly operator-(const RationalPoly& o) const {
        std::vector<mpq_class> r(std::max(c_.size(), o.c_.size()));
        for (size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) - o.coeff(i);
        return RationalPoly(std::move(r));
    }
    RationalPoly operator*(const RationalPoly& o) const {
        if (is_zero() || o.is_zero()) return {};
        std::vector<mpq_class> r(c_.size() + o.c_.size() - 1, mpq_class(0));
        for (size_t i = 0; i < c_.size(); ++i)
            for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
        return RationalPoly(std::move(r));
    }
    RationalPoly operator*(const mpq_class& s) const {
        if (s == 0) return {};
        std::vector<mpq_class> r = c_;
        for (auto& v : r) v *= s;
        return RationalPoly(std::move(r));
    }
    RationalPoly operator/(const mpq_class& s) const {
        if (s == 0) throw std::invalid_argument("division by zero");
        return *this * mpq_class(1 / s);
    }
    RationalPoly operator-() const { return *this * mpq_class(-1); }

    bool operator==(const RationalPoly& o) const { return c_ == o.c_; }

    mpq_class eval(const mpq_class& x) const {
        mpq_class acc = 0;
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    const std::vector<mpq_class>& coefficients() const { return c_; }

    /// Render as e.g. "1/2*q^2 - 1/2*q" (degree-descending).
    std::string to_string(const std::string& var = "q") const {
        if (c_.empty()) return "0";
        std::string s;
        for (size_t i = c_.size(); i-- > 0;) {
            const mpq_class& a = c_[i];
            if (a == 0) continue;
            mpq_class mag = abs(a);
            if (s.empty()) {
                if (a < 0) s += "-";
            } else {
                s += a < 0 ? " - " : " + ";
            }
            const bool unit = mag == 1 && i > 0;
            if (!unit) s += mag.get_str();
            if (i > 0) {
                if (!unit) s += "*";
                s += var;
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s;
    }

private:
    void normalize() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<mpq_class> c_;
};

/// Generalized binomial coefficient C(P, r) = P(P-1)...(P-r+1)/r!, expanded
/// exactly; degree is r * deg(P).
inline RationalPoly poly_binomial(const RationalPoly& P, unsigned r) {
    RationalPoly acc{mpq_class(1)};
    mpz_class rfact = 1;
    for (unsigned i = 0; i < r; ++i) {
        acc = acc * (P - RationalPoly(mpq_class(i)));
        rfact *= i + 1;
    }
    return acc / mpq_class(rfact);
}

} // namespace snlcm

#endif
