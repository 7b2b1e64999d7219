#ifndef SNLCM_NUMBER_FIELD_HPP
#define SNLCM_NUMBER_FIELD_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "snlcm/factor.hpp"
#include "snlcm/finite_field.hpp"
#include "snlcm/intpoly.hpp"

namespace snlcm {

class UnsupportedFieldError : public std::runtime_error {
public:
    explicit UnsupportedFieldError(const std::string& what) : std::runtime_error(what) {}
};

/// Ring-of-integers element in the power basis 1, theta, ..., theta^{d-1}.
struct FieldElement {
    std::vector<mpz_class> coords;
    bool operator==(const FieldElement& o) const { return coords == o.coords; }
    bool operator!=(const FieldElement& o) const { return coords != o.coords; }
    bool operator<(const FieldElement& o) const { return coords < o.coords; }
};

/// Prime of the field: (p, e, f, local factor of g mod p). For p within the
/// word-size range the residue field F_{p^f} = F_p[t]/(local_factor) is
/// attached; reduction mod huge primes is not needed by any caller.
struct PrimeIdeal {
    mpz_class p;
    unsigned e = 1;
    unsigned f = 1;
    IntPoly local_factor; // monic, coefficients in [0, p)
    mpz_class norm;       // p^f
    std::shared_ptr<const FiniteField> residue;

    bool ramified() const { return e > 1; }

    std::string to_string() const {
        return "(" + p.get_str() + ", " + ipoly_to_string(local_factor) + ")";
    }
};

/// Canonical order: by rational prime, then local-factor degree, then the
/// base-p value of the local factor's coefficient word.
struct PrimeIdealLess {
    bool operator()(const PrimeIdeal& a, const PrimeIdeal& b) const {
        if (a.p != b.p) return a.p < b.p;
        if (a.local_factor.size() != b.local_factor.size())
            return a.local_factor.size() < b.local_factor.size();
        mpz_class ea = 0, eb = 0;
        for (size_t i = a.local_factor.size(); i-- > 0;) {
            ea = ea * a.p + a.local_factor[i];
            eb = eb * b.p + b.local_factor[i];
        }
        if (ea != eb) return ea < eb;
        return a.e < b.e;
    }
};

enum class ElementEnumMode { OrbitRepresentatives, AllUnits };

namespace detail {

using Mat = std::vector<std::vector<mpz_class>>;

/// Row-style Hermite normal form of a full-rank integer lattice basis:
/// upper-triangular, positive diagonal, entries above a diagonal reduced
/// modulo it. Throws if the rows do not span a rank-d lattice.
inline Mat hnf_rows(Mat rows, unsigned d) {
    unsigned row = 0;
    for (unsigned col = 0; col < d; ++col) {
        unsigned pivot = row;
        while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
        if (pivot == rows.size()) throw std::logic_error("lattice basis is not full rank");
        std::swap(rows[row], rows[pivot]);
        for (unsigned i = row + 1; i < rows.size(); ++i) {
            if (rows[i][col] == 0) continue;
            mpz_class g, u, v;
            mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(),
                       rows[row][col].get_mpz_t(), rows[i][col].get_mpz_t());
            const mpz_class a = rows[row][col] / g, b = rows[i][col] / g;
            for (unsigned j = col; j < d; ++j) {
                const mpz_class rj = rows[row][j], ij = rows[i][j];
                rows[row][j] = u * rj + v * ij;
                rows[i][j] = a * ij - b * rj;
            }
        }
        if (rows[row][col] < 0)
            for (unsigned j = col; j < d; ++j) rows[row][j] = -rows[row][j];
        ++row;
    }
    rows.resize(d);
    // reduce entries above each diagonal
    for (unsigned j = 1; j < d; ++j) {
        for (unsigned i = 0; i < j; ++i) {
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), rows[i][j].get_mpz_t(), rows[j][j].get_mpz_t());
            if (q == 0) continue;
            for (unsigned k = j; k < d; ++k) rows[i][k] -= q * rows[j][k];
        }
    }
    return rows;
}

inline bool hnf_contains(const Mat& H, const std::vector<mpz_class>& x) {
    const unsigned d = static_cast<unsigned>(H.size());
    std::vector<mpz_class> rem = x;
    // rows are upper triangular: solve for combination coefficients per column
    for (unsigned j = 0; j < d; ++j) {
        mpz_class q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), rem[j].get_mpz_t(), H[j][j].get_mpz_t());
        if (r != 0) return false;
        if (q != 0)
            for (unsigned k = j; k < d; ++k) rem[k] -= q * H[j][k];
    }
    return true;
}

} // namespace detail

/// Ideal as a row lattice basis in the power basis (upper-triangular HNF;
/// determinant = ideal norm).
struct IdealHNF {
    detail::Mat rows;

    mpz_class norm() const {
        mpz_class n = 1;
        for (size_t i = 0; i < rows.size(); ++i) n *= rows[i][i];
        return n;
    }
    bool contains(const FieldElement& e) const { return detail::hnf_contains(rows, e.coords); }
};

/// Monogenic number field Q[x]/(g) with ring of integers Z[theta]. The
/// constructor verifies that g is monic, irreducible over Q (to the extent a
/// certificate exists for the degree) and that Z[theta] is maximal at every
/// prime whose square divides disc(g) (Dedekind's index criterion).
class NumberField {
public:
    explicit NumberField(IntPoly g) : g_(std::move(g)) {
        ipoly_normalize(g_);
        if (!ipoly_is_monic(g_)) throw std::invalid_argument("defining polynomial must be monic");
        d_ = static_cast<unsigned>(ipoly_degree(g_));
        if (d_ < 1) throw std::invalid_argument("defining polynomial must have degree >= 1");
        disc_ = ipoly_disc(g_);
        if (d_ > 1 && disc_ == 0)
            throw std::invalid_argument("defining polynomial is not squarefree");
        verify_irreducible();
        build_theta_powers();
        verify_monogenic();
        imag_quadratic_ = d_ == 2 && disc_ < 0;
    }

    static NumberField parse(const std::string& spec) { return NumberField(ipoly_parse(spec)); }

    unsigned degree() const { return d_; }
    const IntPoly& min_poly() const { return g_; }
    const mpz_class& disc() const { return disc_; }
    bool unit_group_finite() const { return d_ == 1 || imag_quadratic_; }
    bool is_rationals() const { return d_ == 1; }
    std::string spec_string() const { return ipoly_to_string(g_); }

    // ----- element arithmetic -----

    FieldElement element(std::vector<mpz_class> coords) const {
        if (coords.size() != d_) throw std::invalid_argument("coordinate vector has wrong length");
        return {std::move(coords)};
    }
    FieldElement zero() const { return {std::vector<mpz_class>(d_, 0)}; }
    FieldElement one() const { return from_int(1); }
    FieldElement from_int(const mpz_class& v) const {
        std::vector<mpz_class> c(d_, 0);
        c[0] = v;
        return {std::move(c)};
    }
    FieldElement theta() const {
        std::vector<mpz_class> c(d_, 0);
        if (d_ >= 2)
            c[1] = 1;
        // for d = 1 theta is the root of g(x) = x, i.e. zero
        return {std::move(c)};
    }

    bool is_zero(const FieldElement& e) const {
        for (const auto& c : e.coords)
            if (c != 0) return false;
        return true;
    }

    FieldElement add(const FieldElement& a, const FieldElement& b) const {
        FieldElement r = a;
        for (unsigned i = 0; i < d_; ++i) r.coords[i] += b.coords[i];
        return r;
    }
    FieldElement sub(const FieldElement& a, const FieldElement& b) const {
        FieldElement r = a;
        for (unsigned i = 0; i < d_; ++i) r.coords[i] -= b.coords[i];
        return r;
    }
    FieldElement neg(const FieldElement& a) const {
        FieldElement r = a;
        for (auto& c : r.coords) c = -c;
        return r;
    }
    FieldElement mul_int(const FieldElement& a, const mpz_class& s) const {
        FieldElement r = a;
        for (auto& c : r.coords) c *= s;
        return r;
    }
    FieldElement mul(const FieldElement& a, const FieldElement& b) const {
        std::vector<mpz_class> conv(2 * d_ - 1, 0);
        for (unsigned i = 0; i < d_; ++i) {
            if (a.coords[i] == 0) continue;
            for (unsigned j = 0; j < d_; ++j) conv[i + j] += a.coords[i] * b.coords[j];
        }
        std::vector<mpz_class> out(conv.begin(), conv.begin() + d_);
        for (unsigned k = d_; k < 2 * d_ - 1; ++k) {
            if (conv[k] == 0) continue;
            for (unsigned i = 0; i < d_; ++i) out[i] += conv[k] * theta_pow_[k - d_][i];
        }
        return {std::move(out)};
    }

    /// Field norm: the resultant of g and the coordinate polynomial, i.e. the
    /// product of the element over all embeddings. Closed forms for d <= 2.
    mpz_class norm(const FieldElement& e) const {
        if (d_ == 1) return e.coords[0];
        if (d_ == 2) {
            const mpz_class &u = e.coords[0], &v = e.coords[1];
            return u * u - g_[1] * u * v + g_[0] * v * v;
        }
        return norm_via_resultant(e);
    }

    mpz_class norm_via_resultant(const FieldElement& e) const {
        RationalOps F;
        std::vector<mpq_class> qg(g_.begin(), g_.end());
        std::vector<mpq_class> qe(e.coords.begin(), e.coords.end());
        mpq_class r = resultant_generic(F, qg, qe);
        if (r.get_den() != 1) throw std::logic_error("norm not integral");
        return r.get_num();
    }

    std::string to_string(const FieldElement& e) const {
        if (d_ == 1) return e.coords[0].get_str();
        std::string s = "(";
        for (unsigned i = 0; i < d_; ++i) {
            if (i) s += ",";
            s += e.coords[i].get_str();
        }
        return s + ")";
    }

    /// Accepts a bare integer (rational element) or "(a0,a1,...)".
    FieldElement parse_element(const std::string& text) const {
        std::string t = text;
        t.erase(std::remove_if(t.begin(), t.end(), ::isspace), t.end());
        if (t.empty()) throw std::invalid_argument("empty element");
        if (t.front() != '(') return from_int(mpz_class(t));
        if (t.back() != ')') throw std::invalid_argument("unbalanced element tuple: " + text);
        std::vector<mpz_class> coords;
        std::string body = t.substr(1, t.size() - 2), item;
        std::stringstream ss(body);
        while (std::getline(ss, item, ',')) coords.emplace_back(item);
        if (coords.size() != d_)
            throw std::invalid_argument("element tuple must have " + std::to_string(d_) +
                                        " coordinates");
        return {std::move(coords)};
    }

    // ----- primes -----

    /// Dedekind decomposition of a rational prime: g mod p = prod g_i^{e_i}
    /// gives the primes (p, g_i(theta)) with residue degree deg g_i. Valid at
    /// every p because the field is monogenic. Results are cached.
    std::vector<PrimeIdeal> factor_prime(const mpz_class& p) const {
        {
            std::lock_guard<std::mutex> lock(cache_->mutex);
            auto it = cache_->decompositions.find(p);
            if (it != cache_->decompositions.end()) return it->second;
        }
        if (!is_prime(p)) throw std::invalid_argument("factor_prime: " + p.get_str() + " is not prime");
        std::vector<PrimeIdeal> out;
        if (detail::fits_u64(p) && p < (mpz_class(1) << 62)) {
            const uint64_t pu = detail::to_u64(p);
            FiniteField Fp = FiniteField::prime_field(pu);
            FqPoly gbar;
            for (const auto& c : g_) gbar.c.push_back(Fp.from_mpz(c));
            poly_normalize(Fp, gbar);
            for (const auto& [gi, ei] : poly_factor(Fp, gbar)) {
                PrimeIdeal P;
                P.p = p;
                P.e = ei;
                P.f = static_cast<unsigned>(poly_degree(gi));
                for (const auto& c : gi.c) P.local_factor.emplace_back(static_cast<unsigned long>(c[0]));
                mpz_pow_ui(P.norm.get_mpz_t(), p.get_mpz_t(), P.f);
                std::vector<uint64_t> mod;
                for (const auto& c : gi.c) mod.push_back(c[0]);
                P.residue = std::make_shared<FiniteField>(pu, std::move(mod), false);
                out.push_back(std::move(P));
            }
        } else {
            BigPrimeField Fp(p);
            Poly<BigPrimeField> gbar;
            for (const auto& c : g_) gbar.c.push_back(Fp.from_mpz(c));
            poly_normalize(Fp, gbar);
            for (const auto& [gi, ei] : poly_factor(Fp, gbar)) {
                PrimeIdeal P;
                P.p = p;
                P.e = ei;
                P.f = static_cast<unsigned>(poly_degree(gi));
                P.local_factor = gi.c;
                mpz_pow_ui(P.norm.get_mpz_t(), p.get_mpz_t(), P.f);
                out.push_back(std::move(P));
            }
        }
        std::sort(out.begin(), out.end(), [](const PrimeIdeal& a, const PrimeIdeal& b) {
            return PrimeIdealLess{}(a, b);
        });
        std::lock_guard<std::mutex> lock(cache_->mutex);
        return cache_->decompositions.emplace(p, std::move(out)).first->second;
    }

    /// All primes of norm <= x, sorted by (norm, canonical order); pi_K(x) is
    /// the length of the result.
    std::vector<PrimeIdeal> primes_up_to(uint64_t x) const {
        std::vector<PrimeIdeal> out;
        if (x < 2) return out;
        std::vector<bool> sieve(x + 1, true);
        for (uint64_t i = 2; i * i <= x; ++i)
            if (sieve[i])
                for (uint64_t j = i * i; j <= x; j += i) sieve[j] = false;
        for (uint64_t p = 2; p <= x; ++p) {
            if (!sieve[p]) continue;
            for (const auto& P : factor_prime(mpz_class(static_cast<unsigned long>(p))))
                if (P.norm <= static_cast<unsigned long>(x)) out.push_back(P);
        }
        std::sort(out.begin(), out.end(), [](const PrimeIdeal& a, const PrimeIdeal& b) {
            if (a.norm != b.norm) return a.norm < b.norm;
            return PrimeIdealLess{}(a, b);
        });
        return out;
    }

    /// Image of an element in the residue field O_K/P, theta |-> t.
    FqElem reduce(const FieldElement& e, const PrimeIdeal& P) const {
        const FiniteField& F = residue_field(P);
        FqElem t(F.extension_degree(), 0);
        if (F.extension_degree() >= 2)
            t[1] = 1;
        else
            t[0] = P.f == 1 ? root_of_linear(P) : 0;
        FqElem acc = F.zero();
        for (unsigned i = d_; i-- > 0;)
            acc = F.add(F.mul(acc, t), F.from_mpz(e.coords[i]));
        return acc;
    }

    const FiniteField& residue_field(const PrimeIdeal& P) const {
        if (!P.residue)
            throw UnsupportedFieldError("reduction mod a prime above " + P.p.get_str() +
                                        " is outside the word-size range");
        return *P.residue;
    }

    // ----- valuations -----

    IdealHNF prime_ideal_hnf(const PrimeIdeal& P) const {
        detail::Mat rows;
        FieldElement l = zero();
        for (size_t i = 0; i < P.local_factor.size(); ++i) {
            FieldElement term = mul_int(power_of_theta(i), P.local_factor[i]);
            l = add(l, term);
        }
        FieldElement cur_p = from_int(P.p), cur_l = l;
        for (unsigned i = 0; i < d_; ++i) {
            rows.push_back(cur_p.coords);
            rows.push_back(cur_l.coords);
            if (i + 1 < d_) {
                cur_p = mul(cur_p, theta());
                cur_l = mul(cur_l, theta());
            }
        }
        return {detail::hnf_rows(std::move(rows), d_)};
    }

    IdealHNF ideal_mul(const IdealHNF& A, const IdealHNF& B) const {
        detail::Mat rows;
        for (const auto& ra : A.rows)
            for (const auto& rb : B.rows)
                rows.push_back(mul({ra}, {rb}).coords);
        return {detail::hnf_rows(std::move(rows), d_)};
    }

    IdealHNF ideal_pow(const IdealHNF& A, unsigned k) const {
        if (k == 0) {
            detail::Mat rows(d_, std::vector<mpz_class>(d_, 0));
            for (unsigned i = 0; i < d_; ++i) rows[i][i] = 1;
            return {std::move(rows)};
        }
        IdealHNF result = A, base = A;
        --k;
        while (k) {
            if (k & 1) result = ideal_mul(result, base);
            k >>= 1;
            if (k) base = ideal_mul(base, base);
        }
        return result;
    }

    /// v_P(e) for nonzero e. Unramified degree-1 primes go through a Hensel
    /// lift of the root of g; everything else through HNF containment with
    /// the exponent found by binary search. Both are exact.
    unsigned valuation(const FieldElement& e, const PrimeIdeal& P) const {
        if (is_zero(e)) throw std::invalid_argument("valuation of zero");
        mpz_class N = abs(norm(e));
        mpz_class reduced;
        const unsigned m = static_cast<unsigned>(
            mpz_remove(reduced.get_mpz_t(), N.get_mpz_t(), P.p.get_mpz_t()));
        return valuation_with_norm_multiplicity(e, P, m);
    }

    unsigned valuation_with_norm_multiplicity(const FieldElement& e, const PrimeIdeal& P,
                                              unsigned m) const {
        if (m == 0) return 0;
        if (P.e == 1 && P.f == 1) return valuation_hensel(e, P, m);
        return valuation_hnf(e, P, m / P.f);
    }

    unsigned valuation_hensel(const FieldElement& e, const PrimeIdeal& P, unsigned bound) const {
        // lift the simple root of g below P to precision p^{bound+1}
        mpz_class a = (P.p - P.local_factor[0]) % P.p;
        mpz_class modulus = P.p;
        unsigned prec = 1;
        IntPoly gp = ipoly_derivative(g_);
        while (prec < bound + 1) {
            const unsigned next = std::min(2 * prec, bound + 1);
            mpz_class m2;
            mpz_pow_ui(m2.get_mpz_t(), P.p.get_mpz_t(), next);
            mpz_class deriv = ipoly_eval(gp, a) % m2;
            mpz_class inv;
            if (mpz_invert(inv.get_mpz_t(), deriv.get_mpz_t(), m2.get_mpz_t()) == 0)
                throw std::logic_error("derivative not invertible in Hensel lift");
            a = (a - ipoly_eval(g_, a) * inv) % m2;
            if (a < 0) a += m2;
            modulus = m2;
            prec = next;
        }
        IntPoly coord(e.coords.begin(), e.coords.end());
        mpz_class val = ipoly_eval(coord, a) % modulus;
        if (val < 0) val += modulus;
        if (val == 0) throw std::logic_error("valuation exceeds its norm bound");
        mpz_class rest;
        return static_cast<unsigned>(
            mpz_remove(rest.get_mpz_t(), val.get_mpz_t(), P.p.get_mpz_t()));
    }

    unsigned valuation_hnf(const FieldElement& e, const PrimeIdeal& P, unsigned bound) const {
        if (bound == 0) return 0;
        IdealHNF prime = prime_ideal_hnf(P);
        if (!prime.contains(e)) return 0;
        unsigned lo = 1, hi = bound;
        while (lo < hi) {
            const unsigned mid = (lo + hi + 1) / 2;
            if (ideal_pow(prime, mid).contains(e))
                lo = mid;
            else
                hi = mid - 1;
        }
        return lo;
    }

    // ----- enumeration -----

    /// Torsion units: (1, -1) for Q; all norm-1 lattice points for imaginary
    /// quadratic fields (2, 4 or 6 of them).
    std::vector<FieldElement> torsion_units() const {
        if (d_ == 1) return {one(), from_int(-1)};
        if (!imag_quadratic_)
            throw UnsupportedFieldError("unit enumeration needs a finite unit group");
        std::vector<FieldElement> units;
        for (const FieldElement& e : elements_box(1))
            if (norm(e) == 1) units.push_back(e);
        return units;
    }

    /// Nonzero elements of norm <= M for fields with finite unit group.
    /// OrbitRepresentatives keeps one element per unit orbit (the
    /// lexicographically greatest coordinate vector); AllUnits keeps all.
    /// Sorted by (norm, coordinates).
    std::vector<FieldElement> elements_up_to_norm(const mpz_class& M, ElementEnumMode mode) const {
        if (!unit_group_finite())
            throw UnsupportedFieldError("element enumeration needs a finite unit group");
        if (M < 1) return {};
        std::vector<FieldElement> pts;
        if (d_ == 1) {
            for (mpz_class v = 1; v <= M; ++v) {
                pts.push_back(from_int(v));
                if (mode == ElementEnumMode::AllUnits) pts.push_back(from_int(-v));
            }
        } else {
            pts = elements_box(M);
            if (mode == ElementEnumMode::OrbitRepresentatives) {
                const auto units = torsion_units();
                std::set<std::vector<mpz_class>> reps;
                for (const FieldElement& e : pts) {
                    FieldElement best = e;
                    for (const FieldElement& u : units) {
                        FieldElement cand = mul(e, u);
                        if (best.coords < cand.coords) best = std::move(cand);
                    }
                    reps.insert(best.coords);
                }
                pts.clear();
                for (const auto& c : reps) pts.push_back({c});
            }
        }
        std::sort(pts.begin(), pts.end(), [&](const FieldElement& a, const FieldElement& b) {
            mpz_class na = abs(norm(a)), nb = abs(norm(b));
            if (na != nb) return na < nb;
            return a.coords < b.coords;
        });
        return pts;
    }

    FieldElement power_of_theta(size_t k) const {
        if (k < d_) {
            std::vector<mpz_class> c(d_, 0);
            c[k] = 1;
            return {std::move(c)};
        }
        if (k <= 2 * d_ - 2) return {theta_pow_[k - d_]};
        FieldElement r = power_of_theta(2 * d_ - 2);
        for (size_t i = 2 * d_ - 2; i < k; ++i) r = mul(r, theta());
        return r;
    }

    const std::vector<std::vector<mpz_class>>& theta_power_table() const { return theta_pow_; }

private:
    uint64_t root_of_linear(const PrimeIdeal& P) const {
        mpz_class r = (P.p - P.local_factor[0]) % P.p;
        return mpz_get_ui(r.get_mpz_t());
    }

    /// All nonzero lattice points with norm <= M (positive definite norm
    /// form; imaginary quadratic only).
    std::vector<FieldElement> elements_box(const mpz_class& M) const {
        const mpz_class b = g_[1], c = g_[0];
        // Q(u, v) = u^2 - b u v + c v^2; 4Q = (2u - bv)^2 + (4c - b^2) v^2
        const mpz_class lead = 4 * c - b * b; // = |disc|, positive here
        std::vector<FieldElement> out;
        mpz_class vmax;
        mpz_class t = 4 * M / lead;
        mpz_sqrt(vmax.get_mpz_t(), t.get_mpz_t());
        for (mpz_class v = -vmax; v <= vmax; ++v) {
            mpz_class rhs = 4 * M - lead * v * v; // (2u - bv)^2 <= rhs
            if (rhs < 0) continue;
            mpz_class w;
            mpz_sqrt(w.get_mpz_t(), rhs.get_mpz_t());
            mpz_class lo_num = b * v - w, hi_num = b * v + w;
            mpz_class ulo, uhi;
            mpz_cdiv_q_ui(ulo.get_mpz_t(), lo_num.get_mpz_t(), 2);
            mpz_fdiv_q_ui(uhi.get_mpz_t(), hi_num.get_mpz_t(), 2);
            for (mpz_class u = ulo; u <= uhi; ++u) {
                if (u == 0 && v == 0) continue;
                out.push_back(element({u, v}));
            }
        }
        return out;
    }

    void build_theta_powers() {
        theta_pow_.clear();
        if (d_ == 1) return;
        // theta^d = -(g_0 + g_1 theta + ... + g_{d-1} theta^{d-1})
        std::vector<mpz_class> cur(d_);
        for (unsigned i = 0; i < d_; ++i) cur[i] = -g_[i];
        theta_pow_.push_back(cur);
        for (unsigned k = d_ + 1; k <= 2 * d_ - 2; ++k) {
            std::vector<mpz_class> next(d_, 0);
            for (unsigned i = 0; i + 1 < d_; ++i) next[i + 1] = cur[i];
            if (cur[d_ - 1] != 0)
                for (unsigned i = 0; i < d_; ++i) next[i] += cur[d_ - 1] * theta_pow_[0][i];
            theta_pow_.push_back(next);
            cur = theta_pow_.back();
        }
    }

    void verify_irreducible() const {
        if (d_ == 1) return;
        // rational roots of a monic integer polynomial are integer divisors
        // of the constant term
        if (g_[0] == 0) throw std::invalid_argument("defining polynomial has the root 0");
        for (const auto& entry : divisors_of(abs(g_[0]))) {
            if (ipoly_eval(g_, entry) == 0 || ipoly_eval(g_, -entry) == 0)
                throw std::invalid_argument("defining polynomial has a rational root");
        }
        if (d_ <= 3) return;
        // a prime where g stays irreducible certifies irreducibility over Q
        for (uint64_t p = 2; p < 500; p = p == 2 ? 3 : p + 2) {
            if (!is_prime_u64(p)) continue;
            if (mpz_divisible_ui_p(disc_.get_mpz_t(), p)) continue;
            FiniteField Fp = FiniteField::prime_field(p);
            FqPoly gbar;
            for (const auto& cc : g_) gbar.c.push_back(Fp.from_mpz(cc));
            if (poly_is_irreducible(Fp, gbar)) return;
        }
        if (d_ == 4 && !has_quadratic_factor()) return;
        throw UnsupportedFieldError("cannot certify irreducibility of " + ipoly_to_string(g_));
    }

    bool has_quadratic_factor() const {
        // monic quartic g = (x^2+a x+b)(x^2+c x+e): b e = g0 restricts (b, e)
        // to divisor pairs, and |a| <= 2 (1 + max |g_i|) since a is a sum of
        // two roots
        mpz_class height = 0;
        for (const auto& cc : g_) height = std::max(height, mpz_class(abs(cc)));
        const mpz_class abound = 2 * (1 + height);
        for (const auto& bb : signed_divisors_of(g_[0])) {
            const mpz_class e = g_[0] / bb;
            // a + c = g3, b + e + a c = g2, a e + b c = g1
            for (mpz_class a = -abound; a <= abound; ++a) {
                const mpz_class c = g_[3] - a;
                if (bb + e + a * c != g_[2]) continue;
                if (a * e + bb * c != g_[1]) continue;
                return true;
            }
        }
        return false;
    }

    static std::vector<mpz_class> divisors_of(const mpz_class& n) {
        std::vector<mpz_class> divs{1};
        for (const auto& entry : factor(n).entries) {
            const size_t sz = divs.size();
            mpz_class pk = 1;
            for (unsigned i = 0; i < entry.exponent; ++i) {
                pk *= entry.prime;
                for (size_t j = 0; j < sz; ++j) divs.push_back(divs[j] * pk);
            }
        }
        return divs;
    }

    static std::vector<mpz_class> signed_divisors_of(const mpz_class& n) {
        std::vector<mpz_class> out;
        for (const auto& dv : divisors_of(abs(n))) {
            out.push_back(dv);
            out.push_back(-dv);
        }
        return out;
    }

    /// Dedekind index criterion at every prime whose square divides disc(g):
    /// construction fails unless Z[theta] is maximal there.
    void verify_monogenic() const {
        if (d_ == 1) return;
        for (const auto& entry : factor(abs(disc_)).entries) {
            if (entry.exponent < 2) continue;
            if (!dedekind_maximal_at(entry.prime))
                throw UnsupportedFieldError("Z[theta] is not maximal at " + entry.prime.get_str() +
                                            " for g = " + ipoly_to_string(g_));
        }
    }

    bool dedekind_maximal_at(const mpz_class& p) const {
        const uint64_t pu = detail::to_u64(p);
        FiniteField Fp = FiniteField::prime_field(pu);
        FqPoly gbar;
        for (const auto& cc : g_) gbar.c.push_back(Fp.from_mpz(cc));
        poly_normalize(Fp, gbar);
        auto factors = poly_factor(Fp, gbar);
        FqPoly radical = poly_one(Fp), cofactor = poly_one(Fp);
        for (const auto& [gi, ei] : factors) {
            radical = poly_mul(Fp, radical, gi);
            for (unsigned i = 1; i < ei; ++i) cofactor = poly_mul(Fp, cofactor, gi);
        }
        // F = (G1 * H1 - g)/p with monic integer lifts G1, H1
        IntPoly G1 = lift(Fp, radical), H1 = lift(Fp, cofactor);
        IntPoly prod = ipoly_mul(G1, H1);
        IntPoly F(std::max(prod.size(), g_.size()), 0);
        for (size_t i = 0; i < F.size(); ++i) {
            mpz_class v = (i < prod.size() ? prod[i] : mpz_class(0)) -
                          (i < g_.size() ? g_[i] : mpz_class(0));
            if (!mpz_divisible_p(v.get_mpz_t(), p.get_mpz_t()))
                throw std::logic_error("Dedekind lift mismatch");
            F[i] = v / p;
        }
        FqPoly Fbar;
        for (const auto& cc : F) Fbar.c.push_back(Fp.from_mpz(cc));
        poly_normalize(Fp, Fbar);
        FqPoly ghat = poly_gcd(Fp, radical, cofactor);
        FqPoly full = poly_gcd(Fp, ghat, Fbar);
        return poly_degree(full) == 0;
    }

    static IntPoly lift(const FiniteField&, const FqPoly& f) {
        IntPoly out;
        for (const auto& cc : f.c) out.emplace_back(static_cast<unsigned long>(cc[0]));
        ipoly_normalize(out);
        return out;
    }

    static IntPoly ipoly_mul(const IntPoly& a, const IntPoly& b) {
        if (a.empty() || b.empty()) return {};
        IntPoly r(a.size() + b.size() - 1, 0);
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
        return r;
    }

    // shared so NumberField stays a copyable value; copies see the same cache
    struct PrimeCache {
        std::mutex mutex;
        std::map<mpz_class, std::vector<PrimeIdeal>> decompositions;
    };

    IntPoly g_;
    unsigned d_ = 0;
    mpz_class disc_;
    bool imag_quadratic_ = false;
    std::vector<std::vector<mpz_class>> theta_pow_;
    std::shared_ptr<PrimeCache> cache_ = std::make_shared<PrimeCache>();
};

} // namespace snlcm

#endif
