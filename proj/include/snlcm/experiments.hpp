#ifndef SNLCM_EXPERIMENTS_HPP
#define SNLCM_EXPERIMENTS_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "snlcm/ensemble.hpp"
#include "snlcm/lcm_ideal.hpp"
#include "snlcm/number_field.hpp"
#include "snlcm/parallel.hpp"
#include "snlcm/report.hpp"
#include "snlcm/splitting.hpp"

namespace snlcm {

// ---------------------------------------------------------------------------
// ray class data for principal moduli over class-number-one fields
// ---------------------------------------------------------------------------

class NonCoprimeResidue : public std::runtime_error {
public:
    explicit NonCoprimeResidue(const std::string& what) : std::runtime_error(what) {}
};

/// One class: orbit of a unit of (O/nu)^x under multiplication by the torsion
/// units, together with the smallest norm of an integral element in it.
struct RayClass {
    FieldElement representative;
    mpz_class min_norm; // N_c
};

struct RayClassData {
    FieldElement nu;
    mpz_class residue_count; // |O/nu|
    std::vector<FieldElement> units;
    std::vector<PrimeIdeal> nu_primes;
    detail::Mat hnf; // row basis of (nu)
    std::vector<RayClass> classes;
    std::map<std::vector<mpz_class>, size_t> class_of_residue;

    size_t h() const { return classes.size(); }

    /// (1/h) sum over classes of 1/N_c.
    mpq_class constant() const {
        mpq_class s = 0;
        for (const auto& c : classes) s += mpq_class(1) / mpq_class(c.min_norm);
        return s / mpq_class(static_cast<unsigned long>(classes.size()));
    }
};

namespace detail {

inline std::vector<mpz_class> hnf_reduce(const Mat& H, std::vector<mpz_class> x) {
    for (size_t j = 0; j < H.size(); ++j) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), x[j].get_mpz_t(), H[j][j].get_mpz_t());
        if (q != 0)
            for (size_t k = j; k < H.size(); ++k) x[k] -= q * H[j][k];
    }
    return x;
}

inline bool is_imaginary_quadratic_pid(const NumberField& K) {
    if (K.degree() != 2 || K.disc() >= 0) return false;
    // the nine imaginary quadratic PID discriminants
    for (long dd : {-3, -4, -7, -8, -11, -19, -43, -67, -163})
        if (K.disc() == dd) return true;
    return false;
}

} // namespace detail

/// Residue classes of (O/nu)^x modulo the image of the unit group, each with
/// the smallest norm of an element congruent to it (found by lattice
/// enumeration in increasing norm; the first hit is minimal).
inline RayClassData ray_class_data(const NumberField& K, const FieldElement& nu) {
    if (!(K.is_rationals() || detail::is_imaginary_quadratic_pid(K)))
        throw UnsupportedFieldError(
            "ray class data needs Q or an imaginary quadratic PID, got " + K.spec_string());
    if (K.is_zero(nu)) throw std::invalid_argument("modulus must be nonzero");
    RayClassData out;
    out.nu = nu;
    out.residue_count = abs(K.norm(nu));
    if (out.residue_count == 1) throw std::invalid_argument("modulus must not be a unit");
    if (out.residue_count > 1000000)
        throw UnsupportedFieldError("modulus norm too large for residue enumeration");

    detail::Mat rows;
    FieldElement cur = nu;
    for (unsigned i = 0; i < K.degree(); ++i) {
        rows.push_back(cur.coords);
        if (i + 1 < K.degree()) cur = K.mul(cur, K.theta());
    }
    out.hnf = detail::hnf_rows(std::move(rows), K.degree());
    for (const auto& entry : factor(out.residue_count).entries)
        for (const auto& P : K.factor_prime(entry.prime))
            if (K.valuation(nu, P) >= 1) out.nu_primes.push_back(P);
    out.units = K.torsion_units();

    const auto coprime = [&](const FieldElement& r) {
        for (const auto& P : out.nu_primes)
            if (K.residue_field(P).is_zero(K.reduce(r, P))) return false;
        return true;
    };

    // walk the complete residue system in mixed radix over the HNF diagonal
    const unsigned d = K.degree();
    std::vector<mpz_class> x(d, 0);
    while (true) {
        FieldElement r = K.element(x);
        if (coprime(r) && !out.class_of_residue.count(x)) {
            std::set<std::vector<mpz_class>> orbit;
            for (const auto& u : out.units)
                orbit.insert(detail::hnf_reduce(out.hnf, K.mul(u, r).coords));
            const size_t idx = out.classes.size();
            out.classes.push_back({K.element(*orbit.begin()), 0});
            for (const auto& member : orbit) out.class_of_residue.emplace(member, idx);
        }
        unsigned j = 0;
        while (j < d) {
            ++x[j];
            if (x[j] < out.hnf[j][j]) break;
            x[j] = 0;
            ++j;
        }
        if (j == d) break;
    }

    // minimal norms via enumeration in increasing norm
    size_t found = 0;
    mpz_class B = std::max(mpz_class(4), out.residue_count);
    while (found < out.classes.size()) {
        for (const auto& beta :
             K.elements_up_to_norm(B, ElementEnumMode::OrbitRepresentatives)) {
            auto it = out.class_of_residue.find(detail::hnf_reduce(out.hnf, beta.coords));
            if (it == out.class_of_residue.end()) continue;
            RayClass& cls = out.classes[it->second];
            if (cls.min_norm == 0) {
                cls.min_norm = abs(K.norm(beta));
                ++found;
            }
        }
        if (found < out.classes.size()) {
            B *= 4;
            if (B > 1000000000) throw std::logic_error("ray class minimal norms not found");
        }
    }
    return out;
}

/// Class index of an element coprime to the modulus; NonCoprimeResidue
/// otherwise.
inline size_t ray_class_index(const RayClassData& data, const NumberField& K,
                              const FieldElement& x) {
    auto it = data.class_of_residue.find(detail::hnf_reduce(data.hnf, x.coords));
    if (it == data.class_of_residue.end())
        throw NonCoprimeResidue("element " + K.to_string(x) +
                                " shares a factor with the modulus");
    return it->second;
}

// ---------------------------------------------------------------------------
// Psi = log |N(lcm of f(lambda))|
// ---------------------------------------------------------------------------

struct PsiValue {
    double psi = 0;   // log |N(lcm)|
    double log_p = 0; // sum of log |N(f(lambda))|
    uint64_t lambda_count = 0;
    uint64_t zeros_skipped = 0;
    std::map<unsigned, uint64_t> exponent_histogram;
    LcmAccumulator acc;
};

/// Accumulate f(lambda) over lambda of norm <= M for each checkpoint M in
/// ascending order, in one pass over the element enumeration.
inline std::vector<PsiValue> psi_checkpoints(const NumberField& K, const PolynomialSample& f,
                                             std::vector<uint64_t> checkpoints,
                                             ElementEnumMode mode,
                                             const FactorConfig& cfg = {}) {
    if (checkpoints.empty()) throw std::invalid_argument("no checkpoints");
    std::sort(checkpoints.begin(), checkpoints.end());
    const uint64_t maxM = checkpoints.back();
    auto elems = K.elements_up_to_norm(mpz_class(maxM), mode);
    std::vector<PsiValue> out;
    LcmAccumulator acc;
    double log_p = 0;
    uint64_t zeros = 0, count = 0;
    size_t ei = 0;
    for (uint64_t M : checkpoints) {
        while (ei < elems.size() && abs(K.norm(elems[ei])) <= static_cast<unsigned long>(M)) {
            const FieldElement value = sample_eval(K, f, elems[ei]);
            ++count;
            if (K.is_zero(value)) {
                ++zeros; // lcm ranges over nonzero values only
            } else {
                accumulate(K, acc, value, cfg);
                log_p += std::log(std::abs(mpz_get_d(K.norm(value).get_mpz_t())));
            }
            ++ei;
        }
        PsiValue v;
        v.psi = acc.log_norm();
        v.log_p = log_p;
        v.lambda_count = count;
        v.zeros_skipped = zeros;
        v.exponent_histogram = acc.exponent_histogram();
        v.acc = acc;
        out.push_back(std::move(v));
    }
    return out;
}

inline PsiValue compute_psi(const NumberField& K, const PolynomialSample& f, uint64_t M,
                            ElementEnumMode mode, const FactorConfig& cfg = {}) {
    return psi_checkpoints(K, f, {M}, mode, cfg)[0];
}

// ---------------------------------------------------------------------------
// experiment runners
// ---------------------------------------------------------------------------

namespace detail {

inline std::string mpq_str(const mpq_class& q) { return q.get_str(); }

inline double mpq_dbl(const mpq_class& q) { return mpq_get_d(q.get_mpq_t()); }

/// First monic squarefree degree-n polynomial in the fixed enumeration order.
inline FqPoly first_squarefree_poly(const FiniteField& F, unsigned n) {
    mpz_class total;
    mpz_pow_ui(total.get_mpz_t(), F.order().get_mpz_t(), n);
    for (uint64_t idx = 0;; ++idx) {
        if (mpz_cmp_ui(total.get_mpz_t(), idx) <= 0) break;
        FqPoly g = poly_from_index(F, n, idx);
        if (poly_splitting_counts(F, g)) return g;
    }
    throw std::logic_error("no squarefree polynomial found"); // q^n >= 2 always has one
}

/// Exhaustive coefficient enumeration: index -> polynomial with all n*d
/// coordinates in [-N, N].
inline PolynomialSample sample_from_index(const NumberField& K, unsigned n, const mpz_class& N,
                                          uint64_t idx) {
    const uint64_t span = to_u64(2 * N + 1);
    PolynomialSample f;
    f.n = n;
    f.height_bound = N;
    for (unsigned k = 0; k < n; ++k) {
        std::vector<mpz_class> c;
        for (unsigned i = 0; i < K.degree(); ++i) {
            c.push_back(mpz_class(idx % span) - N);
            idx /= span;
        }
        f.coeffs.push_back(K.element(std::move(c)));
    }
    return f;
}

inline uint64_t exhaustive_count(const NumberField& K, unsigned n, const mpz_class& N) {
    mpz_class total;
    mpz_pow_ui(total.get_mpz_t(), mpz_class(2 * N + 1).get_mpz_t(),
               static_cast<unsigned long>(n) * K.degree());
    if (total > 10000000)
        throw BudgetExceeded("exhaustive mode needs (2N+1)^(n d) <= 1e7, got " + total.get_str());
    return to_u64(total);
}

inline nlohmann::json base_params(const NumberField& K, uint64_t seed, unsigned workers) {
    return {{"field", K.spec_string()}, {"seed", seed}, {"workers", workers}};
}

} // namespace detail

/// Residue equidistribution: empirical frequency of f = g mod P against the
/// 1/q^n prediction, per prime.
inline ExperimentReport run_lemma11(const NumberField& K, unsigned n, const mpz_class& N,
                                    const std::vector<mpz_class>& rational_primes,
                                    uint64_t samples, uint64_t seed, double xi, bool exhaustive,
                                    unsigned workers) {
    ExperimentReport rep;
    rep.experiment = "lemma11";
    rep.parameters = detail::base_params(K, seed, workers);
    rep.parameters["n"] = n;
    rep.parameters["N"] = N.get_str();
    rep.parameters["samples"] = samples;
    rep.parameters["xi"] = xi;
    rep.parameters["exhaustive"] = exhaustive;
    {
        std::vector<std::string> ps;
        for (const auto& p : rational_primes) ps.push_back(p.get_str());
        rep.parameters["primes"] = ps;
    }
    rep.csv_header = {"p",         "local_factor", "q", "residue_poly", "samples",
                      "matches",   "frequency",    "reference", "z_score",
                      "range_guard_ok"};

    std::vector<PrimeIdeal> primes;
    for (const auto& p : rational_primes)
        for (const auto& P : K.factor_prime(p)) primes.push_back(P);

    std::vector<FqPoly> targets;
    for (const auto& P : primes)
        targets.push_back(detail::first_squarefree_poly(K.residue_field(P), n));

    const uint64_t total = exhaustive ? detail::exhaustive_count(K, n, N) : samples;
    std::vector<std::vector<uint8_t>> match(total, std::vector<uint8_t>(primes.size(), 0));
    parallel_for(total, workers, [&](uint64_t i) {
        CounterRng rng(seed, i);
        PolynomialSample f =
            exhaustive ? detail::sample_from_index(K, n, N, i) : sample_polynomial(K, n, N, rng);
        for (size_t j = 0; j < primes.size(); ++j) {
            FqPoly red = reduce_sample(K, f, primes[j]);
            if (poly_eq(K.residue_field(primes[j]), red, targets[j])) match[i][j] = 1;
        }
    });

    double max_abs_z = 0;
    nlohmann::json per_prime = nlohmann::json::array();
    for (size_t j = 0; j < primes.size(); ++j) {
        const PrimeIdeal& P = primes[j];
        uint64_t hits = 0;
        for (uint64_t i = 0; i < total; ++i) hits += match[i][j];
        mpz_class qn;
        mpz_pow_ui(qn.get_mpz_t(), P.norm.get_mpz_t(), n);
        const double ref = 1.0 / mpz_get_d(qn.get_mpz_t());
        const bool guard_ok =
            mpz_get_d(P.norm.get_mpz_t()) <
            std::pow(mpz_get_d(N.get_mpz_t()), static_cast<double>(K.degree()) * xi / n);
        if (!guard_ok)
            rep.warnings.push_back("prime of norm " + P.norm.get_str() +
                                   " violates the range guard q < N^(d xi / n)");
        if (total == 0) continue; // empty report, nothing to tabulate
        const double freq = static_cast<double>(hits) / static_cast<double>(total);
        const double se = std::sqrt(ref * (1 - ref) / static_cast<double>(total));
        const double z = (freq - ref) / se;
        max_abs_z = std::max(max_abs_z, std::abs(z));
        rep.rows.push_back({P.p.get_str(), ipoly_to_string(P.local_factor), P.norm.get_str(),
                            poly_to_string(K.residue_field(P), targets[j]), std::to_string(total),
                            std::to_string(hits), format_double(freq), format_double(ref),
                            format_double(z), guard_ok ? "1" : "0"});
        per_prime.push_back({{"p", P.p.get_str()},
                             {"q", P.norm.get_str()},
                             {"matches", hits},
                             {"frequency", freq},
                             {"reference", ref},
                             {"z", z}});
    }
    rep.summary = {{"samples", total}, {"per_prime", per_prime}, {"max_abs_z", max_abs_z}};
    return rep;
}

/// Per-prime mean and variance of the splitting-type indicator against the
/// exact census probability and its two-term expansion.
inline ExperimentReport run_indicator_moments(const NumberField& K, unsigned n,
                                              const mpz_class& N, const SplittingType& r,
                                              uint64_t x, uint64_t samples, uint64_t seed,
                                              double xi, bool exhaustive, unsigned workers) {
    r.check(n);
    ExperimentReport rep;
    rep.experiment = "moments";
    rep.parameters = detail::base_params(K, seed, workers);
    rep.parameters["n"] = n;
    rep.parameters["N"] = N.get_str();
    rep.parameters["r"] = r.to_string();
    rep.parameters["x"] = x;
    rep.parameters["samples"] = samples;
    rep.parameters["xi"] = xi;
    rep.parameters["exhaustive"] = exhaustive;
    rep.csv_header = {"p",        "local_factor",      "q",
                      "samples",  "mean",              "variance",
                      "ref_mean_exact", "ref_mean_expansion", "ref_var_exact",
                      "ref_var_expansion", "z_mean"};

    const double guard = std::pow(mpz_get_d(N.get_mpz_t()),
                                  static_cast<double>(K.degree()) * xi / (n + 1));
    if (static_cast<double>(x) >= guard)
        rep.warnings.push_back("x violates the range guard x < N^(d xi / (n+1))");

    std::vector<PrimeIdeal> primes;
    for (const auto& P : K.primes_up_to(x))
        if (!P.ramified()) primes.push_back(P); // Frobenius undefined at ramified primes

    const RationalPoly cen = census(n, r);
    const mpq_class delta = census_density(n, r);
    const mpq_class c_r = n >= 2 ? census_subleading(n, r) : mpq_class(0);

    const uint64_t total = exhaustive ? detail::exhaustive_count(K, n, N) : samples;
    std::vector<std::vector<uint8_t>> match(total, std::vector<uint8_t>(primes.size(), 0));
    parallel_for(total, workers, [&](uint64_t i) {
        CounterRng rng(seed, i);
        PolynomialSample f =
            exhaustive ? detail::sample_from_index(K, n, N, i) : sample_polynomial(K, n, N, rng);
        for (size_t j = 0; j < primes.size(); ++j) {
            auto t = frobenius_type(K, f, primes[j]);
            if (t && *t == r) match[i][j] = 1;
        }
    });

    double max_abs_z = 0;
    for (size_t j = 0; j < primes.size() && total > 0; ++j) {
        const PrimeIdeal& P = primes[j];
        uint64_t hits = 0;
        for (uint64_t i = 0; i < total; ++i) hits += match[i][j];
        const mpq_class q(P.norm);
        mpz_class qn;
        mpz_pow_ui(qn.get_mpz_t(), P.norm.get_mpz_t(), n);
        const mpq_class ref_exact = cen.eval(q) / mpq_class(qn);
        const mpq_class ref_expansion = delta + c_r / q;
        const mpq_class var_exact = ref_exact * (1 - ref_exact);
        const mpq_class var_expansion = (delta - delta * delta) + c_r * (1 - 2 * delta) / q;
        const double mean = static_cast<double>(hits) / static_cast<double>(total);
        const double variance =
            total > 1 ? static_cast<double>(hits) * (total - hits) /
                            (static_cast<double>(total) * (total - 1))
                      : 0.0;
        const double se =
            std::sqrt(detail::mpq_dbl(var_exact) / static_cast<double>(total));
        const double z = se > 0 ? (mean - detail::mpq_dbl(ref_exact)) / se : 0.0;
        max_abs_z = std::max(max_abs_z, std::abs(z));
        rep.rows.push_back({P.p.get_str(), ipoly_to_string(P.local_factor), P.norm.get_str(),
                            std::to_string(total), format_double(mean), format_double(variance),
                            format_double(detail::mpq_dbl(ref_exact)),
                            format_double(detail::mpq_dbl(ref_expansion)),
                            format_double(detail::mpq_dbl(var_exact)),
                            format_double(detail::mpq_dbl(var_expansion)), format_double(z)});
    }
    rep.summary = {{"samples", total},
                   {"primes", primes.size()},
                   {"delta", detail::mpq_str(delta)},
                   {"c_r", detail::mpq_str(c_r)},
                   {"max_abs_z", max_abs_z}};
    return rep;
}

/// Sample mean of pi_{f,r}(x) over certified-S_n samples against
/// delta pi_K(x) + C_r log log x.
inline ExperimentReport run_expectation_pi(const NumberField& K, unsigned n, const mpz_class& N,
                                           const SplittingType& r, uint64_t x, uint64_t samples,
                                           uint64_t seed, uint64_t budget, double xi,
                                           unsigned workers) {
    r.check(n);
    if (x < 16) throw std::invalid_argument("x must be >= 16 so that log log x is positive");
    ExperimentReport rep;
    rep.experiment = "expectation-pi";
    rep.parameters = detail::base_params(K, seed, workers);
    rep.parameters["n"] = n;
    rep.parameters["N"] = N.get_str();
    rep.parameters["r"] = r.to_string();
    rep.parameters["x"] = x;
    rep.parameters["samples"] = samples;
    rep.parameters["budget"] = budget;
    rep.parameters["xi"] = xi;
    rep.csv_header = {"sample", "certified", "pi_count"};

    const double guard = std::pow(mpz_get_d(N.get_mpz_t()),
                                  static_cast<double>(K.degree()) * xi / (n + 1));
    if (static_cast<double>(x) >= guard)
        rep.warnings.push_back("x violates the range guard x < N^(d xi / (n+1))");

    const auto primes = K.primes_up_to(x);
    std::vector<uint8_t> certified(samples, 0);
    std::vector<uint64_t> pi(samples, 0);
    parallel_for(samples, workers, [&](uint64_t i) {
        CounterRng rng(seed, i);
        PolynomialSample f = sample_polynomial(K, n, N, rng);
        certified[i] = certify_sn(K, f, budget).certified() ? 1 : 0;
        uint64_t count = 0;
        for (const auto& P : primes) {
            auto t = frobenius_type(K, f, P);
            if (t && *t == r) ++count;
        }
        pi[i] = count;
    });

    uint64_t m = 0;
    double sum = 0, sumsq = 0;
    for (uint64_t i = 0; i < samples; ++i) {
        rep.rows.push_back({std::to_string(i), certified[i] ? "1" : "0", std::to_string(pi[i])});
        if (certified[i]) {
            ++m;
            sum += static_cast<double>(pi[i]);
            sumsq += static_cast<double>(pi[i]) * static_cast<double>(pi[i]);
        }
    }
    const mpq_class delta = census_density(n, r);
    const mpq_class c_r = n >= 2 ? census_subleading(n, r) : mpq_class(0);
    const double mean = m ? sum / static_cast<double>(m) : 0.0;
    const double var = m > 1 ? (sumsq - sum * sum / static_cast<double>(m)) /
                                   static_cast<double>(m - 1)
                             : 0.0;
    const double se = m ? std::sqrt(var / static_cast<double>(m)) : 0.0;
    const double leading = detail::mpq_dbl(delta) * static_cast<double>(primes.size());
    const double reference =
        leading + detail::mpq_dbl(c_r) * std::log(std::log(static_cast<double>(x)));
    rep.summary = {{"samples", samples},
                   {"certified", m},
                   {"pi_K", primes.size()},
                   {"delta", detail::mpq_str(delta)},
                   {"c_r", detail::mpq_str(c_r)},
                   {"mean", mean},
                   {"stddev", std::sqrt(var)},
                   {"standard_error", se},
                   {"reference", reference},
                   {"reference_leading", leading},
                   {"ratio_to_leading", leading > 0 ? mean / leading : 0.0}};
    return rep;
}

/// Mean and spread of Psi over certified samples for each M checkpoint,
/// against (n-1) |Lambda(M)| log M.
inline ExperimentReport run_psi_ensemble(const NumberField& K, unsigned n, const mpz_class& N,
                                         std::vector<uint64_t> m_list, uint64_t samples,
                                         uint64_t seed, uint64_t budget, ElementEnumMode mode,
                                         unsigned workers,
                                         const PolynomialSample* fixed_poly = nullptr) {
    if (n < 2)
        throw std::invalid_argument(
            "degree must be >= 2; for linear polynomials use the `linear` experiment");
    if (m_list.empty()) throw std::invalid_argument("need at least one M value");
    std::sort(m_list.begin(), m_list.end());
    m_list.erase(std::unique(m_list.begin(), m_list.end()), m_list.end());

    ExperimentReport rep;
    rep.experiment = "psi-ensemble";
    rep.parameters = detail::base_params(K, seed, workers);
    rep.parameters["n"] = n;
    rep.parameters["N"] = N.get_str();
    rep.parameters["M"] = m_list;
    rep.parameters["samples"] = samples;
    rep.parameters["budget"] = budget;
    rep.parameters["enumeration"] =
        mode == ElementEnumMode::AllUnits ? "all-units" : "orbit";
    if (fixed_poly) rep.parameters["poly"] = sample_to_string(K, *fixed_poly);
    rep.csv_header = {"M", "sample", "certified", "psi", "log_p", "lambda_count"};

    if (n == 2)
        rep.warnings.push_back("the asymptotic reference assumes degree >= 3");
    {
        const double M = static_cast<double>(m_list.back());
        const double Nd = mpz_get_d(N.get_mpz_t());
        if (Nd < M || Nd * std::log(std::log(std::max(M, 16.0))) > M * std::log(M))
            rep.warnings.push_back(
                "N is outside the window M (log M)^l << N << M log M / log log M");
    }

    std::vector<uint8_t> certified(samples, 0);
    std::vector<std::vector<PsiValue>> values(samples);
    parallel_for(samples, workers, [&](uint64_t i) {
        CounterRng rng(seed, i);
        PolynomialSample f = fixed_poly ? *fixed_poly : sample_polynomial(K, n, N, rng);
        certified[i] = certify_sn(K, f, budget).certified() ? 1 : 0;
        // a user-supplied polynomial is measured unconditionally
        if (certified[i] || fixed_poly) values[i] = psi_checkpoints(K, f, m_list, mode);
    });

    nlohmann::json per_m = nlohmann::json::array();
    std::vector<double> ratios;
    double sigma_over_mean_last = 0;
    for (size_t mi = 0; mi < m_list.size(); ++mi) {
        uint64_t used = 0, lambda = 0;
        double sum = 0, sumsq = 0;
        for (uint64_t i = 0; i < samples; ++i) {
            if (values[i].empty()) continue;
            const PsiValue& v = values[i][mi];
            rep.rows.push_back({std::to_string(m_list[mi]), std::to_string(i),
                                certified[i] ? "1" : "0", format_double(v.psi),
                                format_double(v.log_p), std::to_string(v.lambda_count)});
            ++used;
            lambda = v.lambda_count;
            sum += v.psi;
            sumsq += v.psi * v.psi;
        }
        if (used == 0) continue;
        const double mean = sum / static_cast<double>(used);
        const double var =
            used > 1 ? (sumsq - sum * sum / static_cast<double>(used)) /
                           static_cast<double>(used - 1)
                     : 0.0;
        const double reference = static_cast<double>(n - 1) * static_cast<double>(lambda) *
                                 std::log(static_cast<double>(m_list[mi]));
        const double ratio = mean / reference;
        const double som = mean > 0 ? std::sqrt(var) / mean : 0.0;
        ratios.push_back(ratio);
        sigma_over_mean_last = som;
        per_m.push_back({{"M", m_list[mi]},
                         {"lambda_count", lambda},
                         {"used_samples", used},
                         {"mean_psi", mean},
                         {"variance", var},
                         {"sigma_over_mean", som},
                         {"reference", reference},
                         {"ratio", ratio}});
    }
    bool approaching_one = true;
    for (size_t i = 1; i < ratios.size(); ++i)
        if (std::abs(1 - ratios[i]) > std::abs(1 - ratios[i - 1])) approaching_one = false;
    uint64_t certified_count = 0;
    for (uint8_t c : certified) certified_count += c;
    rep.summary = {{"samples", samples},
                   {"certified", certified_count},
                   {"per_M", per_m},
                   {"ratios", ratios},
                   {"approaching_one", approaching_one},
                   {"sigma_over_mean_last", sigma_over_mean_last}};
    return rep;
}

/// Exact BKS-style constant for f(X) = kX + h over Q:
/// (k/phi(k)) sum_{1<=j<=k, (j,k)=1} 1/j.
inline mpq_class bks_linear_constant(const mpz_class& k) {
    if (k < 1) throw std::invalid_argument("modulus must be >= 1");
    mpq_class s = 0;
    for (mpz_class j = 1; j <= k; ++j)
        if (gcd(j, k) == 1) s += mpq_class(1) / mpq_class(j);
    return s * mpq_class(k) / mpq_class(euler_phi(k));
}

/// Growth of log |N(lcm)| for the linear family eta alpha + nu lambda.
/// value mode: accumulate the ideals (beta) of norm <= M lying in the ray
/// class of alpha mod nu; slope log|N(lcm)| / M approaches (1/h) sum 1/N_c.
/// classical mode (Q only): accumulate f(1), ..., f(M) for f = nu X + alpha;
/// the slope approaches (k/phi(k)) sum_{(j,k)=1} 1/j.
inline ExperimentReport run_linear_case(const NumberField& K, const FieldElement& alpha,
                                        const FieldElement& nu, uint64_t M, bool classical,
                                        const FactorConfig& cfg = {}) {
    ExperimentReport rep;
    rep.experiment = "linear";
    rep.parameters = {{"field", K.spec_string()},
                      {"alpha", K.to_string(alpha)},
                      {"nu", K.to_string(nu)},
                      {"M", M},
                      {"mode", classical ? "classical" : "value"}};
    rep.csv_header = {"checkpoint", "ideals_accumulated", "log_norm", "slope"};
    if (K.is_zero(nu)) throw std::invalid_argument("nu must be nonzero");

    const mpz_class nu_norm = abs(K.norm(nu));
    const bool nu_unit = nu_norm == 1;
    std::optional<RayClassData> rcd;
    std::optional<size_t> target_class;
    if (!nu_unit) {
        rcd = ray_class_data(K, nu);
        target_class = ray_class_index(*rcd, K, alpha); // throws if not coprime
    }

    LcmAccumulator acc;
    std::vector<uint64_t> checkpoints;
    for (int j = 1; j <= 10; ++j) {
        const uint64_t c = M * j / 10;
        if (c > 0 && (checkpoints.empty() || checkpoints.back() != c)) checkpoints.push_back(c);
    }
    size_t ci = 0;
    const auto emit_checkpoint = [&] {
        const double ln = acc.log_norm();
        rep.rows.push_back({std::to_string(checkpoints[ci]), std::to_string(acc.element_count()),
                            format_double(ln),
                            format_double(ln / static_cast<double>(checkpoints[ci]))});
        ++ci;
    };

    if (classical) {
        if (!K.is_rationals())
            throw std::invalid_argument("classical mode is the K = Q normalization");
        const mpz_class k = abs(nu.coords[0]), h = alpha.coords[0];
        if (k != 1 && gcd(h, k) != 1) throw NonCoprimeResidue("alpha and nu must be coprime");
        for (uint64_t lam = 1; lam <= M; ++lam) {
            mpz_class v = h + nu.coords[0] * static_cast<unsigned long>(lam);
            if (v != 0) accumulate(K, acc, K.from_int(v), cfg);
            while (ci < checkpoints.size() && checkpoints[ci] <= lam) emit_checkpoint();
        }
    } else {
        // the enumeration is sorted by norm, so a checkpoint c is complete as
        // soon as an element of norm > c comes up
        for (const auto& beta :
             K.elements_up_to_norm(mpz_class(M), ElementEnumMode::OrbitRepresentatives)) {
            const uint64_t nb = detail::to_u64(abs(K.norm(beta)));
            while (ci < checkpoints.size() && checkpoints[ci] < nb) emit_checkpoint();
            bool in_class = nu_unit;
            if (!nu_unit) {
                auto it =
                    rcd->class_of_residue.find(detail::hnf_reduce(rcd->hnf, beta.coords));
                in_class = it != rcd->class_of_residue.end() && it->second == *target_class;
            }
            if (in_class) accumulate(K, acc, beta, cfg);
        }
        while (ci < checkpoints.size()) emit_checkpoint();
    }

    const double ln = acc.log_norm();
    const double slope = ln / static_cast<double>(M);
    mpq_class constant;
    nlohmann::json classes = nlohmann::json::array();
    if (classical) {
        constant = bks_linear_constant(abs(nu.coords[0]));
    } else if (nu_unit) {
        constant = 1;
    } else {
        constant = rcd->constant();
        for (const auto& c : rcd->classes)
            classes.push_back({{"representative", K.to_string(c.representative)},
                               {"min_norm", c.min_norm.get_str()}});
    }
    rep.summary = {{"log_norm", ln},
                   {"slope", slope},
                   {"constant", detail::mpq_str(constant)},
                   {"constant_value", detail::mpq_dbl(constant)},
                   {"relative_error", std::abs(slope - detail::mpq_dbl(constant)) /
                                          detail::mpq_dbl(constant)},
                   {"h", nu_unit || classical ? 1 : rcd->h()},
                   {"classes", classes},
                   {"ideals_accumulated", acc.element_count()}};
    if (K.is_rationals() && !classical && !nu_unit)
        rep.summary["bks_constant"] = detail::mpq_str(bks_linear_constant(abs(nu.coords[0])));
    return rep;
}

/// Census tables: exact polynomial, density, subleading coefficients and the
/// optional brute-force oracle column.
inline ExperimentReport run_census(unsigned n, const std::vector<mpz_class>& qs, bool oracle,
                                   uint64_t enumeration_budget = 10000000) {
    ExperimentReport rep;
    rep.experiment = "census";
    {
        std::vector<std::string> qstr;
        for (const auto& q : qs) qstr.push_back(q.get_str());
        rep.parameters = {{"n", n}, {"q", qstr}, {"oracle", oracle}};
    }
    rep.csv_header = {"n",     "type",       "q",          "census_poly", "census_value",
                      "delta", "subleading", "subleading_closed", "brute_count"};
    const auto types = all_types(n);
    bool all_match = true;
    for (const auto& q : qs) {
        auto [p, f] = prime_power_decompose(q);
        std::map<SplittingType, mpz_class> tally;
        if (oracle) {
            FiniteField F = FiniteField::with_canonical_modulus(detail::to_u64(p), f);
            tally = brute_force_census(F, n, enumeration_budget);
        }
        for (const auto& r : types) {
            const RationalPoly cen = census(n, r);
            const mpq_class val = cen.eval(mpq_class(q));
            if (val.get_den() != 1) throw std::logic_error("census value not integral");
            std::string brute;
            if (oracle) {
                mpz_class b = tally.count(r) ? tally.at(r) : mpz_class(0);
                brute = b.get_str();
                if (b != val.get_num()) all_match = false;
            }
            rep.rows.push_back(
                {std::to_string(n), r.to_string(), q.get_str(), cen.to_string(),
                 val.get_num().get_str(), detail::mpq_str(census_density(n, r)),
                 n >= 2 ? detail::mpq_str(census_subleading(n, r)) : "",
                 n >= 2 ? detail::mpq_str(census_subleading_closed_form(n, r)) : "", brute});
        }
    }
    rep.summary = {{"types", types.size()}, {"oracle", oracle}, {"oracle_all_match", all_match}};
    return rep;
}

/// Certification report: a single polynomial or a sampled ensemble.
inline ExperimentReport run_certify(const NumberField& K, unsigned n, const mpz_class& N,
                                    uint64_t samples, uint64_t budget, uint64_t seed,
                                    unsigned workers,
                                    const PolynomialSample* fixed_poly = nullptr) {
    ExperimentReport rep;
    rep.experiment = "certify";
    rep.parameters = detail::base_params(K, seed, workers);
    rep.parameters["budget"] = budget;
    rep.csv_header = {"sample", "poly",          "status",       "primes_examined",
                      "ncycle_p", "n1cycle_p", "transposition_p"};
    const auto row_of = [&](uint64_t idx, const PolynomialSample& f, const SnCertificate& c) {
        rep.rows.push_back(
            {std::to_string(idx), sample_to_string(K, f),
             c.certified() ? "CertifiedSn" : "Unknown", std::to_string(c.primes_examined),
             c.n_cycle ? c.n_cycle->prime.p.get_str() : "",
             c.n1_cycle ? c.n1_cycle->prime.p.get_str() : "",
             c.transposition ? c.transposition->prime.p.get_str() : ""});
    };
    if (fixed_poly) {
        rep.parameters["poly"] = sample_to_string(K, *fixed_poly);
        SnCertificate c = certify_sn(K, *fixed_poly, budget);
        row_of(0, *fixed_poly, c);
        rep.summary = {{"certified", c.certified()}, {"primes_examined", c.primes_examined}};
        return rep;
    }
    rep.parameters["n"] = n;
    rep.parameters["N"] = N.get_str();
    rep.parameters["samples"] = samples;
    std::vector<SnCertificate> certs(samples);
    std::vector<PolynomialSample> polys(samples);
    parallel_for(samples, workers, [&](uint64_t i) {
        CounterRng rng(seed, i);
        polys[i] = sample_polynomial(K, n, N, rng);
        certs[i] = certify_sn(K, polys[i], budget);
    });
    uint64_t certified = 0;
    for (uint64_t i = 0; i < samples; ++i) {
        row_of(i, polys[i], certs[i]);
        certified += certs[i].certified() ? 1 : 0;
    }
    const double frac =
        samples ? static_cast<double>(certified) / static_cast<double>(samples) : 0.0;
    rep.summary = {{"samples", samples},
                   {"certified", certified},
                   {"certified_fraction", frac},
                   {"standard_error",
                    samples ? std::sqrt(frac * (1 - frac) / static_cast<double>(samples)) : 0.0}};
    return rep;
}

/// Dedekind decomposition table over a range of rational primes.
inline ExperimentReport run_factor_field(const NumberField& K, uint64_t pmin, uint64_t pmax) {
    ExperimentReport rep;
    rep.experiment = "factor-field";
    rep.parameters = {{"field", K.spec_string()}, {"pmin", pmin}, {"pmax", pmax}};
    rep.csv_header = {"p", "index", "e", "f", "local_factor", "norm"};
    for (uint64_t p = std::max<uint64_t>(pmin, 2); p <= pmax; ++p) {
        if (!is_prime_u64(p)) continue;
        const auto primes = K.factor_prime(mpz_class(static_cast<unsigned long>(p)));
        for (size_t i = 0; i < primes.size(); ++i)
            rep.rows.push_back({std::to_string(p), std::to_string(i),
                                std::to_string(primes[i].e), std::to_string(primes[i].f),
                                ipoly_to_string(primes[i].local_factor),
                                primes[i].norm.get_str()});
    }
    rep.summary = {{"rows", rep.rows.size()}};
    return rep;
}

/// Single-polynomial Psi report; over Q an independent integer-lcm oracle can
/// be run alongside and compared exactly.
inline ExperimentReport run_psi_single(const NumberField& K, const PolynomialSample& f,
                                       uint64_t M, ElementEnumMode mode, bool oracle_check) {
    ExperimentReport rep;
    rep.experiment = "psi";
    rep.parameters = {{"field", K.spec_string()},
                      {"poly", sample_to_string(K, f)},
                      {"M", M},
                      {"enumeration", mode == ElementEnumMode::AllUnits ? "all-units" : "orbit"},
                      {"oracle", oracle_check}};
    rep.csv_header = {"M", "lambda_count", "zeros_skipped", "psi", "log_p", "primes_in_lcm"};
    if (oracle_check && (!K.is_rationals() || mode != ElementEnumMode::OrbitRepresentatives))
        throw std::invalid_argument(
            "the integer-lcm oracle applies over Q with the default enumeration only");
    PsiValue v = compute_psi(K, f, M, mode);
    rep.rows.push_back({std::to_string(M), std::to_string(v.lambda_count),
                        std::to_string(v.zeros_skipped), format_double(v.psi),
                        format_double(v.log_p), std::to_string(v.acc.exponents().size())});
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [exp, cnt] : v.exponent_histogram) hist[std::to_string(exp)] = cnt;
    rep.summary = {{"psi", v.psi},
                   {"log_p", v.log_p},
                   {"lambda_count", v.lambda_count},
                   {"zeros_skipped", v.zeros_skipped},
                   {"exponent_histogram", hist}};
    if (oracle_check) {
        mpz_class oracle = 1;
        for (uint64_t lam = 1; lam <= M; ++lam) {
            mpz_class value = abs(sample_eval(K, f, K.from_int(lam)).coords[0]);
            if (value != 0) oracle = lcm(oracle, value);
        }
        const bool match = oracle == v.acc.norm_value();
        rep.summary["oracle_log_lcm"] =
            format_double(std::log(mpz_get_d(oracle.get_mpz_t())));
        rep.summary["oracle_exact_match"] = match;
        if (!match) rep.warnings.push_back("accumulator disagrees with the integer lcm oracle");
    }
    return rep;
}

} // namespace snlcm

#endif
