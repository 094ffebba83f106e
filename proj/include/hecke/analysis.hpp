#ifndef HECKE_ANALYSIS_HPP
#define HECKE_ANALYSIS_HPP

#include "hecke/cyclotomic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace hecke {

// ---------------------------------------------------------------------------
// Deterministic worker pool
// ---------------------------------------------------------------------------

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Results must be
/// written by index; the first exception (lowest index) is rethrown.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn)
{
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t err_index = count;
    std::exception_ptr err;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (i < err_index) {
                    err_index = i;
                    err = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

// ---------------------------------------------------------------------------
// Thresholds
// ---------------------------------------------------------------------------

enum class ThresholdKind { thm1, thm2, thm3, atkin_serre_norm, cafn_g2 };

/// g(x) for thm2: 1/loglog x, c/log x, or constant/loglog x.
enum class GFunction { inv_loglog, c_over_log, scaled_inv_loglog };

inline const char* to_string(ThresholdKind k)
{
    switch (k) {
    case ThresholdKind::thm1: return "thm1";
    case ThresholdKind::thm2: return "thm2";
    case ThresholdKind::thm3: return "thm3";
    case ThresholdKind::atkin_serre_norm: return "atkin-serre-norm";
    case ThresholdKind::cafn_g2: return "cafnG2";
    }
    return "?";
}

inline const char* to_string(GFunction g)
{
    switch (g) {
    case GFunction::inv_loglog: return "inv-loglog";
    case GFunction::c_over_log: return "c-over-log";
    case GFunction::scaled_inv_loglog: return "scaled-inv-loglog";
    }
    return "?";
}

inline ThresholdKind parse_threshold_kind(const std::string& s)
{
    for (auto k : {ThresholdKind::thm1, ThresholdKind::thm2, ThresholdKind::thm3, ThresholdKind::atkin_serre_norm,
                   ThresholdKind::cafn_g2}) {
        if (s == to_string(k)) return k;
    }
    throw DomainError("unknown threshold kind '" + s + "'");
}

inline GFunction parse_g_function(const std::string& s)
{
    for (auto g : {GFunction::inv_loglog, GFunction::c_over_log, GFunction::scaled_inv_loglog}) {
        if (s == to_string(g)) return g;
    }
    throw DomainError("unknown g function '" + s + "'");
}

struct ThresholdSpec {
    ThresholdKind kind = ThresholdKind::thm1;
    double epsilon = 0.1;
    GFunction g = GFunction::inv_loglog;
    /// thm3 constant.
    double c = 0.5;
    /// Constant of c-over-log and scaled-inv-loglog.
    double g_constant = 1.0;

    void validate() const
    {
        if (!(epsilon > 0)) throw DomainError("epsilon must be positive");
        if (!(c > 0 && c < 1)) throw DomainError("c must lie in (0, 1)");
        if (!(g_constant > 0)) throw DomainError("g constant must be positive");
    }

    double g_of(double x) const
    {
        const double lx = std::log(x);
        switch (g) {
        case GFunction::inv_loglog: return 1.0 / std::log(lx);
        case GFunction::c_over_log: return g_constant / lx;
        case GFunction::scaled_inv_loglog: return g_constant / std::log(lx);
        }
        return 0;
    }

    /// Threshold at x for the LPF kinds; for atkin-serre-norm, the bound on |a|
    /// in log form is given by log_norm_threshold().
    double value(double x, int weight) const
    {
        const double lx = std::log(x);
        switch (kind) {
        case ThresholdKind::thm1: return std::pow(lx, 0.125) * std::pow(std::log(lx), 0.375 - epsilon);
        case ThresholdKind::thm2: return std::pow(x, g_of(x));
        case ThresholdKind::thm3: return c * std::pow(x, 1.0 / 14) * std::pow(lx, 2.0 / 7);
        case ThresholdKind::cafn_g2: return std::pow(x, 1.0 / 70) * std::pow(lx, 1.0 / 7);
        case ThresholdKind::atkin_serre_norm: return std::exp(log_norm_threshold(x, weight));
        }
        return 0;
    }

    double log_norm_threshold(double x, int weight) const { return ((weight - 3) / 2.0 - epsilon) * std::log(x); }
};

/// Asymptotic density floor for the set of passing primes
/// (prime scans) or passing-or-zero integers (integer scans).
inline double asymptotic_density_floor(ThresholdKind kind, int weight)
{
    switch (kind) {
    case ThresholdKind::thm3: return 1.0 - 2.0 / (13.0 * (weight - 1));
    case ThresholdKind::cafn_g2: {
        const double c1 = (1.0 - 1.0 / (6.0 * (weight - 1))) * std::log(5.0 / 4.9);
        return 1.0 - std::exp(-c1);
    }
    default: return 1.0;
    }
}

// ---------------------------------------------------------------------------
// LPF density over primes and over integers
// ---------------------------------------------------------------------------

struct AnalysisOptions {
    FactorOptions factor{10000, 1u << 14, {}};
    /// Rho budget for short row lists (theorem6 report).
    u64 deep_rho_budget = 1u << 18;
    unsigned threads = 1;
    std::size_t failing_cap = 10000;
};

struct FailingEntry {
    u64 n = 0;
    Int coefficient;
    /// P(a) when the test is an LPF test.
    std::optional<LpfBound> lpf;
    double threshold = 0;
};

struct DensityReport {
    FormDescriptor form;
    u64 x_max = 0;
    ThresholdSpec threshold;
    bool over_primes = true;
    u64 scan_floor = 0;
    /// pi(x_max) for prime scans, x_max for integer scans.
    u64 total = 0;
    /// Below the scan floor.
    u64 excluded = 0;
    u64 scanned = 0;
    u64 zeros = 0;
    u64 passing = 0;
    u64 failing = 0;
    std::vector<FailingEntry> failing_list;
    bool failing_list_complete = true;
    /// density = density_num / scanned.
    u64 density_num = 0;
    double density = 0;
    double asymptotic_floor = 1;

    bool closed() const { return passing + failing + zeros == scanned && scanned + excluded == total; }
};

namespace detail {

/// Bracket on P(v) good enough to decide P(v) > threshold: budgeted first,
/// a full factorization only when the budgeted result is inconclusive.
inline LpfBound decide_lpf(const Int& v, double threshold, const FactorOptions& opt)
{
    LpfBound b = lpf_bound(factorize_bounded(v, opt));
    if (b.exact || cmp(b.lower, threshold) > 0) return b;
    return {largest_prime_factor(v, opt), true};
}

struct ScanOutcome {
    enum Kind { pass, fail, zero } kind = pass;
    std::optional<LpfBound> lpf;
    double threshold = 0;
};

inline void record(DensityReport& r, u64 n, const Int& a, const ScanOutcome& o, std::size_t cap)
{
    switch (o.kind) {
    case ScanOutcome::zero: ++r.zeros; break;
    case ScanOutcome::pass: ++r.passing; break;
    case ScanOutcome::fail:
        ++r.failing;
        if (r.failing_list.size() < cap) {
            r.failing_list.push_back({n, a, o.lpf, o.threshold});
        } else {
            r.failing_list_complete = false;
        }
        break;
    }
}

} // namespace detail

/// Density of primes 5 <= p <= x_max with a(p) != 0 passing the threshold.
/// 2 and 3 are excluded (loglog guard).
inline DensityReport lpf_density(const CoefficientTable& table, u64 x_max, const ThresholdSpec& spec,
                                 const AnalysisOptions& opt = {})
{
    spec.validate();
    if (x_max > table.limit()) throw LookupError("table limit " + std::to_string(table.limit()) + " below x_max");
    if (x_max < 2) throw DomainError("x_max must be at least 2");
    const PrimeSieve sieve(x_max);
    const auto& primes = sieve.primes();

    std::vector<detail::ScanOutcome> out(primes.size());
    parallel_for(primes.size(), opt.threads, [&](std::size_t i) {
        const u64 p = primes[i];
        if (p < 5) return;
        const Int& a = table.at(p);
        auto& o = out[i];
        o.threshold = spec.value(static_cast<double>(p), table.weight());
        if (sgn(a) == 0) {
            o.kind = detail::ScanOutcome::zero;
            return;
        }
        if (spec.kind == ThresholdKind::atkin_serre_norm) {
            const bool ok = log_abs(a) > spec.log_norm_threshold(static_cast<double>(p), table.weight());
            o.kind = ok ? detail::ScanOutcome::pass : detail::ScanOutcome::fail;
            return;
        }
        o.lpf = detail::decide_lpf(a, o.threshold, opt.factor);
        o.kind = cmp(o.lpf->lower, o.threshold) > 0 ? detail::ScanOutcome::pass : detail::ScanOutcome::fail;
    });

    DensityReport r;
    r.form = table.form();
    r.x_max = x_max;
    r.threshold = spec;
    r.over_primes = true;
    r.scan_floor = 5;
    r.total = primes.size();
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (primes[i] < 5) {
            ++r.excluded;
            continue;
        }
        ++r.scanned;
        detail::record(r, primes[i], table.at(primes[i]), out[i], opt.failing_cap);
    }
    r.density_num = r.passing;
    r.density = r.scanned ? static_cast<double>(r.passing) / static_cast<double>(r.scanned) : 0.0;
    r.asymptotic_floor = asymptotic_density_floor(spec.kind, table.weight());
    return r;
}

/// Density of n in [n_floor, x_max] with a(n) = 0 or P(a(n)) > threshold(n).
/// P(a(n)) is the maximum of P(a(p^e)) over the exact prime powers of n.
inline DensityReport natural_density_over_n(const CoefficientTable& table, u64 x_max, const ThresholdSpec& spec,
                                            u64 n_floor = 16, const AnalysisOptions& opt = {})
{
    spec.validate();
    if (x_max > table.limit()) throw LookupError("table limit " + std::to_string(table.limit()) + " below x_max");
    if (n_floor < 3) throw DomainError("scan floor must be at least 3");

    // Smallest prime factor sieve, then budgeted P(a(p^e)) for every prime power.
    std::vector<u64> spf(x_max + 1, 0);
    for (u64 i = 2; i <= x_max; ++i) {
        if (spf[i] != 0) continue;
        for (u64 j = i; j <= x_max; j += i) {
            if (spf[j] == 0) spf[j] = i;
        }
    }
    std::vector<u64> powers;
    for (u64 i = 2; i <= x_max; ++i) {
        u64 m = i;
        const u64 p = spf[i];
        while (m % p == 0) m /= p;
        if (m == 1) powers.push_back(i);
    }
    FactorOptions quick = opt.factor;
    std::vector<LpfBound> pp_bound(powers.size());
    parallel_for(powers.size(), opt.threads, [&](std::size_t i) {
        const Int& a = table.at(powers[i]);
        if (sgn(a) != 0) pp_bound[i] = lpf_bound(factorize_bounded(a, quick));
    });
    std::vector<std::size_t> pp_index(x_max + 1, 0);
    for (std::size_t i = 0; i < powers.size(); ++i) pp_index[powers[i]] = i;

    DensityReport r;
    r.form = table.form();
    r.x_max = x_max;
    r.threshold = spec;
    r.over_primes = false;
    r.scan_floor = n_floor;
    r.total = x_max;
    for (u64 n = 1; n <= x_max; ++n) {
        if (n < n_floor) {
            ++r.excluded;
            continue;
        }
        ++r.scanned;
        detail::ScanOutcome o;
        o.threshold = spec.value(static_cast<double>(n), table.weight());
        std::vector<std::size_t> parts;
        for (u64 m = n; m > 1;) {
            const u64 p = spf[m];
            u64 pe = 1;
            while (m % p == 0) {
                m /= p;
                pe *= p;
            }
            parts.push_back(pp_index[pe]);
        }
        bool zero = false;
        for (auto i : parts) zero = zero || sgn(table.at(powers[i])) == 0;
        Int value;
        if (zero) {
            o.kind = detail::ScanOutcome::zero;
        } else if (spec.kind == ThresholdKind::atkin_serre_norm) {
            double la = 0;
            for (auto i : parts) la += log_abs(table.at(powers[i]));
            o.kind = la > spec.log_norm_threshold(static_cast<double>(n), table.weight()) ? detail::ScanOutcome::pass
                                                                                            : detail::ScanOutcome::fail;
        } else {
            LpfBound best;
            for (auto i : parts) {
                if (pp_bound[i].lower > best.lower) best.lower = pp_bound[i].lower;
                best.exact = best.exact && pp_bound[i].exact;
            }
            if (!best.exact && cmp(best.lower, o.threshold) <= 0) {
                // Inconclusive: settle every inexact component.
                for (auto i : parts) {
                    if (!pp_bound[i].exact) pp_bound[i] = {largest_prime_factor(table.at(powers[i]), opt.factor), true};
                }
                best = {};
                for (auto i : parts) {
                    if (pp_bound[i].lower > best.lower) best.lower = pp_bound[i].lower;
                }
            }
            o.lpf = best;
            o.kind = cmp(best.lower, o.threshold) > 0 ? detail::ScanOutcome::pass : detail::ScanOutcome::fail;
        }
        if (o.kind == detail::ScanOutcome::fail && r.failing_list.size() < opt.failing_cap) value = coeff_at(table, n);
        detail::record(r, n, value, o, opt.failing_cap);
    }
    r.density_num = r.passing + r.zeros;
    r.density = r.scanned ? static_cast<double>(r.density_num) / static_cast<double>(r.scanned) : 0.0;
    r.asymptotic_floor = asymptotic_density_floor(spec.kind, table.weight());
    return r;
}

// ---------------------------------------------------------------------------
// Sato-Tate
// ---------------------------------------------------------------------------

/// Semicircle CDF on [-2, 2].
inline double sato_tate_cdf(double t)
{
    if (t <= -2) return 0;
    if (t >= 2) return 1;
    const double h = t / 2;
    return 0.5 + (std::asin(h) + h * std::sqrt(1 - h * h)) / M_PI;
}

struct SatoTateBin {
    double lo = 0;
    double hi = 0;
    u64 count = 0;
    double empirical = 0;
    double expected = 0;
};

struct SatoTateReport {
    FormDescriptor form;
    u64 x_max = 0;
    u64 samples = 0;
    std::vector<SatoTateBin> bins;
    double ks = 0;
    double min_lambda = 0;
    double max_lambda = 0;
};

inline double normalized_coefficient(const Int& a, u64 p, int weight)
{
    return mpz_get_d(a.get_mpz_t()) / std::pow(static_cast<double>(p), (weight - 1) / 2.0);
}

inline SatoTateReport sato_tate_test(const CoefficientTable& table, u64 x_max, unsigned bins)
{
    if (bins < 2) throw DomainError("need at least 2 bins");
    if (x_max > table.limit()) throw LookupError("table limit " + std::to_string(table.limit()) + " below x_max");
    const PrimeSieve sieve(x_max);
    std::vector<double> lam;
    lam.reserve(sieve.primes().size());
    for (u64 p : sieve.primes()) lam.push_back(normalized_coefficient(table.at(p), p, table.weight()));

    SatoTateReport r;
    r.form = table.form();
    r.x_max = x_max;
    r.samples = lam.size();
    r.bins.resize(bins);
    for (unsigned b = 0; b < bins; ++b) {
        r.bins[b].lo = -2.0 + 4.0 * b / bins;
        r.bins[b].hi = -2.0 + 4.0 * (b + 1) / bins;
        r.bins[b].expected = sato_tate_cdf(r.bins[b].hi) - sato_tate_cdf(r.bins[b].lo);
    }
    for (double x : lam) {
        long b = static_cast<long>(std::floor((x + 2.0) / 4.0 * bins));
        b = std::clamp<long>(b, 0, bins - 1);
        ++r.bins[b].count;
    }
    for (auto& b : r.bins) b.empirical = lam.empty() ? 0.0 : static_cast<double>(b.count) / lam.size();

    std::sort(lam.begin(), lam.end());
    const double N = static_cast<double>(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) {
        const double F = sato_tate_cdf(lam[i]);
        r.ks = std::max({r.ks, F - i / N, (i + 1) / N - F});
    }
    if (!lam.empty()) {
        r.min_lambda = lam.front();
        r.max_lambda = lam.back();
    }
    return r;
}

// ---------------------------------------------------------------------------
// Congruence densities
// ---------------------------------------------------------------------------

struct CongruenceReport {
    FormDescriptor form;
    u64 x_max = 0;
    u64 d = 0;
    u64 pi_x = 0;
    /// Primes p | d left out of the counts.
    u64 excluded = 0;
    u64 pi_f = 0;
    u64 pi_f_star = 0;
    double ratio = 0;
    std::optional<double> reference;
};

inline CongruenceReport congruence_density(const CoefficientTable& table, u64 x_max, u64 d)
{
    if (d < 2) throw DomainError("d must be at least 2");
    if (x_max > table.limit()) throw LookupError("table limit " + std::to_string(table.limit()) + " below x_max");
    const PrimeSieve sieve(x_max);
    CongruenceReport r;
    r.form = table.form();
    r.x_max = x_max;
    r.d = d;
    r.pi_x = sieve.primes().size();
    for (u64 p : sieve.primes()) {
        if (d % p == 0) {
            ++r.excluded;
            continue;
        }
        const Int& a = table.at(p);
        if (!mpz_divisible_ui_p(a.get_mpz_t(), d)) continue;
        ++r.pi_f;
        r.pi_f_star += sgn(a) != 0;
    }
    r.ratio = r.pi_x ? static_cast<double>(r.pi_f) / r.pi_x : 0.0;
    if (is_prime_u64(d)) r.reference = 1.0 / static_cast<double>(d);
    return r;
}

// ---------------------------------------------------------------------------
// Odd prime powers
// ---------------------------------------------------------------------------

struct OddPowerRow {
    u64 p = 0;
    Int a;
    LpfBound lpf;
    /// Checked m with a(p) | a(p^{2m+1}).
    unsigned divisible = 0;
    unsigned checked = 0;
    /// (log p)^{1/8}, inherited by every P(a(p^{2m+1})).
    double implied_threshold = 0;
    bool implied_pass = false;
};

struct OddPowerReport {
    FormDescriptor form;
    u64 x_max = 0;
    unsigned m_max = 0;
    u64 skipped_zero = 0;
    std::vector<OddPowerRow> rows;

    u64 violations() const
    {
        u64 v = 0;
        for (const auto& r : rows) v += r.checked - r.divisible;
        return v;
    }
};

inline OddPowerReport odd_prime_power_suite(const CoefficientTable& table, u64 x_max, unsigned m_max,
                                            const AnalysisOptions& opt = {})
{
    if (x_max > table.limit()) throw LookupError("table limit " + std::to_string(table.limit()) + " below x_max");
    const PrimeSieve sieve(x_max);
    std::vector<u64> primes;
    OddPowerReport r;
    r.form = table.form();
    r.x_max = x_max;
    r.m_max = m_max;
    for (u64 p : sieve.primes()) {
        if (sgn(table.at(p)) == 0) {
            ++r.skipped_zero;
        } else {
            primes.push_back(p);
        }
    }
    r.rows.resize(primes.size());
    parallel_for(primes.size(), opt.threads, [&](std::size_t i) {
        const u64 p = primes[i];
        auto& row = r.rows[i];
        row.p = p;
        row.a = table.at(p);
        const auto pw = prime_power_coefficients(table, p, 2 * m_max + 1);
        for (unsigned m = 1; m <= m_max; ++m) {
            ++row.checked;
            row.divisible += mpz_divisible_p(pw[2 * m + 1].get_mpz_t(), row.a.get_mpz_t()) != 0;
        }
        row.lpf = lpf_bound(factorize_bounded(row.a, opt.factor));
        row.implied_threshold = std::pow(std::log(static_cast<double>(p)), 0.125);
        row.implied_pass = cmp(row.lpf.lower, row.implied_threshold) > 0;
    });
    return r;
}

// ---------------------------------------------------------------------------
// Level bounds for a(p^(n-1)) and the pafp comparison
// ---------------------------------------------------------------------------

struct Theorem6Row {
    u64 p = 0;
    u64 n = 0;
    u64 n3 = 0;
    LpfBound lpf;
    double loglog_p = 0;
    /// 16 (k-1) d_f phi(n3).
    u64 denominator = 0;
    /// loglog p / denominator; the constant c(n3, f) stays symbolic.
    double explicit_bound = 0;
};

inline std::vector<Theorem6Row> theorem6_report(const CoefficientTable& table, const std::vector<u64>& p_list,
                                                const std::vector<u64>& n_list, const AnalysisOptions& opt = {})
{
    if (table.weight() < 4) throw DomainError("theorem6 needs weight at least 4");
    for (u64 n : n_list) {
        if (n < 3) throw DomainError("theorem6 needs n >= 3");
    }
    std::vector<std::pair<u64, u64>> grid;
    for (u64 p : p_list) {
        if (!is_prime_u64(p)) throw DomainError(std::to_string(p) + " is not prime");
        for (u64 n : n_list) grid.emplace_back(p, n);
    }
    std::vector<Theorem6Row> rows(grid.size());
    ClassifyOptions copt;
    copt.factor = opt.factor;
    copt.factor.rho_budget = opt.deep_rho_budget;
    parallel_for(grid.size(), opt.threads, [&](std::size_t i) {
        auto [p, n] = grid[i];
        auto& row = rows[i];
        row.p = p;
        row.n = n;
        row.n3 = smallest_divisor_geq3(n);
        row.lpf = lucas_term_lpf(lucas_parameters(table, p), n, copt);
        row.loglog_p = p >= 3 ? std::log(std::log(static_cast<double>(p))) : 0.0;
        row.denominator = 16 * static_cast<u64>(table.weight() - 1) * hecke_field_degree * euler_phi(row.n3);
        row.explicit_bound = row.loglog_p / static_cast<double>(row.denominator);
    });
    return rows;
}

struct WieferichRow {
    u64 p = 0;
    u64 q = 0;
    SplitType type = SplitType::inert;
    u64 root = 0;
    Int norm;
    WieferichValuation valuation;
};

/// nu_P(gamma_p^{N(P)-1} - 1) for every prime ideal P of norm <= norm_limit
/// not above p, in order of (q, root).
inline std::vector<WieferichRow> wieferich_scan(const EigenField& E, u64 norm_limit, const AnalysisOptions& opt = {})
{
    if (E.p <= 3) throw DomainError("wieferich scan requires p > 3");
    if (is_root_of_unity_gamma(E)) throw DomainError("gamma is a root of unity");
    const PrimeSieve sieve(std::max<u64>(norm_limit, 2));
    std::vector<PrimeIdeal> ideals;
    for (u64 q : sieve.primes()) {
        if (q == E.p) continue;
        for (const auto& P : E.field.split_prime(q)) {
            if (cmp(P.norm, static_cast<double>(norm_limit)) <= 0) ideals.push_back(P);
        }
    }
    std::vector<WieferichRow> rows(ideals.size());
    parallel_for(ideals.size(), opt.threads, [&](std::size_t i) {
        const auto& P = ideals[i];
        rows[i] = {E.p, P.q, P.type, P.root, P.norm, wieferich_valuation(E, P)};
    });
    return rows;
}

enum class PafpVerdict { pass, fail, undetermined, below_floor };

inline const char* to_string(PafpVerdict v)
{
    switch (v) {
    case PafpVerdict::pass: return "pass";
    case PafpVerdict::fail: return "fail";
    case PafpVerdict::undetermined: return "undetermined";
    case PafpVerdict::below_floor: return "below-floor";
    }
    return "?";
}

struct PafpRow {
    u64 n = 0;
    u64 phi = 0;
    unsigned omega = 0;
    LpfBound lpf;
    double bound = 0;
    std::optional<double> general_bound;
    PafpVerdict verdict = PafpVerdict::undetermined;
};

struct PafpReport {
    FormDescriptor form;
    u64 p = 0;
    u64 n_max = 0;
    u64 norm_limit = 0;
    u64 n_floor = 7;
    std::vector<WieferichRow> wieferich;
    unsigned long r_hat = 0;
    std::optional<u64> class_number;
    double height = 0;
    std::vector<PafpRow> rows;
};

/// Empirical r from the Wieferich scan, then P(a(p^{n-1})) against the
/// rational-branch bound for 2 <= n <= n_max. P(a(p^{n-1})) is the maximum
/// of P(Phi_d) over d | n, d > 1, each Phi_d factored once.
inline PafpReport pafp_suite(const CoefficientTable& table, u64 p, u64 n_max, u64 norm_limit, u64 n_floor = 7,
                             const AnalysisOptions& opt = {})
{
    if (p <= 3) throw DomainError("pafp suite requires p > 3");
    if (n_max < 2) throw DomainError("n_max must be at least 2");
    const EigenField E = field_from_prime(table, p);
    if (is_root_of_unity_gamma(E)) throw DomainError("gamma_p is a root of unity");

    PafpReport r;
    r.form = table.form();
    r.p = p;
    r.n_max = n_max;
    r.norm_limit = norm_limit;
    r.n_floor = n_floor;
    r.wieferich = wieferich_scan(E, norm_limit, opt);
    for (const auto& w : r.wieferich) r.r_hat = std::max(r.r_hat, w.valuation.alpha_path);
    if (r.r_hat == 0) r.r_hat = 1;
    r.height = height_gamma(E).method_a;
    try {
        r.class_number = class_number(E.field);
    } catch (const DomainError&) {
        r.class_number.reset();
    }

    const LucasParameters lp = lucas_parameters(table, p);
    const LucasParameters cp = lp.coprime() ? lp : coprime_part(lp);
    ClassifyOptions copt;
    copt.factor = opt.factor;
    std::vector<LpfBound> level(n_max + 1);
    parallel_for(n_max - 1, opt.threads, [&](std::size_t i) {
        const u64 d = i + 2;
        level[d] = cyclotomic_lpf(cp, d, copt);
    });

    for (u64 n = 2; n <= n_max; ++n) {
        PafpRow row;
        row.n = n;
        const auto mv = multiplicative_suite(n);
        row.phi = mv.phi;
        row.omega = mv.omega;
        if (cp.removed_nu > 0) row.lpf.lower = make_int(p);
        for (u64 d : divisors(n)) {
            if (d == 1) continue;
            if (level[d].lower > row.lpf.lower) row.lpf.lower = level[d].lower;
            row.lpf.exact = row.lpf.exact && level[d].exact;
        }
        row.bound = pafp_bound(E, n, static_cast<long>(r.r_hat));
        if (r.class_number) {
            const double hk = static_cast<double>(*r.class_number);
            const double phi = static_cast<double>(row.phi);
            row.general_bound = r.height / (26.0 * r.r_hat * hk) * phi * phi /
                                std::pow(2.0 * hecke_field_degree * hk, row.omega + 1.0);
        }
        if (n < n_floor) {
            row.verdict = PafpVerdict::below_floor;
        } else if (cmp(row.lpf.lower, row.bound) > 0) {
            row.verdict = PafpVerdict::pass;
        } else {
            row.verdict = row.lpf.exact ? PafpVerdict::fail : PafpVerdict::undetermined;
        }
        r.rows.push_back(std::move(row));
    }
    return r;
}

} // namespace hecke

#endif // HECKE_ANALYSIS_HPP
