#ifndef HECKE_CLI_HPP
#define HECKE_CLI_HPP

#include "hecke/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace hecke::cli {

namespace fs = std::filesystem;

enum Exit { ok = 0, invariant_failure = 1, usage_error = 2, io_error = 3 };

struct RunConfig {
    std::string form = "delta";
    u64 x_max = 100000;
    /// Table limit for gen and verify; 0 picks x_max (gen) or 10000 (verify).
    u64 limit = 0;
    u64 n_max = 200;
    u64 norm_limit = 10000;
    std::string threshold = "thm1";
    double epsilon = 0.1;
    double c = 0.5;
    std::string g = "inv-loglog";
    double g_constant = 1.0;
    unsigned bins = 40;
    std::vector<u64> d{2, 3, 5, 7, 11, 691};
    u64 p = 11;
    std::vector<u64> p_list{5, 7, 11, 13};
    std::vector<u64> n_list{3, 4, 5, 6, 7, 8, 9, 10, 12, 15};
    unsigned m_max = 10;
    /// 0 picks 16 (natural-density) or 7 (pafp).
    u64 n_floor = 0;
    u64 seed = 1;
    unsigned threads = 1;
    std::string format = "both";
    std::string cache_dir = "cache";
    std::string report_dir = "reports";
    bool no_autogen = false;
    bool force = false;

    ThresholdSpec threshold_spec() const
    {
        ThresholdSpec s;
        s.kind = parse_threshold_kind(threshold);
        s.epsilon = epsilon;
        s.c = c;
        s.g = parse_g_function(g);
        s.g_constant = g_constant;
        s.validate();
        return s;
    }

    AnalysisOptions analysis_options() const
    {
        AnalysisOptions o;
        o.factor.primality.seed = seed;
        o.threads = threads;
        o.failing_cap = static_cast<std::size_t>(-1);
        return o;
    }

    void validate() const
    {
        if (x_max < 2) throw DomainError("--x-max must be at least 2");
        if (n_max < 2) throw DomainError("--n-max must be at least 2");
        if (norm_limit < 2) throw DomainError("--norm-limit must be at least 2");
        if (m_max < 1) throw DomainError("--m-max must be positive");
        if (!(epsilon > 0)) throw DomainError("--epsilon must be positive");
        parse_output_format(format);
        threshold_spec();
    }

    /// Everything that determines report content; paths and threads excluded.
    Json json() const
    {
        Json j;
        j["form"] = form;
        j["x_max"] = x_max;
        j["n_max"] = n_max;
        j["norm_limit"] = norm_limit;
        j["threshold"] = threshold;
        j["epsilon"] = json_real(epsilon);
        j["c"] = json_real(c);
        j["g"] = g;
        j["g_constant"] = json_real(g_constant);
        j["bins"] = bins;
        j["d"] = d;
        j["p"] = p;
        j["p_list"] = p_list;
        j["n_list"] = n_list;
        j["m_max"] = m_max;
        j["n_floor"] = n_floor;
        j["seed"] = seed;
        return j;
    }
};

// ---------------------------------------------------------------------------
// Coefficient cache
// ---------------------------------------------------------------------------

class Cache {
public:
    Cache(const RunConfig& cfg, std::ostream& err) : cfg_(cfg), err_(err) {}

    fs::path path(const FormDescriptor& f) const { return fs::path(cfg_.cache_dir) / (f.name + ".table"); }

    /// Table covering `limit`, from the cache file or generated into it.
    /// Corrupt files raise TableFormatError; a missing or short file with
    /// --no-autogen raises IoError.
    const CoefficientTable& get(const FormDescriptor& f, u64 limit)
    {
        auto it = tables_.find(f.name);
        if (it != tables_.end() && it->second.limit() >= limit) return it->second;
        const fs::path p = path(f);
        if (fs::exists(p)) {
            CoefficientTable t = load_table(p, f);
            if (t.limit() >= limit) return tables_.insert_or_assign(f.name, std::move(t)).first->second;
            if (cfg_.no_autogen) {
                throw IoError("cache " + p.string() + " covers " + std::to_string(t.limit()) + " < " +
                              std::to_string(limit) + " and --no-autogen is set");
            }
        } else if (cfg_.no_autogen) {
            throw IoError("cache " + p.string() + " is missing and --no-autogen is set");
        }
        return generate(f, limit);
    }

    const CoefficientTable& generate(const FormDescriptor& f, u64 limit)
    {
        err_ << "generating " << f.name << " to " << limit << " -> " << path(f).string() << "\n";
        CoefficientTable t = eigenform_table(f, limit);
        std::error_code ec;
        fs::create_directories(cfg_.cache_dir, ec);
        save_table(path(f), t);
        return tables_.insert_or_assign(f.name, std::move(t)).first->second;
    }

private:
    const RunConfig& cfg_;
    std::ostream& err_;
    std::map<std::string, CoefficientTable> tables_;
};

inline std::vector<FormDescriptor> forms_for(const std::string& name)
{
    if (name == "all") return FormDescriptor::all();
    return {FormDescriptor::from_name(name)};
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

inline int cmd_gen(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const u64 limit = cfg.limit ? cfg.limit : cfg.x_max;
    Cache cache(cfg, err);
    for (const auto& f : forms_for(cfg.form)) {
        const fs::path p = cache.path(f);
        if (fs::exists(p) && !cfg.force) {
            // Throws on a corrupt file; --force regenerates.
            CoefficientTable t = load_table(p, f);
            if (t.limit() == limit) {
                out << p.string() << ": up to date\n";
                continue;
            }
        }
        cache.generate(f, limit);
        out << p.string() << ": wrote " << f.name << " limit=" << limit << "\n";
    }
    return ok;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

class SuiteLog {
public:
    explicit SuiteLog(std::ostream& out) : out_(out) {}

    void check(const std::string& suite, const std::string& what, bool pass, const std::string& detail = "")
    {
        ++checks_;
        failures_ += !pass;
        out_ << "[" << suite << "] " << (pass ? "ok   " : "FAIL ") << what;
        if (!detail.empty()) out_ << " (" << detail << ")";
        out_ << "\n";
    }

    void info(const std::string& suite, const std::string& what) { out_ << "[" << suite << "] info " << what << "\n"; }

    u64 checks() const { return checks_; }
    u64 failures() const { return failures_; }

private:
    std::ostream& out_;
    u64 checks_ = 0;
    u64 failures_ = 0;
};

namespace detail {

inline bool squarefree_u64(u64 n)
{
    for (auto [p, e] : factor_u64(n)) {
        if (e > 1) return false;
    }
    return true;
}

/// h(D) = -(1/|D|) sum_{a<|D|} (D/a) a for fundamental D < -4.
inline u64 dirichlet_class_number(long D)
{
    if (D == -3 || D == -4) return 1;
    const Int disc(D);
    long sum = 0;
    for (long a = 1; a < -D; ++a) sum += a * mpz_kronecker_si(disc.get_mpz_t(), a);
    return static_cast<u64>(sum / D);
}

inline std::string ratio_str(u64 num, u64 den)
{
    return std::to_string(num) + "/" + std::to_string(den);
}

} // namespace detail

inline void suite_coeffs(const RunConfig& cfg, Cache& cache, SuiteLog& log)
{
    const u64 L = cfg.limit ? cfg.limit : 10000;
    for (const auto& f : FormDescriptor::all()) {
        const std::string tag = "coeffs";
        const CoefficientTable* tp = nullptr;
        try {
            tp = &cache.get(f, L);
        } catch (const TableFormatError& e) {
            log.check(tag, f.name + " cache integrity", false, e.what());
            continue;
        }
        const auto& t = *tp;
        log.check(tag, f.name + " cache integrity", true, "limit " + std::to_string(t.limit()));

        const u64 oracle_n = std::min<u64>(L, 1000);
        if (f.weight == 12) {
            const Series e4 = eisenstein_series(4, oracle_n);
            const Series e6 = eisenstein_series(6, oracle_n);
            const Series e4c = series_multiply(series_multiply(e4, e4, oracle_n), e4, oracle_n);
            const Series e6s = series_multiply(e6, e6, oracle_n);
            u64 bad = 0;
            for (u64 n = 1; n <= oracle_n; ++n) {
                Int v = e4c[n] - e6s[n];
                if (!mpz_divisible_ui_p(v.get_mpz_t(), 1728)) {
                    ++bad;
                    continue;
                }
                v /= 1728;
                bad += v != t.at(n);
            }
            log.check(tag, "delta eta^24 vs (E4^3 - E6^2)/1728, n <= " + std::to_string(oracle_n), bad == 0,
                      std::to_string(bad) + " mismatches");
        } else {
            const CoefficientTable fresh = eigenform_table(f, oracle_n);
            u64 bad = 0;
            for (u64 n = 1; n <= oracle_n; ++n) bad += fresh.at(n) != t.at(n);
            log.check(tag, f.name + " cache vs recomputation, n <= " + std::to_string(oracle_n), bad == 0,
                      std::to_string(bad) + " mismatches");
        }

        log.check(tag, f.name + " a(1) = 1", t.at(1) == 1);

        u64 mult_bad = 0, rec_bad = 0, deligne_bad = 0, rec_checked = 0;
        for (u64 n = 2; n <= L; ++n) {
            Int prod = 1;
            const auto fac = factor_u64(n);
            if (fac.size() == 1) continue;
            for (auto [p, e] : fac) {
                u64 pe = 1;
                for (unsigned i = 0; i < e; ++i) pe *= p;
                prod *= t.at(pe);
            }
            mult_bad += prod != t.at(n);
        }
        const PrimeSieve sieve(L);
        for (u64 p : sieve.primes()) {
            const Int q = pow_int(p, static_cast<unsigned long>(f.weight - 1));
            const Int& a = t.at(p);
            deligne_bad += a * a > 4 * q;
            u64 prev = 1, cur = p;
            while (cur <= L / p) {
                const u64 next = cur * p;
                ++rec_checked;
                rec_bad += t.at(next) != a * t.at(cur) - q * t.at(prev);
                prev = cur;
                cur = next;
            }
        }
        log.check(tag, f.name + " multiplicativity, n <= " + std::to_string(L), mult_bad == 0,
                  std::to_string(mult_bad) + " mismatches");
        log.check(tag, f.name + " prime-power recurrence, p^m <= " + std::to_string(L), rec_bad == 0,
                  std::to_string(rec_bad) + "/" + std::to_string(rec_checked) + " mismatches");
        log.check(tag, f.name + " Deligne bound a(p)^2 <= 4 p^(k-1)", deligne_bad == 0,
                  std::to_string(deligne_bad) + " violations");
    }
}

inline void suite_cyclotomic(const RunConfig& cfg, Cache& cache, SuiteLog& log)
{
    const std::string tag = "cyclotomic";
    std::vector<HomogeneousPoly> psi(31);
    for (u64 n = 3; n <= 30; ++n) psi[n] = psi_polynomial(n);
    const PrimeSieve sieve(50);
    for (const auto& f : FormDescriptor::all()) {
        const CoefficientTable* tp = nullptr;
        try {
            tp = &cache.get(f, 50);
        } catch (const TableFormatError& e) {
            log.check(tag, f.name + " cache integrity", false, e.what());
            continue;
        }
        u64 prod_bad = 0, psi_bad = 0, cells = 0;
        for (u64 p : sieve.primes()) {
            const auto lp = lucas_parameters(*tp, p);
            const auto pw = prime_power_coefficients(*tp, p, 29);
            for (u64 n = 2; n <= 30; ++n) {
                ++cells;
                prod_bad += divisor_product(lp, n) != pw[n - 1];
                if (n >= 3) psi_bad += phi_value(lp, n) != psi[n].evaluate(lp.a * lp.a, lp.q);
            }
        }
        log.check(tag, f.name + " prod_{d|n,d>1} Phi_d = a(p^(n-1)), p <= 50, 2 <= n <= 30", prod_bad == 0,
                  std::to_string(prod_bad) + "/" + std::to_string(cells) + " mismatches");
        log.check(tag, f.name + " Phi_n = Psi_n(a^2, p^(k-1)), 3 <= n <= 30", psi_bad == 0,
                  std::to_string(psi_bad) + " mismatches");
    }

    const FormDescriptor delta = FormDescriptor::from_weight(12);
    const CoefficientTable* tp = nullptr;
    try {
        tp = &cache.get(delta, 50);
    } catch (const TableFormatError& e) {
        return;
    }
    ClassifyOptions copt;
    copt.factor.primality.seed = cfg.seed;
    copt.factor.rho_budget = 1u << 14;
    u64 values = 0, complete = 0, violations = 0, ideal_bad = 0, unresolved = 0, certified = 0, uncertified = 0;
    for (u64 p : sieve.primes()) {
        auto lp = lucas_parameters(*tp, p);
        if (!lp.coprime()) lp = coprime_part(lp);
        const auto L = field_from_lucas(lp.a, lp.q);
        for (u64 n = 7; n <= 40; ++n) {
            const auto cv = classify_prime_divisors(lp, n, L.field, copt);
            ++values;
            complete += cv.complete();
            violations += cv.congruence_violations();
            certified += cv.primes.size();
            unresolved += cv.unresolved.size();
            uncertified += cv.uncertified();
            for (const auto& c : cv.ideal_checks) ideal_bad += c.type != SplitType::ramified && !c.holds();
        }
    }
    log.check(tag, "delta p <= 50, 7 <= n <= 40: every prime q | Phi_n, q !| n satisfies q = +-1 mod n",
              violations == 0 && uncertified == 0,
              std::to_string(violations) + " violations among " + std::to_string(certified) +
                  " factored primes; " + std::to_string(unresolved - uncertified) + "/" +
                  std::to_string(unresolved) + " composite cofactors certified by exact order");
    log.check(tag, "delta non-primitive ideals: nu_P(Phi_n) <= nu_P(n) away from ramified primes", ideal_bad == 0,
              std::to_string(ideal_bad) + " violations");
    log.info(tag, "fully factored: " + detail::ratio_str(complete, values) + " values");

    const EigenField E = field_from_prime(*tp, 11);
    double lo = 1e300, hi = -1e300;
    for (u64 n = 50; n <= 200; ++n) {
        if (!is_prime_u64(n)) continue;
        const double r = norm_phi_ratio(E, *tp, n);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    log.check(tag, "delta p = 11: log N(Phi_n) / (2 h phi(n)) in [0.8, 1.2] for prime n in [50, 200]",
              lo >= 0.8 && hi <= 1.2, "range [" + format_real(lo) + ", " + format_real(hi) + "]");
}

inline void suite_quadfield(const RunConfig& cfg, Cache& cache, SuiteLog& log)
{
    const std::string tag = "quadfield";
    u64 h_bad = 0, discs = 0;
    for (u64 m = 1; m <= 2000; ++m) {
        if (!detail::squarefree_u64(m)) continue;
        const QuadraticField K{-make_int(m)};
        if (cmp(K.disc(), -2000) < 0) continue;
        ++discs;
        h_bad += class_number(K) != detail::dirichlet_class_number(K.disc().get_si());
    }
    log.check(tag, "class numbers vs Dirichlet class number formula, fundamental -2000 <= D < 0", h_bad == 0,
              std::to_string(h_bad) + "/" + std::to_string(discs) + " mismatches");

    const CoefficientTable* tables[6] = {};
    const auto forms = FormDescriptor::all();
    for (std::size_t i = 0; i < forms.size(); ++i) {
        try {
            tables[i] = &cache.get(forms[i], 100);
        } catch (const TableFormatError& e) {
            log.check(tag, forms[i].name + " cache integrity", false, e.what());
        }
    }
    const PrimeSieve sieve(200);
    u64 split_bad = 0;
    double worst = 0;
    for (std::size_t i = 0; i < forms.size(); ++i) {
        if (!tables[i]) continue;
        for (u64 p : sieve.primes_between(5, i == 0 ? 100 : 13)) {
            const EigenField E = field_from_prime(*tables[i], p);
            for (u64 q : sieve.primes()) {
                unsigned ef = 0;
                for (const auto& P : E.field.split_prime(q)) ef += P.e * P.f;
                split_bad += ef != 2;
            }
            const HeightPair h = height_gamma(E);
            worst = std::max(worst, std::abs(h.method_a - h.method_b) / h.method_b);
        }
    }
    log.check(tag, "sum e f = 2 over primes above q <= 200, fields Q(alpha_p), 5 <= p <= 100 (delta), 13 (others)", split_bad == 0,
              std::to_string(split_bad) + " violations");
    log.check(tag, "height of gamma_p: definition vs ((k-1)/2 - nu) log p, rel. err <= 1e-9, same fields",
              worst <= 1e-9, "worst " + format_real(worst));

    if (!tables[0]) return;
    const AnalysisOptions opt = cfg.analysis_options();
    for (u64 p : {5, 7, 11, 13}) {
        const EigenField E = field_from_prime(*tables[0], p);
        const auto rows = wieferich_scan(E, cfg.norm_limit, opt);
        u64 below = 0, disagree = 0;
        unsigned long r_hat = 0;
        for (const auto& w : rows) {
            below += w.valuation.alpha_path < 1;
            disagree += !w.valuation.agree();
            r_hat = std::max(r_hat, w.valuation.alpha_path);
        }
        log.check(tag,
                  "delta p = " + std::to_string(p) + ": nu_P(gamma^(N P - 1) - 1) >= 1, both paths agree, N P <= " +
                      std::to_string(cfg.norm_limit),
                  below == 0 && disagree == 0,
                  std::to_string(rows.size()) + " ideals, r_hat " + std::to_string(r_hat) + ", " +
                      std::to_string(below) + " below 1, " + std::to_string(disagree) + " disagreements");
    }
}

inline void suite_densities(const RunConfig& cfg, Cache& cache, SuiteLog& log)
{
    const std::string tag = "densities";
    const FormDescriptor form = FormDescriptor::from_name(cfg.form);
    const CoefficientTable* tp = nullptr;
    try {
        tp = &cache.get(form, cfg.x_max);
    } catch (const TableFormatError& e) {
        log.check(tag, form.name + " cache integrity", false, e.what());
        return;
    }
    const auto& t = *tp;
    const AnalysisOptions opt = cfg.analysis_options();
    const std::string xs = std::to_string(cfg.x_max);

    ThresholdSpec s = cfg.threshold_spec();
    for (auto kind : {ThresholdKind::thm1, ThresholdKind::thm2, ThresholdKind::thm3}) {
        s.kind = kind;
        const auto r = lpf_density(t, cfg.x_max, s, opt);
        log.check(tag, std::string(to_string(kind)) + " prime scan closure pass + fail + zero = scanned", r.closed(),
                  std::to_string(r.passing) + " + " + std::to_string(r.failing) + " + " + std::to_string(r.zeros) +
                      " of " + std::to_string(r.scanned));
        std::string fails;
        for (std::size_t i = 0; i < r.failing_list.size() && i < 10; ++i) {
            fails += (i ? " " : "") + std::to_string(r.failing_list[i].n);
        }
        log.info(tag, std::string(to_string(kind)) + " density " + format_real(r.density) + " = " +
                          detail::ratio_str(r.density_num, r.scanned) + ", asymptotic floor " +
                          format_real(r.asymptotic_floor) + ", x = " + xs + (fails.empty() ? "" : ", failing " + fails));
    }

    const u64 nx = std::min<u64>(cfg.x_max, 10000);
    for (auto kind : {ThresholdKind::thm1, ThresholdKind::cafn_g2}) {
        s.kind = kind;
        const auto r = natural_density_over_n(t, nx, s, cfg.n_floor ? cfg.n_floor : 16, opt);
        log.check(tag, std::string(to_string(kind)) + " integer scan closure", r.closed());
        log.info(tag, std::string(to_string(kind)) + " natural density " + format_real(r.density) + " = " +
                          detail::ratio_str(r.density_num, r.scanned) + ", asymptotic floor " +
                          format_real(r.asymptotic_floor) + ", x = " + std::to_string(nx));
    }

    const auto st = sato_tate_test(t, cfg.x_max, cfg.bins);
    double mass = 0;
    u64 count = 0;
    for (const auto& b : st.bins) {
        mass += b.expected;
        count += b.count;
    }
    log.check(tag, "Sato-Tate bin masses sum to 1 +- 1e-12", std::abs(mass - 1) <= 1e-12, format_real(mass));
    log.check(tag, "Sato-Tate counts sum to pi(x)", count == st.samples);
    log.check(tag, "lambda(p) in [-2, 2]", st.min_lambda >= -2 && st.max_lambda <= 2,
              "[" + format_real(st.min_lambda) + ", " + format_real(st.max_lambda) + "]");
    log.info(tag, "Sato-Tate KS distance " + format_real(st.ks) + " over " + std::to_string(st.samples) + " primes");

    for (u64 d : cfg.d) {
        const auto c = congruence_density(t, cfg.x_max, d);
        log.check(tag, "pi_f*(x, " + std::to_string(d) + ") <= pi_f(x, " + std::to_string(d) + ")",
                  c.pi_f_star <= c.pi_f);
        log.info(tag, "d = " + std::to_string(d) + ": pi_f = " + std::to_string(c.pi_f) + ", ratio " +
                          format_real(c.ratio) + (c.reference ? ", 1/d = " + format_real(*c.reference) : ""));
    }
    if (form.weight == 12) {
        const auto c = congruence_density(t, cfg.x_max, 691);
        u64 oracle = 0;
        const PrimeSieve sieve(cfg.x_max);
        for (u64 p : sieve.primes()) {
            if (p == 691) continue;
            Int pw;
            mpz_powm_ui(pw.get_mpz_t(), make_int(p).get_mpz_t(), 11, Int(691).get_mpz_t());
            oracle += (pw + 1) % 691 == 0;
        }
        log.check(tag, "pi_f(x, 691) vs independent count of 1 + p^11 = 0 mod 691", c.pi_f == oracle,
                  std::to_string(c.pi_f) + " vs " + std::to_string(oracle));
    }

    for (const auto& f : FormDescriptor::all()) {
        const CoefficientTable* fp = nullptr;
        try {
            fp = &cache.get(f, 1000);
        } catch (const TableFormatError& e) {
            log.check(tag, f.name + " cache integrity", false, e.what());
            continue;
        }
        const auto r = odd_prime_power_suite(*fp, 1000, cfg.m_max, opt);
        log.check(tag, f.name + " a(p) | a(p^(2m+1)), p <= 1000, m <= " + std::to_string(cfg.m_max),
                  r.violations() == 0, std::to_string(r.violations()) + " violations");
    }
}

inline int cmd_verify(const RunConfig& cfg, const std::string& suite, std::ostream& out, std::ostream& err)
{
    Cache cache(cfg, err);
    SuiteLog log(out);
    const bool all = suite == "all";
    if (all || suite == "coeffs") suite_coeffs(cfg, cache, log);
    if (all || suite == "cyclotomic") suite_cyclotomic(cfg, cache, log);
    if (all || suite == "quadfield") suite_quadfield(cfg, cache, log);
    if (all || suite == "densities") suite_densities(cfg, cache, log);
    out << "verify " << suite << ": " << log.checks() << " checks, " << log.failures() << " failures\n";
    return log.failures() ? invariant_failure : ok;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& report_kinds()
{
    static const std::vector<std::string> kinds{"sato-tate", "lpf-density", "congruence", "natural-density",
                                                "prime-power", "theorem6", "pafp", "wieferich"};
    return kinds;
}

inline std::vector<ReportDoc> build_report(const RunConfig& cfg, const std::string& kind, Cache& cache)
{
    const FormDescriptor form = FormDescriptor::from_name(cfg.form);
    const AnalysisOptions opt = cfg.analysis_options();
    if (kind == "sato-tate") {
        return {sato_tate_doc(sato_tate_test(cache.get(form, cfg.x_max), cfg.x_max, cfg.bins))};
    }
    if (kind == "lpf-density") {
        return {density_doc(lpf_density(cache.get(form, cfg.x_max), cfg.x_max, cfg.threshold_spec(), opt), kind)};
    }
    if (kind == "natural-density") {
        const u64 floor = cfg.n_floor ? cfg.n_floor : 16;
        return {density_doc(
            natural_density_over_n(cache.get(form, cfg.x_max), cfg.x_max, cfg.threshold_spec(), floor, opt), kind)};
    }
    if (kind == "congruence") {
        std::vector<CongruenceReport> rs;
        for (u64 d : cfg.d) rs.push_back(congruence_density(cache.get(form, cfg.x_max), cfg.x_max, d));
        return {congruence_doc(rs)};
    }
    if (kind == "prime-power") {
        return {odd_power_doc(odd_prime_power_suite(cache.get(form, cfg.x_max), cfg.x_max, cfg.m_max, opt))};
    }
    if (kind == "theorem6") {
        const u64 pmax = cfg.p_list.empty() ? 2 : *std::max_element(cfg.p_list.begin(), cfg.p_list.end());
        return {theorem6_doc(theorem6_report(cache.get(form, std::max<u64>(pmax, 2)), cfg.p_list, cfg.n_list, opt),
                             form)};
    }
    if (kind == "pafp") {
        const u64 floor = cfg.n_floor ? cfg.n_floor : 7;
        const auto r = pafp_suite(cache.get(form, std::max<u64>(cfg.p, 2)), cfg.p, cfg.n_max, cfg.norm_limit, floor,
                                  opt);
        ReportDoc scan = wieferich_doc(r.wieferich, "pafp-wieferich");
        scan.kind = "pafp";
        scan.summary["p"] = r.p;
        return {scan, pafp_bound_doc(r)};
    }
    if (kind == "wieferich") {
        std::vector<WieferichRow> rows;
        const u64 pmax = cfg.p_list.empty() ? 2 : *std::max_element(cfg.p_list.begin(), cfg.p_list.end());
        const auto& t = cache.get(form, std::max<u64>(pmax, 2));
        for (u64 p : cfg.p_list) {
            auto part = wieferich_scan(field_from_prime(t, p), cfg.norm_limit, opt);
            rows.insert(rows.end(), part.begin(), part.end());
        }
        return {wieferich_doc(rows, "wieferich")};
    }
    throw DomainError("unknown report kind '" + kind + "'");
}

inline int cmd_report(const RunConfig& cfg, const std::string& kind, std::ostream& out, std::ostream& err)
{
    Cache cache(cfg, err);
    const auto docs = build_report(cfg, kind, cache);
    const Json config = cfg.json();
    for (const auto& doc : docs) {
        for (const auto& p : write_report(doc, config, cfg.report_dir, parse_output_format(cfg.format))) {
            out << "wrote " << p.string() << "\n";
        }
        out << doc.name << ": " << doc.summary.dump() << "\n";
    }
    return ok;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    std::string suite = "all";
    std::string kind;

    CLI::App app{"Exact Fourier coefficients of level-1 eigenforms and largest-prime-factor experiments", "hecke"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--form", cfg.form, "delta, weight16 .. weight26, or all (gen)")->capture_default_str();
    app.add_option("--x-max", cfg.x_max, "scan bound")->capture_default_str();
    app.add_option("--limit", cfg.limit, "table limit for gen/verify (0: x-max for gen, 10000 for verify)")
        ->capture_default_str();
    app.add_option("--n-max", cfg.n_max, "largest n for pafp")->capture_default_str();
    app.add_option("--norm-limit", cfg.norm_limit, "prime ideal norm bound")->capture_default_str();
    app.add_option("--threshold", cfg.threshold, "thm1, thm2, thm3, atkin-serre-norm, cafnG2")->capture_default_str();
    app.add_option("--epsilon", cfg.epsilon, "thm1 epsilon")->capture_default_str();
    app.add_option("--c", cfg.c, "thm3 constant in (0, 1)")->capture_default_str();
    app.add_option("--g", cfg.g, "thm2 g: inv-loglog, c-over-log, scaled-inv-loglog")->capture_default_str();
    app.add_option("--g-constant", cfg.g_constant, "constant for c-over-log and scaled-inv-loglog")
        ->capture_default_str();
    app.add_option("--bins", cfg.bins, "Sato-Tate bins")->capture_default_str();
    app.add_option("--d", cfg.d, "congruence moduli")->delimiter(',')->capture_default_str();
    app.add_option("--p", cfg.p, "prime for pafp")->capture_default_str();
    app.add_option("--p-list", cfg.p_list, "primes for theorem6/wieferich")->delimiter(',')->capture_default_str();
    app.add_option("--n-list", cfg.n_list, "levels for theorem6")->delimiter(',')->capture_default_str();
    app.add_option("--m-max", cfg.m_max, "largest m in a(p^(2m+1))")->capture_default_str();
    app.add_option("--n-floor", cfg.n_floor, "scan floor (0: 16 natural-density, 7 pafp)")->capture_default_str();
    app.add_option("--seed", cfg.seed, "seed for probabilistic primality rounds")->capture_default_str();
    app.add_option("--threads", cfg.threads, "worker threads (0: all cores)")->capture_default_str();
    app.add_option("--format", cfg.format, "csv, json or both")
        ->check(CLI::IsMember({"csv", "json", "both"}))
        ->capture_default_str();
    app.add_option("--cache-dir", cfg.cache_dir, "coefficient cache directory")->capture_default_str();
    app.add_option("--report-dir", cfg.report_dir, "report output directory")->capture_default_str();
    app.add_flag("--no-autogen", cfg.no_autogen, "fail instead of generating missing caches");

    auto* gen = app.add_subcommand("gen", "write coefficient cache files");
    gen->add_flag("--force", cfg.force, "regenerate even when the cache is current or corrupt");
    auto* verify = app.add_subcommand("verify", "run invariant suites");
    verify->add_option("--suite", suite, "coeffs, cyclotomic, quadfield, densities, all")
        ->check(CLI::IsMember({"coeffs", "cyclotomic", "quadfield", "densities", "all"}))
        ->capture_default_str();
    auto* report = app.add_subcommand("report", "emit CSV/JSON reports");
    report->add_option("kind", kind, "report kind")->required()->check(CLI::IsMember(report_kinds()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage_error;
    }

    try {
        cfg.validate();
        if (cfg.form != "all" || !gen->parsed()) FormDescriptor::from_name(cfg.form);
        if (gen->parsed()) return cmd_gen(cfg, out, err);
        if (verify->parsed()) return cmd_verify(cfg, suite, out, err);
        return cmd_report(cfg, kind, out, err);
    } catch (const TableFormatError& e) {
        err << "error: corrupt coefficient cache: " << e.what() << "\n";
        return invariant_failure;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return io_error;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    } catch (const LookupError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return invariant_failure;
    }
}

} // namespace hecke::cli

#endif // HECKE_CLI_HPP
