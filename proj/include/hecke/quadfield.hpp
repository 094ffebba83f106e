#ifndef HECKE_QUADFIELD_HPP
#define HECKE_QUADFIELD_HPP

// Imaginary quadratic fields K = Q(sqrt(D0)) holding the Satake roots of an
// eigenform at p: alpha_p, beta_p are the roots of x^2 - a_f(p) x + p^{k-1}.
//
// Elements of O_K are stored as u + v*w with w = sqrt(D0) when D0 = 2, 3 mod 4
// and w = (1 + sqrt(D0))/2 when D0 = 1 mod 4.

#include "hecke/arith.hpp"
#include "hecke/bigint.hpp"
#include "hecke/eigenform.hpp"
#include "hecke/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace hecke {

struct FieldElement {
    Int u = 0;
    Int v = 0;

    bool is_zero() const { return sgn(u) == 0 && sgn(v) == 0; }
    friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

enum class SplitType { split, inert, ramified };

inline const char* to_string(SplitType t)
{
    switch (t) {
    case SplitType::split: return "split";
    case SplitType::inert: return "inert";
    case SplitType::ramified: return "ramified";
    }
    return "?";
}

/// Prime ideal P above the rational prime q. For split and ramified primes
/// P = (q, w - root); for inert primes P = (q).
struct PrimeIdeal {
    u64 q = 0;
    SplitType type = SplitType::inert;
    u64 root = 0;
    unsigned e = 1;
    unsigned f = 1;
    Int norm;
};

class QuadraticField {
public:
    /// Field with squarefree radicand D0 < 0.
    explicit QuadraticField(Int d0) : d0_(std::move(d0))
    {
        if (sgn(d0_) >= 0) throw DomainError("only imaginary quadratic fields are supported");
        Int r;
        mpz_fdiv_r_ui(r.get_mpz_t(), d0_.get_mpz_t(), 4);
        case_b_ = r == 1;
        disc_ = case_b_ ? d0_ : Int(4 * d0_);
        m_ = case_b_ ? Int((d0_ - 1) / 4) : Int(0);
    }

    const Int& d0() const { return d0_; }
    const Int& disc() const { return disc_; }
    /// True when O_K = Z[(1 + sqrt(D0))/2].
    bool half_integral_basis() const { return case_b_; }

    FieldElement from_int(const Int& x) const { return {x, 0}; }

    FieldElement add(const FieldElement& x, const FieldElement& y) const { return {x.u + y.u, x.v + y.v}; }
    FieldElement sub(const FieldElement& x, const FieldElement& y) const { return {x.u - y.u, x.v - y.v}; }

    FieldElement mul(const FieldElement& x, const FieldElement& y) const
    {
        Int vv = x.v * y.v;
        if (case_b_) return {x.u * y.u + vv * m_, x.u * y.v + x.v * y.u + vv};
        return {x.u * y.u + vv * d0_, x.u * y.v + x.v * y.u};
    }

    FieldElement conj(const FieldElement& x) const
    {
        if (case_b_) return {x.u + x.v, -x.v};
        return {x.u, -x.v};
    }

    Int norm(const FieldElement& x) const
    {
        if (case_b_) return x.u * x.u + x.u * x.v - m_ * x.v * x.v;
        return x.u * x.u - d0_ * x.v * x.v;
    }

    Int trace(const FieldElement& x) const { return case_b_ ? Int(2 * x.u + x.v) : Int(2 * x.u); }

    FieldElement reduce(const FieldElement& x, const Int& modulus) const
    {
        FieldElement r;
        mpz_fdiv_r(r.u.get_mpz_t(), x.u.get_mpz_t(), modulus.get_mpz_t());
        mpz_fdiv_r(r.v.get_mpz_t(), x.v.get_mpz_t(), modulus.get_mpz_t());
        return r;
    }

    FieldElement mul_mod(const FieldElement& x, const FieldElement& y, const Int& modulus) const
    {
        return reduce(mul(x, y), modulus);
    }

    FieldElement pow_mod(FieldElement base, Int e, const Int& modulus) const
    {
        FieldElement r = reduce(from_int(1), modulus);
        base = reduce(base, modulus);
        while (sgn(e) > 0) {
            if (mpz_odd_p(e.get_mpz_t())) r = mul_mod(r, base, modulus);
            e >>= 1;
            if (sgn(e) > 0) base = mul_mod(base, base, modulus);
        }
        return r;
    }

    /// Prime ideals above q with their splitting data.
    std::vector<PrimeIdeal> split_prime(u64 q) const
    {
        if (!is_prime_u64(q)) throw DomainError("split_prime: " + std::to_string(q) + " is not prime");
        const int chi = kronecker_symbol(disc_, q);
        const Int qi = make_int(q);
        if (chi == -1) return {PrimeIdeal{q, SplitType::inert, 0, 1, 2, qi * qi}};
        std::vector<u64> roots = min_poly_roots(q);
        if (chi == 0) return {PrimeIdeal{q, SplitType::ramified, roots.at(0), 2, 1, qi}};
        if (roots.size() != 2) throw std::logic_error("split prime without two roots");
        return {PrimeIdeal{q, SplitType::split, roots[0], 1, 1, qi}, PrimeIdeal{q, SplitType::split, roots[1], 1, 1, qi}};
    }

    /// nu_P(x); x = 0 gives the infinite marker.
    Valuation ideal_valuation(const FieldElement& x, const PrimeIdeal& P) const
    {
        if (x.is_zero()) return {0, true};
        const Int q = make_int(P.q);
        switch (P.type) {
        case SplitType::inert: return {content_valuation(x, q), false};
        case SplitType::ramified: return {valuation_of(norm(x), q), false};
        case SplitType::split: {
            const unsigned long s = content_valuation(x, q);
            Int qs = pow_int(q, s);
            FieldElement y{x.u / qs, x.v / qs};
            Int test = y.u + y.v * make_int(P.root);
            if (!mpz_divisible_p(test.get_mpz_t(), q.get_mpz_t())) return {s, false};
            return {s + valuation_of(norm(y), q), false};
        }
        }
        return {0, false};
    }

    friend bool operator==(const QuadraticField& a, const QuadraticField& b) { return a.d0_ == b.d0_; }

private:
    static unsigned long valuation_of(Int n, const Int& q)
    {
        if (sgn(n) == 0) return ~0ul;
        return mpz_remove(n.get_mpz_t(), n.get_mpz_t(), q.get_mpz_t());
    }

    static unsigned long content_valuation(const FieldElement& x, const Int& q)
    {
        Int g;
        mpz_gcd(g.get_mpz_t(), x.u.get_mpz_t(), x.v.get_mpz_t());
        return valuation_of(g, q);
    }

    u64 residue(const Int& x, u64 q) const { return mpz_fdiv_ui(x.get_mpz_t(), q); }

    /// Roots of the minimal polynomial of w modulo q, ascending.
    std::vector<u64> min_poly_roots(u64 q) const
    {
        std::vector<u64> roots;
        if (q == 2) {
            for (u64 x = 0; x < 2; ++x) {
                u64 val = case_b_ ? (x * x + x + residue(m_, 2)) % 2 : (x * x + residue(d0_, 2)) % 2;
                if (val == 0) roots.push_back(x);
            }
            return roots;
        }
        auto s = sqrt_mod(residue(d0_, q), q);
        if (!s) return roots;
        u64 r1 = *s, r2 = (q - *s) % q;
        if (case_b_) {
            const u64 half = (q + 1) / 2;
            r1 = detail::mulmod64((1 + r1) % q, half, q);
            r2 = detail::mulmod64((1 + r2) % q, half, q);
        }
        roots.push_back(r1);
        if (r2 != r1) roots.push_back(r2);
        std::sort(roots.begin(), roots.end());
        return roots;
    }

    Int d0_;
    Int disc_;
    Int m_;
    bool case_b_ = false;
};

/// Squarefree kernel: D = D0 * f^2 with D0 squarefree (sign carried by D0).
struct SquarefreeSplit {
    Int d0;
    Int f;
};

inline SquarefreeSplit squarefree_part(const Int& D)
{
    if (sgn(D) == 0) throw DomainError("squarefree part of zero");
    Factorization fz = factorize(D);
    SquarefreeSplit s{Int(fz.sign), Int(1)};
    for (const auto& pf : fz.factors) {
        if (pf.exponent % 2 == 1) s.d0 *= pf.prime;
        s.f *= pow_int(pf.prime, pf.exponent / 2);
    }
    return s;
}

/// Q(alpha) for alpha, beta the roots of x^2 - a x + q.
struct LucasField {
    Int a;
    Int q;
    Int D;
    Int conductor;
    QuadraticField field;
    FieldElement alpha;

    FieldElement beta() const { return field.conj(alpha); }
};

inline LucasField field_from_lucas(const Int& a, const Int& q)
{
    Int D = a * a - 4 * q;
    if (sgn(D) == 0) throw DomainError("degenerate parameters: a^2 = 4q");
    if (sgn(D) > 0) throw DomainError("parameters give a real quadratic field");
    SquarefreeSplit s = squarefree_part(D);
    QuadraticField K(s.d0);
    FieldElement alpha;
    if (K.half_integral_basis()) {
        alpha = {(a - s.f) / 2, s.f};
    } else {
        alpha = {a / 2, s.f / 2};
    }
    LucasField out{a, q, D, s.f, std::move(K), alpha};
    if (out.field.trace(out.alpha) != a || out.field.norm(out.alpha) != q) {
        throw std::logic_error("Satake root reconstruction failed");
    }
    return out;
}

/// The field of the Satake roots of an eigenform at p, with the form data.
struct EigenField : LucasField {
    u64 p = 0;
    int weight = 0;
    unsigned nu = 0;
};

inline EigenField field_from_prime(const CoefficientTable& table, u64 p)
{
    if (!is_prime_u64(p)) throw DomainError(std::to_string(p) + " is not prime");
    const Int& a = table.at(p);
    const Int q = pow_int(p, static_cast<unsigned long>(table.weight() - 1));
    EigenField E{field_from_lucas(a, q)};
    E.p = p;
    E.weight = table.weight();
    E.nu = sgn(a) == 0 ? ~0u : static_cast<unsigned>(valuation(a, make_int(p)).value);
    return E;
}

/// gamma = alpha/beta is a root of unity iff a^2 is one of 0, q, 2q, 3q, 4q.
inline bool is_root_of_unity_gamma(const Int& a, const Int& q)
{
    Int a2 = a * a;
    for (int j = 0; j <= 4; ++j) {
        if (a2 == j * q) return true;
    }
    return false;
}

inline bool is_root_of_unity_gamma(const EigenField& E) { return is_root_of_unity_gamma(E.a, E.q); }

/// Number of reduced primitive forms (a, b, c) of discriminant disc < 0:
/// |b| <= a <= c, b >= 0 when |b| = a or a = c. Enumerates b >= 0 and the
/// divisors a of (b^2 - disc)/4.
inline u64 class_number(const Int& disc)
{
    if (sgn(disc) >= 0) throw DomainError("class_number needs a negative discriminant");
    const u64 mod4 = mpz_fdiv_ui(disc.get_mpz_t(), 4);
    if (mod4 != 0 && mod4 != 1) throw DomainError("discriminant must be 0 or 1 mod 4");
    if (bit_length(disc) > 52) throw DomainError("discriminant too large for form enumeration");
    const u64 absd = to_u64(disc);
    u64 h = 0;
    for (u64 b = absd % 2; 3 * b * b <= absd; b += 2) {
        const u64 ac = (b * b + absd) / 4;
        for (u64 a : divisors(ac)) {
            if (a < std::max<u64>(b, 1)) continue;
            const u64 c = ac / a;
            if (c < a) break;
            if (std::gcd(std::gcd(a, b), c) != 1) continue;
            h += (b == 0 || a == b || a == c) ? 1 : 2;
        }
    }
    return h;
}

inline u64 class_number(const QuadraticField& K) { return class_number(K.disc()); }

// ---------------------------------------------------------------------------
// Wieferich valuations, heights and the pafp bound
// ---------------------------------------------------------------------------

struct WieferichValuation {
    unsigned long alpha_path = 0;
    unsigned long beta_path = 0;
    unsigned precision = 0;

    bool agree() const { return alpha_path == beta_path; }
};

/// nu_P(gamma^{N(P)-1} - 1) for gamma = alpha/beta, computed as
/// nu_P(alpha^{2(N-1)} - p^{(k-1)(N-1)}) and, independently, as
/// nu_P(p^{(k-1)(N-1)} - beta^{2(N-1)}), both modulo q^m with m doubling
/// until the valuation is pinned below e*m.
inline WieferichValuation wieferich_valuation(const LucasField& L, const PrimeIdeal& P, const Int& q_value)
{
    if (mpz_divisible_ui_p(q_value.get_mpz_t(), P.q)) {
        throw PreconditionError("prime ideal above " + std::to_string(P.q) + " divides the Satake norm");
    }
    if (is_root_of_unity_gamma(L.a, L.q)) throw DomainError("gamma is a root of unity");
    const QuadraticField& K = L.field;
    const Int exponent = P.norm - 1;
    const Int qi = make_int(P.q);

    auto pinned = [&](const FieldElement& rep, unsigned m) -> std::optional<unsigned long> {
        if (rep.is_zero()) return std::nullopt;
        Valuation v = K.ideal_valuation(rep, P);
        if (v.value < static_cast<unsigned long>(P.e) * m) return v.value;
        return std::nullopt;
    };

    WieferichValuation out;
    bool have_a = false, have_b = false;
    for (unsigned m = 4;; m *= 2) {
        const Int M = pow_int(qi, m);
        Int qpow;
        mpz_powm(qpow.get_mpz_t(), q_value.get_mpz_t(), exponent.get_mpz_t(), M.get_mpz_t());
        if (!have_a) {
            FieldElement x = K.pow_mod(L.alpha, 2 * exponent, M);
            x = K.reduce(K.sub(x, K.from_int(qpow)), M);
            if (auto v = pinned(x, m)) {
                out.alpha_path = *v;
                have_a = true;
            }
        }
        if (!have_b) {
            FieldElement y = K.pow_mod(L.beta(), 2 * exponent, M);
            y = K.reduce(K.sub(K.from_int(qpow), y), M);
            if (auto v = pinned(y, m)) {
                out.beta_path = *v;
                have_b = true;
            }
        }
        out.precision = m;
        if (have_a && have_b) return out;
        if (m > (1u << 16)) throw std::runtime_error("wieferich valuation did not stabilize");
    }
}

inline WieferichValuation wieferich_valuation(const EigenField& E, const PrimeIdeal& P)
{
    if (P.q == E.p) throw PreconditionError("prime ideal lies above p");
    return wieferich_valuation(static_cast<const LucasField&>(E), P, E.q);
}

struct HeightPair {
    double method_a = 0;
    double method_b = 0;
    double archimedean = 0;
    double finite = 0;
};

/// Lower bound 1/(4 d (log* d)^3) on the height of a non-torsion algebraic number of degree d.
inline double height_lower_bound(int degree)
{
    const double ls = std::max(1.0, std::log(static_cast<double>(degree)));
    return 1.0 / (4.0 * degree * ls * ls * ls);
}

/// Absolute logarithmic height of gamma_p, from the definition (A) and the
/// closed form ((k-1)/2 - nu) log p (B).
inline HeightPair height_gamma(const EigenField& E)
{
    if (E.p <= 3) throw PreconditionError("height_gamma requires p > 3");
    if (is_root_of_unity_gamma(E)) throw DomainError("gamma is a root of unity");
    HeightPair h;

    // |sigma(alpha)| = sqrt(N(alpha)) for both complex embeddings; compute
    // the moduli from real coordinates rather than assuming it.
    const long double re = std::ldexp(static_cast<long double>(mpz_get_d(E.a.get_mpz_t())), -1);
    const long double im = std::sqrt(static_cast<long double>(-mpz_get_d(E.D.get_mpz_t()))) / 2;
    const long double log_abs_alpha = std::log(std::hypot(re, im));
    const long double log_abs_beta = std::log(std::hypot(re, -im));
    const long double lg = log_abs_alpha - log_abs_beta;
    h.archimedean = static_cast<double>(std::max(0.0L, lg) + std::max(0.0L, -lg));

    long double finite = 0;
    const FieldElement beta = E.beta();
    for (const auto& P : E.field.split_prime(E.p)) {
        const long va = static_cast<long>(E.field.ideal_valuation(E.alpha, P).value);
        const long vb = static_cast<long>(E.field.ideal_valuation(beta, P).value);
        const long v = va - vb;
        if (v < 0) finite += static_cast<long double>(-v) * std::log(static_cast<long double>(mpz_get_d(P.norm.get_mpz_t())));
    }
    h.finite = static_cast<double>(finite);
    h.method_a = static_cast<double>((static_cast<long double>(h.archimedean) + finite) / 2);
    h.method_b = ((E.weight - 1) / 2.0 - static_cast<double>(E.nu)) * std::log(static_cast<double>(E.p));
    return h;
}

/// (k - 1 - 2 nu) log p / (52 r) * phi(n)^2 / 2^omega(n).
inline double pafp_bound(const EigenField& E, u64 n, long r)
{
    if (r <= 0) throw DomainError("r must be positive");
    if (n == 0) throw DomainError("n must be positive");
    if (E.p <= 3) throw PreconditionError("pafp bound requires p > 3");
    if (is_root_of_unity_gamma(E)) throw DomainError("gamma is a root of unity");
    const auto mv = multiplicative_suite(n);
    const double lead = (E.weight - 1 - 2.0 * E.nu) * std::log(static_cast<double>(E.p)) / (52.0 * r);
    const double phi = static_cast<double>(mv.phi);
    return lead * phi * phi / std::ldexp(1.0, static_cast<int>(mv.omega));
}

} // namespace hecke

#endif // HECKE_QUADFIELD_HPP
