#ifndef HECKE_EIGENFORM_HPP
#define HECKE_EIGENFORM_HPP

// Exact q-expansions of the six level-1 normalized cuspidal Hecke eigenforms
// with rational integer coefficients (weights 12, 16, 18, 20, 22, 26).
//
// Delta is built as q * (eta^3)^8 with the sparse Jacobi expansion of eta^3;
// the other weights are Delta * E4^a * E6^b, multiplied densely through
// Kronecker substitution so that a single GMP product does the convolution.

#include "hecke/arith.hpp"
#include "hecke/bigint.hpp"
#include "hecke/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hecke {

/// Coefficients c_0, c_1, ... of a truncated power series in q.
using Series = std::vector<Int>;

/// One of the six level-1 eigenforms with rational coefficients.
struct FormDescriptor {
    int weight = 12;
    int level = 1;
    std::string name = "delta";

    static constexpr std::array<int, 6> supported_weights{12, 16, 18, 20, 22, 26};

    static bool is_supported(int k)
    {
        for (int w : supported_weights) {
            if (w == k) return true;
        }
        return false;
    }

    static FormDescriptor from_weight(int k)
    {
        if (!is_supported(k)) {
            throw DomainError("no level-1 eigenform with rational coefficients of weight " + std::to_string(k));
        }
        return {k, 1, k == 12 ? std::string("delta") : "weight" + std::to_string(k)};
    }

    /// Accepts "delta" or "weight<k>".
    static FormDescriptor from_name(std::string_view name)
    {
        if (name == "delta") return from_weight(12);
        if (name.rfind("weight", 0) == 0 && name.size() > 6) {
            int k = 0;
            for (char c : name.substr(6)) {
                if (c < '0' || c > '9') throw DomainError("unknown form name '" + std::string(name) + "'");
                k = k * 10 + (c - '0');
                if (k > 1000) break;
            }
            return from_weight(k);
        }
        throw DomainError("unknown form name '" + std::string(name) + "'");
    }

    static std::vector<FormDescriptor> all()
    {
        std::vector<FormDescriptor> out;
        for (int k : supported_weights) out.push_back(from_weight(k));
        return out;
    }

    /// Exponents (a, b) with f = Delta * E4^a * E6^b.
    std::pair<int, int> eisenstein_exponents() const
    {
        switch (weight) {
        case 12: return {0, 0};
        case 16: return {1, 0};
        case 18: return {0, 1};
        case 20: return {2, 0};
        case 22: return {1, 1};
        case 26: return {2, 1};
        default: throw DomainError("unsupported weight " + std::to_string(weight));
        }
    }

    friend bool operator==(const FormDescriptor&, const FormDescriptor&) = default;
};

/// Degree of the Hecke field K_f over Q; every supported form has K_f = Q.
inline constexpr int hecke_field_degree = 1;

/// a_f(1..limit) for one form. Index 0 is unused and holds zero.
class CoefficientTable {
public:
    CoefficientTable(FormDescriptor form, std::vector<Int> values) : form_(std::move(form)), values_(std::move(values))
    {
        if (values_.size() < 2) throw DomainError("coefficient table needs at least a_f(1)");
        values_[0] = 0;
    }

    const FormDescriptor& form() const { return form_; }
    int weight() const { return form_.weight; }
    u64 limit() const { return values_.size() - 1; }

    const Int& at(u64 n) const
    {
        if (n == 0 || n > limit()) {
            throw LookupError("a_f(" + std::to_string(n) + ") outside table range 1.." + std::to_string(limit()));
        }
        return values_[n];
    }

    const Int& operator[](u64 n) const { return at(n); }

    /// Direct access including the unused zero slot; test and I/O helpers use it.
    const std::vector<Int>& raw() const { return values_; }
    std::vector<Int>& raw_mut() { return values_; }

    friend bool operator==(const CoefficientTable& a, const CoefficientTable& b)
    {
        return a.form_ == b.form_ && a.values_ == b.values_;
    }

private:
    FormDescriptor form_;
    std::vector<Int> values_;
};

// ---------------------------------------------------------------------------
// Series kernels
// ---------------------------------------------------------------------------

enum class EtaVariant { eta, eta3 };

/// Sparse (exponent, coefficient) terms of prod (1 - q^n) or prod (1 - q^n)^3 up to q^limit.
inline std::vector<std::pair<u64, long>> eta_terms(u64 limit, EtaVariant variant)
{
    std::vector<std::pair<u64, long>> terms;
    if (variant == EtaVariant::eta) {
        // Pentagonal numbers k(3k-1)/2 and k(3k+1)/2 with sign (-1)^k.
        terms.emplace_back(0, 1);
        for (u64 k = 1;; ++k) {
            const long sign = (k % 2 == 0) ? 1 : -1;
            const u64 e1 = k * (3 * k - 1) / 2;
            const u64 e2 = k * (3 * k + 1) / 2;
            if (e1 > limit) break;
            terms.emplace_back(e1, sign);
            if (e2 <= limit) terms.emplace_back(e2, sign);
        }
    } else {
        // Jacobi: sum_j (-1)^j (2j+1) q^{j(j+1)/2}.
        for (u64 j = 0;; ++j) {
            const u64 e = j * (j + 1) / 2;
            if (e > limit) break;
            terms.emplace_back(e, (j % 2 == 0 ? 1 : -1) * static_cast<long>(2 * j + 1));
        }
    }
    return terms;
}

inline Series eta_power_series(u64 limit, EtaVariant variant)
{
    if (limit < 1) throw DomainError("series limit must be at least 1");
    Series s(limit + 1, 0);
    for (auto [e, c] : eta_terms(limit, variant)) s[e] = c;
    return s;
}

/// acc <- acc * sparse, truncated to acc.size() terms. The sparse factor must
/// have constant term 1.
inline void multiply_sparse_inplace(Series& acc, const std::vector<std::pair<u64, long>>& sparse)
{
    for (std::size_t i = acc.size(); i-- > 1;) {
        mpz_ptr target = acc[i].get_mpz_t();
        for (std::size_t t = 1; t < sparse.size(); ++t) {
            const auto [e, c] = sparse[t];
            if (e > i) break;
            mpz_srcptr src = acc[i - e].get_mpz_t();
            if (mpz_sgn(src) == 0) continue;
            if (c > 0) {
                mpz_addmul_ui(target, src, static_cast<unsigned long>(c));
            } else {
                mpz_submul_ui(target, src, static_cast<unsigned long>(-c));
            }
        }
    }
}

namespace detail {

inline std::size_t max_bit_length(const Series& s)
{
    std::size_t b = 0;
    for (const auto& x : s) b = std::max(b, bit_length(x));
    return b;
}

inline Int pack_series(const Series& s, std::size_t count, std::size_t slot_limbs)
{
    std::vector<mp_limb_t> pos(count * slot_limbs, 0);
    std::vector<mp_limb_t> neg(count * slot_limbs, 0);
    for (std::size_t i = 0; i < count && i < s.size(); ++i) {
        const int sign = sgn(s[i]);
        if (sign == 0) continue;
        auto& dst = sign > 0 ? pos : neg;
        std::size_t written = 0;
        mpz_export(dst.data() + i * slot_limbs, &written, -1, sizeof(mp_limb_t), 0, 0, s[i].get_mpz_t());
    }
    Int p, n;
    mpz_import(p.get_mpz_t(), pos.size(), -1, sizeof(mp_limb_t), 0, 0, pos.data());
    mpz_import(n.get_mpz_t(), neg.size(), -1, sizeof(mp_limb_t), 0, 0, neg.data());
    return p - n;
}

inline Series unpack_series(const Int& packed, std::size_t count, std::size_t slot_limbs)
{
    Series out(count, 0);
    const int sign = sgn(packed);
    if (sign == 0) return out;
    const std::size_t total = mpz_size(packed.get_mpz_t());
    std::vector<mp_limb_t> limbs(std::max(total, count * slot_limbs) + slot_limbs, 0);
    std::size_t written = 0;
    mpz_export(limbs.data(), &written, -1, sizeof(mp_limb_t), 0, 0, packed.get_mpz_t());

    const std::size_t slot_bits = slot_limbs * 64;
    Int slot;
    bool carry = false;
    for (std::size_t i = 0; i < count; ++i) {
        mpz_import(slot.get_mpz_t(), slot_limbs, -1, sizeof(mp_limb_t), 0, 0, limbs.data() + i * slot_limbs);
        if (carry) slot += 1;
        // Balanced digit: values at or above 2^(B-1) stand for negative coefficients.
        if (mpz_sizeinbase(slot.get_mpz_t(), 2) >= slot_bits && sgn(slot) != 0) {
            Int full = Int(1) << static_cast<mp_bitcnt_t>(slot_bits);
            slot -= full;
            carry = true;
        } else {
            carry = false;
        }
        out[i] = sign > 0 ? slot : Int(-slot);
    }
    return out;
}

} // namespace detail

/// Dense product a*b truncated to q^limit, via Kronecker substitution.
inline Series series_multiply(const Series& a, const Series& b, u64 limit)
{
    const std::size_t count = static_cast<std::size_t>(limit) + 1;
    const std::size_t na = std::min(a.size(), count);
    const std::size_t nb = std::min(b.size(), count);
    if (na == 0 || nb == 0) return Series(count, 0);
    const std::size_t terms = std::min(na, nb);
    const std::size_t bits = detail::max_bit_length(a) + detail::max_bit_length(b) +
                             static_cast<std::size_t>(std::bit_width(terms)) + 2;
    const std::size_t slot_limbs = (bits + 63) / 64;
    Int pa = detail::pack_series(a, na, slot_limbs);
    Int pb = detail::pack_series(b, nb, slot_limbs);
    Int prod = pa * pb;
    return detail::unpack_series(prod, count, slot_limbs);
}

/// E4 = 1 + 240 sum sigma_3(n) q^n and E6 = 1 - 504 sum sigma_5(n) q^n.
inline Series eisenstein_series(int weight, u64 limit)
{
    if (weight != 4 && weight != 6) throw DomainError("eisenstein_series supports weights 4 and 6");
    if (limit < 1) throw DomainError("series limit must be at least 1");
    const unsigned power = weight == 4 ? 3 : 5;
    std::vector<u128> sigma(limit + 1, 0);
    for (u64 d = 1; d <= limit; ++d) {
        u128 dk = 1;
        for (unsigned i = 0; i < power; ++i) dk *= d;
        for (u64 m = d; m <= limit; m += d) sigma[m] += dk;
    }
    Series s(limit + 1);
    s[0] = 1;
    const long scale = weight == 4 ? 240 : -504;
    for (u64 n = 1; n <= limit; ++n) s[n] = make_int(sigma[n]) * scale;
    return s;
}

/// tau(1..limit) as q * (eta^3)^8.
inline CoefficientTable delta_series(u64 limit)
{
    if (limit < 1) throw DomainError("table limit must be at least 1");
    // Coefficient of q^{n-1} in eta^24 is tau(n); we need exponents 0..limit-1.
    const u64 top = limit - 1;
    const auto eta3 = eta_terms(top, EtaVariant::eta3);
    Series acc(limit, 0);
    acc[0] = 1;
    for (int i = 0; i < 8; ++i) multiply_sparse_inplace(acc, eta3);
    std::vector<Int> values(limit + 1);
    for (u64 n = 1; n <= limit; ++n) values[n] = std::move(acc[n - 1]);
    return CoefficientTable(FormDescriptor::from_weight(12), std::move(values));
}

inline CoefficientTable eigenform_table(const FormDescriptor& form, u64 limit)
{
    if (!FormDescriptor::is_supported(form.weight) || form.level != 1) {
        throw DomainError("unsupported form '" + form.name + "'");
    }
    CoefficientTable delta = delta_series(limit);
    if (form.weight == 12) return delta;

    auto [a, b] = form.eisenstein_exponents();
    Series factor(limit + 1, 0);
    factor[0] = 1;
    if (a > 0 || b > 0) {
        const Series e4 = eisenstein_series(4, limit);
        const Series e6 = eisenstein_series(6, limit);
        for (int i = 0; i < a; ++i) factor = series_multiply(factor, e4, limit);
        for (int i = 0; i < b; ++i) factor = series_multiply(factor, e6, limit);
    }
    Series product = series_multiply(delta.raw(), factor, limit);
    if (product[1] != 1) throw DegenerateInputError("eigenform product lost its normalization a_f(1) = 1");
    return CoefficientTable(FormDescriptor::from_weight(form.weight), std::move(product));
}

// ---------------------------------------------------------------------------
// Coefficient queries
// ---------------------------------------------------------------------------

/// a_f(p^0), ..., a_f(p^m) from the three-term Hecke recurrence
/// a(p^{j+1}) = a(p) a(p^j) - p^{k-1} a(p^{j-1}).
inline std::vector<Int> prime_power_coefficients(const CoefficientTable& table, u64 p, unsigned m)
{
    if (!is_prime_u64(p)) throw DomainError(std::to_string(p) + " is not prime");
    const Int& ap = table.at(p);
    const Int pk1 = pow_int(p, static_cast<unsigned long>(table.weight() - 1));
    std::vector<Int> out;
    out.reserve(m + 1);
    out.emplace_back(1);
    if (m >= 1) out.push_back(ap);
    for (unsigned j = 1; j < m; ++j) out.push_back(ap * out[j] - pk1 * out[j - 1]);
    return out;
}

inline Int coeff_prime_power(const CoefficientTable& table, u64 p, unsigned m)
{
    return prime_power_coefficients(table, p, m).back();
}

/// a_f(n) by multiplicativity over the prime-power factorization of n.
inline Int coeff_at(const CoefficientTable& table, u64 n)
{
    if (n == 0) throw DomainError("a_f(0) is not a Fourier coefficient of a cusp form index");
    Int r = 1;
    for (auto [p, e] : factor_u64(n)) {
        if (p > table.limit()) {
            throw LookupError("prime " + std::to_string(p) + " of n = " + std::to_string(n) + " beyond table limit");
        }
        r *= coeff_prime_power(table, p, e);
    }
    return r;
}

} // namespace hecke

#endif // HECKE_EIGENFORM_HPP
