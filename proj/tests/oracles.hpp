#ifndef HECKE_TESTS_ORACLES_HPP
#define HECKE_TESTS_ORACLES_HPP

#include "hecke/arith.hpp"

#include <cmath>
#include <numeric>
#include <tuple>
#include <utility>
#include <vector>

namespace oracle {

using hecke::i64;
using hecke::u64;

// Class numbers by enumerating ideals below the Minkowski bound and merging
// classes with a principality test.

// Z-lattice in O_K = Z[w] with basis (a, 0), (b, c) in (u, v) coordinates.
struct Lattice {
    i64 a, b, c;
    i64 norm() const { return a * c; }
};

struct SmallField {
    i64 d0;
    bool half;
    i64 m;

    explicit SmallField(i64 d) : d0(d), half(((d % 4) + 4) % 4 == 1), m(half ? (d - 1) / 4 : 0) {}

    std::pair<i64, i64> mul(std::pair<i64, i64> x, std::pair<i64, i64> y) const
    {
        auto [u1, v1] = x;
        auto [u2, v2] = y;
        i64 vv = v1 * v2;
        if (half) return {u1 * u2 + vv * m, u1 * v2 + v1 * u2 + vv};
        return {u1 * u2 + vv * d0, u1 * v2 + v1 * u2};
    }
    std::pair<i64, i64> conj(std::pair<i64, i64> x) const
    {
        return half ? std::pair<i64, i64>{x.first + x.second, -x.second} : std::pair<i64, i64>{x.first, -x.second};
    }
    i64 norm(std::pair<i64, i64> x) const
    {
        auto [u, v] = x;
        return half ? u * u + u * v - m * v * v : u * u - d0 * v * v;
    }
    i64 disc() const { return half ? d0 : 4 * d0; }
};

inline bool contains(const Lattice& L, std::pair<i64, i64> x)
{
    auto [u, v] = x;
    if (v % L.c != 0) return false;
    i64 t = v / L.c;
    return (u - t * L.b) % L.a == 0;
}

// Hermite normal form of the lattice spanned by the given vectors.
inline Lattice hnf(std::vector<std::pair<i64, i64>> gens)
{
    // Column-style reduction on the v coordinate, then the u coordinate.
    i64 c = 0;
    std::pair<i64, i64> pivot{0, 0};
    std::vector<i64> us;
    for (auto g : gens) {
        // Combine g with pivot so that the v-gcd lands in pivot.
        i64 x = pivot.second, y = g.second;
        if (y == 0) {
            us.push_back(g.first);
            continue;
        }
        // Extended gcd on (x, y).
        i64 old_r = x, r = y, old_s = 1, s = 0, old_t = 0, t = 1;
        while (r != 0) {
            i64 q = old_r / r;
            std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
            std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
            std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
        }
        i64 gv = old_r;
        std::pair<i64, i64> np{old_s * pivot.first + old_t * g.first, gv};
        if (gv < 0) np = {-np.first, -np.second};
        // Remainders with zero v coordinate.
        i64 gabs = np.second;
        if (x != 0) us.push_back(pivot.first - (x / gabs) * np.first);
        us.push_back(g.first - (y / gabs) * np.first);
        pivot = np;
        c = gabs;
    }
    i64 a = 0;
    for (i64 u : us) a = std::gcd(a, u);
    a = std::abs(a);
    i64 b = ((pivot.first % a) + a) % a;
    return {a, b, c};
}

inline Lattice product(const SmallField& K, const Lattice& I, const Lattice& J)
{
    std::vector<std::pair<i64, i64>> bi{{I.a, 0}, {I.b, I.c}}, bj{{J.a, 0}, {J.b, J.c}}, gens;
    for (auto x : bi)
        for (auto y : bj) gens.push_back(K.mul(x, y));
    return hnf(gens);
}

inline Lattice conjugate(const SmallField& K, const Lattice& I)
{
    return hnf({K.conj({I.a, 0}), K.conj({I.b, I.c})});
}

inline bool is_ideal(const SmallField& K, const Lattice& L)
{
    return contains(L, K.mul({L.a, 0}, {0, 1})) && contains(L, K.mul({L.b, L.c}, {0, 1}));
}

inline bool is_principal(const SmallField& K, const Lattice& A)
{
    const i64 n = A.norm();
    const i64 vmax = 2 * static_cast<i64>(std::sqrt(static_cast<double>(n))) + 2;
    for (i64 v = -vmax; v <= vmax; ++v) {
        for (i64 u = -vmax - std::abs(v); u <= vmax + std::abs(v); ++u) {
            if (K.norm({u, v}) == n && contains(A, {u, v})) return true;
        }
    }
    return false;
}

inline u64 class_number_oracle(i64 d0)
{
    SmallField K(d0);
    const double minkowski = 2.0 / M_PI * std::sqrt(static_cast<double>(-K.disc()));
    std::vector<Lattice> ideals;
    for (i64 a = 1; a <= static_cast<i64>(minkowski) + 1; ++a) {
        for (i64 c = 1; a * c <= minkowski; ++c) {
            for (i64 b = 0; b < a; ++b) {
                Lattice L{a, b, c};
                if (is_ideal(K, L)) ideals.push_back(L);
            }
        }
    }
    std::vector<int> parent(ideals.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < ideals.size(); ++i) {
        for (std::size_t j = i + 1; j < ideals.size(); ++j) {
            if (find(i) == find(j)) continue;
            if (is_principal(K, product(K, ideals[i], conjugate(K, ideals[j])))) parent[find(i)] = find(j);
        }
    }
    u64 classes = 0;
    for (std::size_t i = 0; i < ideals.size(); ++i) classes += find(i) == static_cast<int>(i);
    return classes;
}

inline bool squarefree(i64 n)
{
    n = std::abs(n);
    for (i64 p = 2; p * p <= n; ++p) {
        if (n % (p * p) == 0) return false;
    }
    return true;
}

} // namespace oracle

#endif
