/*
   Copyright 2026 The twistctl Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Cocycles into Aut(SL_n): f_s(x) = alpha_s x alpha_s^-1, or alpha_s x^-T alpha_s^-1 when flipped.

#ifndef TWIST_COCYCLE_HPP
#define TWIST_COCYCLE_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "twist/io.hpp"
#include "twist/matrix.hpp"

namespace twist {

/// A finite group given by its members and composition (s o t).
struct GroupTable {
    std::vector<int> members;
    std::function<int(int, int)> compose;

    static GroupTable cyclic(int m) {
        GroupTable G;
        for (int i = 0; i < m; ++i) G.members.push_back(i);
        G.compose = [m](int a, int b) { return (a + b) % m; };
        return G;
    }
    static GroupTable of(std::shared_ptr<const NumberField> K, const Subgroup& S) {
        GroupTable G;
        G.members = S.members;
        G.compose = [K](int a, int b) { return K->compose(a, b); };
        return G;
    }
    bool contains(int s) const { return std::find(members.begin(), members.end(), s) != members.end(); }
};

template <class R>
struct CocycleEntry {
    typename MatrixAlgebra<R>::Matrix alpha;
    bool flip = false;
};

template <class R>
class Cocycle {
   public:
    using Matrix = typename MatrixAlgebra<R>::Matrix;
    using Entry = CocycleEntry<R>;

    Cocycle(MatrixAlgebra<R> alg, GroupTable G, std::map<int, Entry> f)
        : alg_(std::move(alg)), group_(std::move(G)), f_(std::move(f)) {
        for (const auto& [s, e] : f_) {
            if (e.alpha.size() != alg_.entries())
                throw Error(Errc::CoefficientDimensionMismatch, "alpha for " + std::to_string(s) + " is not " +
                                                                    std::to_string(alg_.n()) + " x " + std::to_string(alg_.n()));
            auto inv = alg_.try_inverse(e.alpha);
            if (!inv) throw Error(Errc::NotInvertible, "alpha for " + std::to_string(s) + " is singular");
            alpha_inv_.emplace(s, std::move(*inv));
        }
    }

    const MatrixAlgebra<R>& algebra() const { return alg_; }
    const GroupTable& group() const { return group_; }
    const std::map<int, Entry>& assignments() const { return f_; }
    const Entry& at(int s) const {
        auto it = f_.find(s);
        if (it == f_.end()) throw Error(Errc::IndexOutOfRange, "no assignment for " + std::to_string(s));
        return it->second;
    }

    /// f_s(x)
    Matrix apply(int s, const Matrix& x) const {
        const Entry& e = at(s);
        Matrix y = e.flip ? alg_.inverse_transpose(x) : x;
        return alg_.mul(alg_.mul(e.alpha, y), alpha_inv_.at(s));
    }
    /// Twisted action f_s(^s g).
    Matrix twisted(int s, const Matrix& g) const { return apply(s, alg_.act(s, g)); }

    /// First ordered pair (s, t) where f_st = f_s o ^s f_t fails, if any.
    std::optional<std::pair<int, int>> first_violation() const {
        for (int s : group_.members)
            for (int t : group_.members) {
                const Entry& es = at(s);
                const Entry& et = at(t);
                const Entry& est = at(group_.compose(s, t));
                if (est.flip != (es.flip != et.flip)) return std::make_pair(s, t);
                Matrix conj = alg_.act(s, et.alpha);
                Matrix combined = alg_.mul(es.alpha, es.flip ? alg_.inverse_transpose(conj) : conj);
                if (!alg_.scalar_multiple(est.alpha, combined)) return std::make_pair(s, t);
            }
        return std::nullopt;
    }

   private:
    MatrixAlgebra<R> alg_;
    GroupTable group_;
    std::map<int, Entry> f_;
    std::map<int, Matrix> alpha_inv_;
};

/// No validation of the cocycle identity; used to build deliberately broken examples.
template <class R>
Cocycle<R> cocycle_make_unchecked(MatrixAlgebra<R> alg, GroupTable G, std::map<int, CocycleEntry<R>> f) {
    return Cocycle<R>(std::move(alg), std::move(G), std::move(f));
}

/// Validated cocycle: full coverage, invertible alphas, identity checked on every ordered pair up to scalars.
template <class R>
Cocycle<R> cocycle_make(MatrixAlgebra<R> alg, GroupTable G, std::map<int, CocycleEntry<R>> f) {
    for (int s : G.members)
        if (!f.count(s)) throw Error(Errc::InvalidArgument, "no assignment for group element " + std::to_string(s));
    for (const auto& [s, e] : f)
        if (!G.contains(s)) throw Error(Errc::InvalidArgument, "assignment for " + std::to_string(s) + " outside the group");
    Cocycle<R> c(std::move(alg), std::move(G), std::move(f));
    if (auto bad = c.first_violation())
        throw Error(Errc::CocycleViolation, "f_st != f_s o ^s f_t for (s, t) = (" + std::to_string(bad->first) + ", " +
                                                std::to_string(bad->second) + ")");
    return c;
}

// ---------------------------------------------------------------- finite models

/// E = GF(q^m) over F = GF(q), Galois group Z/m generated by the q-power map, n x n matrices.
struct FiniteModel {
    std::uint32_t p = 2;
    int r = 1;  // q = p^r
    int m = 1;
    int n = 2;
    long q = 2;
    std::shared_ptr<const GaloisField> E;

    static FiniteModel make(long q, int m, int n) {
        if (q < 2) throw Error(Errc::InvalidArgument, "q must be a prime power >= 2");
        if (m < 1 || n < 1) throw Error(Errc::InvalidArgument, "m and n must be positive");
        long p = 2;
        while (q % p != 0) ++p;
        long t = q;
        int r = 0;
        while (t % p == 0) {
            t /= p;
            ++r;
        }
        if (t != 1) throw Error(Errc::InvalidArgument, std::to_string(q) + " is not a prime power");
        FiniteModel M;
        M.p = static_cast<std::uint32_t>(p);
        M.r = r;
        M.m = m;
        M.n = n;
        M.q = q;
        M.E = GaloisField::make(M.p, r * m);
        return M;
    }

    FiniteRing ring() const { return FiniteRing{E, r}; }
    MatrixAlgebra<FiniteRing> algebra() const { return MatrixAlgebra<FiniteRing>(ring(), n); }
    GroupTable group() const { return GroupTable::cyclic(m); }
    /// Number of n x n matrices over E, saturating at UINT64_MAX.
    std::uint64_t candidates() const {
        std::uint64_t c = 1;
        for (int i = 0; i < n * n; ++i) {
            if (c > UINT64_MAX / E->size()) return UINT64_MAX;
            c *= E->size();
        }
        return c;
    }
    std::string str() const {
        return "n=" + std::to_string(n) + ", q=" + std::to_string(q) + ", m=" + std::to_string(m);
    }
};

using FiniteCocycle = Cocycle<FiniteRing>;
using FiniteMatrix = MatrixAlgebra<FiniteRing>::Matrix;

/// Cyclic cocycle from the generator image: f_k = f_1 o ^1 f_(k-1).
inline std::map<int, CocycleEntry<FiniteRing>> cyclic_assignments(const FiniteModel& M, const FiniteMatrix& alpha, bool flip) {
    auto alg = M.algebra();
    std::map<int, CocycleEntry<FiniteRing>> f;
    f[0] = {alg.identity(), false};
    if (M.m == 1) return f;
    CocycleEntry<FiniteRing> prev{alg.identity(), false};
    for (int k = 1; k < M.m; ++k) {
        FiniteMatrix conj = alg.act(1, prev.alpha);
        CocycleEntry<FiniteRing> e{alg.mul(alpha, flip ? alg.inverse_transpose(conj) : conj), flip != prev.flip};
        f[k] = e;
        prev = e;
    }
    return f;
}

inline FiniteCocycle cyclic_cocycle(const FiniteModel& M, const FiniteMatrix& alpha, bool flip) {
    return cocycle_make(M.algebra(), M.group(), cyclic_assignments(M, alpha, flip));
}
inline FiniteCocycle trivial_cocycle(const FiniteModel& M) { return cyclic_cocycle(M, M.algebra().identity(), false); }
inline FiniteCocycle flip_cocycle(const FiniteModel& M) { return cyclic_cocycle(M, M.algebra().identity(), true); }

/// Coboundary change alpha_s -> g alpha_s (^s g)^-1, or g alpha_s (^s g)^T when flipped.
template <class R>
Cocycle<R> conjugate_cocycle(const Cocycle<R>& c, const typename MatrixAlgebra<R>::Matrix& g) {
    const auto& alg = c.algebra();
    std::map<int, CocycleEntry<R>> f;
    for (const auto& [s, e] : c.assignments()) {
        auto sg = alg.act(s, g);
        f[s] = {alg.mul(alg.mul(g, e.alpha), e.flip ? alg.transpose(sg) : alg.inverse(sg)), e.flip};
    }
    return cocycle_make(alg, c.group(), std::move(f));
}

// ---------------------------------------------------------------- closed forms

inline std::uint64_t ipow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

/// |SL_n(F_q)| = q^(n(n-1)/2) prod_{k=2..n} (q^k - 1)
inline std::uint64_t sl_order(int n, long q) {
    std::uint64_t r = ipow(static_cast<std::uint64_t>(q), n * (n - 1) / 2);
    for (int k = 2; k <= n; ++k) r *= ipow(static_cast<std::uint64_t>(q), k) - 1;
    return r;
}

/// |SU_n(F_q)| = q^(n(n-1)/2) prod_{k=2..n} (q^k - (-1)^k)
inline std::uint64_t su_order(int n, long q) {
    std::uint64_t r = ipow(static_cast<std::uint64_t>(q), n * (n - 1) / 2);
    for (int k = 2; k <= n; ++k) r *= (k % 2 == 0) ? ipow(static_cast<std::uint64_t>(q), k) - 1 : ipow(static_cast<std::uint64_t>(q), k) + 1;
    return r;
}

// ---------------------------------------------------------------- enumeration

inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 22;

namespace detail {

inline FiniteMatrix decode_matrix(const FiniteModel& M, std::uint64_t code) {
    FiniteMatrix A(static_cast<std::size_t>(M.n * M.n));
    const std::uint64_t base = M.E->size();
    for (auto& x : A) {
        x = static_cast<GaloisField::Elem>(code % base);
        code /= base;
    }
    return A;
}

inline std::uint64_t encode_matrix(const FiniteModel& M, const FiniteMatrix& A) {
    std::uint64_t code = 0;
    const std::uint64_t base = M.E->size();
    for (auto it = A.rbegin(); it != A.rend(); ++it) code = code * base + *it;
    return code;
}

inline unsigned worker_count() {
    unsigned t = std::thread::hardware_concurrency();
    return t == 0 ? 1 : std::min(t, 16u);
}

/// Matrices of determinant one satisfying pred, in ascending code order; the range is split across threads.
template <class Pred>
std::vector<FiniteMatrix> enumerate_sl(const FiniteModel& M, std::uint64_t budget, Pred pred) {
    const std::uint64_t total = M.candidates();
    if (total > budget)
        throw Error(Errc::BudgetExceeded, std::to_string(M.E->size()) + "^" + std::to_string(M.n * M.n) +
                                              " candidates exceed the enumeration budget " + std::to_string(budget));
    auto alg = M.algebra();
    const unsigned T = worker_count();
    std::vector<std::vector<FiniteMatrix>> parts(T);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < T; ++t)
        pool.emplace_back([&, t] {
            std::uint64_t lo = total * t / T, hi = total * (t + 1) / T;
            for (std::uint64_t c = lo; c < hi; ++c) {
                FiniteMatrix A = decode_matrix(M, c);
                if (alg.det(A) != 1) continue;
                if (pred(A)) parts[t].push_back(std::move(A));
            }
        });
    for (auto& th : pool) th.join();
    std::vector<FiniteMatrix> out;
    for (auto& part : parts)
        for (auto& A : part) out.push_back(std::move(A));
    return out;
}

}  // namespace detail

struct FixedPointResult {
    std::uint64_t order = 0;
    std::uint64_t candidates = 0;
    std::vector<FiniteMatrix> elements;  // filled when requested
};

/// g in SL_n(E) with f_1(^1 g) = g for the generator (enough for cyclic groups once the cocycle is valid).
inline FixedPointResult twisted_fixed_points(const FiniteModel& M, const FiniteCocycle& c, std::uint64_t budget = kDefaultBudget,
                                             bool collect = false) {
    const int gen = M.m > 1 ? 1 : 0;
    auto els = detail::enumerate_sl(M, budget, [&](const FiniteMatrix& g) { return c.twisted(gen, g) == g; });
    FixedPointResult r;
    r.order = els.size();
    r.candidates = M.candidates();
    if (collect) r.elements = std::move(els);
    return r;
}

inline std::vector<FiniteMatrix> special_linear_group(const FiniteModel& M, std::uint64_t budget = kDefaultBudget) {
    return detail::enumerate_sl(M, budget, [](const FiniteMatrix&) { return true; });
}

// ---------------------------------------------------------------- projection isomorphism

struct ProjectionReport {
    std::uint64_t e_level_order = 0;        // |SL_n(E)|, domain of the section g -> (f_s(^s g))_s
    bool section_invariant = false;         // every section tuple is fixed by the twisted action of every element
    bool projection_inverts = false;        // identity component of the section tuple gives g back
    std::string tuple_mode;                 // "exhaustive" or "fibres"
    std::uint64_t tuples_enumerated = 0;
    std::uint64_t invariant_tuples = 0;     // exhaustive: all invariant tuples; fibres: invariant tuples over sampled fibres
    std::uint64_t fibres_checked = 0;
    bool injective = false;                 // every invariant tuple is the section of its identity component
    int homomorphism_pairs = 0;
    bool homomorphism_ok = false;
    std::uint64_t f_level_order = 0;        // twisted_fixed_points
    std::uint64_t diagonal_invariant = 0;   // constant tuples fixed by the twisted action
    bool f_level_bijective = false;
    bool passed = false;
};

struct ProjectionOptions {
    std::uint64_t budget = kDefaultBudget;
    int samples = 100;
    std::uint64_t seed = 1;
};

/// Finite-field check that g -> (f_s(^s g))_s is a group isomorphism onto the twisted-fixed tuples, inverse to projection.
inline ProjectionReport projection_iso_check(const FiniteModel& M, const FiniteCocycle& c, const ProjectionOptions& opt = {}) {
    ProjectionReport rep;
    auto alg = M.algebra();
    const std::vector<FiniteMatrix> SL = special_linear_group(M, opt.budget);
    const std::size_t N = SL.size();
    rep.e_level_order = N;
    const int m = M.m;

    // index lookup by code; codes are below the budget
    std::vector<std::int32_t> index_of(static_cast<std::size_t>(M.candidates()), -1);
    for (std::size_t i = 0; i < N; ++i) index_of[detail::encode_matrix(M, SL[i])] = static_cast<std::int32_t>(i);
    auto lookup = [&](const FiniteMatrix& A) { return index_of[detail::encode_matrix(M, A)]; };

    // T[s][i] = index of f_s(^s g_i); images of SL stay in SL
    std::vector<std::vector<std::int32_t>> T(static_cast<std::size_t>(m), std::vector<std::int32_t>(N));
    {
        const unsigned W = detail::worker_count();
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < W; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < N; i += W)
                    for (int s = 0; s < m; ++s) T[static_cast<std::size_t>(s)][i] = lookup(c.twisted(s, SL[i]));
            });
        for (auto& th : pool) th.join();
    }
    auto Ts = [&](int s, std::int32_t i) { return T[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)]; };
    // (gamma . t)_s = f_gamma(^gamma t_(s - gamma))
    // generator first: most tuples fail there
    std::vector<int> order;
    for (int g = 1; g < m; ++g) order.push_back(g);
    order.push_back(0);
    auto invariant = [&](const std::vector<std::int32_t>& t) {
        for (int gamma : order) {
            for (int s = 0; s < m; ++s)
                if (Ts(gamma, t[static_cast<std::size_t>(((s - gamma) % m + m) % m)]) != t[static_cast<std::size_t>(s)])
                    return false;
        }
        return true;
    };
    auto section = [&](std::int32_t i) {
        std::vector<std::int32_t> t(static_cast<std::size_t>(m));
        for (int s = 0; s < m; ++s) t[static_cast<std::size_t>(s)] = Ts(s, i);
        return t;
    };

    rep.section_invariant = true;
    rep.projection_inverts = true;
    for (std::size_t i = 0; i < N; ++i) {
        auto t = section(static_cast<std::int32_t>(i));
        if (std::find(t.begin(), t.end(), -1) != t.end() || !invariant(t)) rep.section_invariant = false;
        if (t[0] != static_cast<std::int32_t>(i)) rep.projection_inverts = false;
    }

    // injectivity of projection on invariant tuples
    auto saturating_pow = [](std::uint64_t b, int e) {
        std::uint64_t r = 1;
        for (int k = 0; k < e; ++k) r = (b != 0 && r > UINT64_MAX / b) ? UINT64_MAX : r * b;
        return r;
    };
    std::mt19937_64 rng(opt.seed);
    auto scan = [&](std::int32_t first, std::uint64_t count, int free_from) {
        // tuples with components [0, free_from) fixed by `first` (or free when free_from = 0)
        std::vector<std::int32_t> t(static_cast<std::size_t>(m), 0);
        bool ok = true;
        std::uint64_t found = 0;
        for (std::uint64_t code = 0; code < count; ++code) {
            std::uint64_t x = code;
            for (int s = 0; s < m; ++s) {
                if (s < free_from) {
                    t[static_cast<std::size_t>(s)] = first;
                    continue;
                }
                t[static_cast<std::size_t>(s)] = static_cast<std::int32_t>(x % N);
                x /= N;
            }
            if (!invariant(t)) continue;
            ++found;
            if (t != section(t[0])) ok = false;
        }
        return std::make_pair(found, ok);
    };
    const std::uint64_t all_tuples = saturating_pow(N, m);
    if (all_tuples <= opt.budget) {
        rep.tuple_mode = "exhaustive";
        auto [found, ok] = scan(0, all_tuples, 0);
        rep.tuples_enumerated = all_tuples;
        rep.invariant_tuples = found;
        rep.injective = ok && found == N;
    } else {
        rep.tuple_mode = "fibres";
        const std::uint64_t fibre = saturating_pow(N, m - 1);
        if (fibre > opt.budget)
            throw Error(Errc::BudgetExceeded, "fibre of the projection has " + std::to_string(fibre) + " tuples");
        rep.injective = true;
        const std::uint64_t F = std::min<std::uint64_t>(static_cast<std::uint64_t>(opt.samples), N);
        for (std::uint64_t k = 0; k < F; ++k) {
            auto g = static_cast<std::int32_t>(F == N ? k : rng() % N);
            auto [found, ok] = scan(g, fibre, 1);
            rep.tuples_enumerated += fibre;
            rep.invariant_tuples += found;
            if (!ok || found != 1) rep.injective = false;
        }
        rep.fibres_checked = F;
    }

    // homomorphism on sampled pairs, componentwise in the product
    rep.homomorphism_pairs = opt.samples;
    rep.homomorphism_ok = true;
    for (int k = 0; k < opt.samples; ++k) {
        auto i = static_cast<std::int32_t>(rng() % N), j = static_cast<std::int32_t>(rng() % N);
        auto ij = lookup(alg.mul(SL[static_cast<std::size_t>(i)], SL[static_cast<std::size_t>(j)]));
        auto si = section(i), sj = section(j), sij = section(ij);
        for (int s = 0; s < m; ++s) {
            auto prod = alg.mul(SL[static_cast<std::size_t>(si[static_cast<std::size_t>(s)])],
                                SL[static_cast<std::size_t>(sj[static_cast<std::size_t>(s)])]);
            if (lookup(prod) != sij[static_cast<std::size_t>(s)]) rep.homomorphism_ok = false;
        }
    }

    // F-points: H(F) against the constant tuples fixed by the twisted action
    auto H = twisted_fixed_points(M, c, opt.budget, true);
    rep.f_level_order = H.order;
    std::vector<std::int32_t> diag;
    for (std::size_t i = 0; i < N; ++i) {
        std::vector<std::int32_t> t(static_cast<std::size_t>(m), static_cast<std::int32_t>(i));
        if (invariant(t)) diag.push_back(static_cast<std::int32_t>(i));
    }
    rep.diagonal_invariant = diag.size();
    std::vector<std::int32_t> h;
    for (const auto& g : H.elements) h.push_back(lookup(g));
    std::sort(h.begin(), h.end());
    rep.f_level_bijective = (h == diag);
    for (auto i : diag)
        if (section(i) != std::vector<std::int32_t>(static_cast<std::size_t>(m), i)) rep.f_level_bijective = false;

    rep.passed = rep.section_invariant && rep.projection_inverts && rep.injective && rep.homomorphism_ok && rep.f_level_bijective;
    return rep;
}

// ---------------------------------------------------------------- base change

/// The intermediate model over GF(q^d) (same E) and the cocycle restricted to the subgroup generated by phi^d.
inline std::pair<FiniteModel, FiniteCocycle> restrict_cocycle(const FiniteModel& M, const FiniteCocycle& c, int d) {
    if (d < 1 || M.m % d != 0) throw Error(Errc::InvalidArgument, std::to_string(d) + " does not divide m = " + std::to_string(M.m));
    FiniteModel M0 = M;
    M0.r = M.r * d;
    M0.m = M.m / d;
    M0.q = static_cast<long>(ipow(M.p, M0.r));
    std::map<int, CocycleEntry<FiniteRing>> f;
    for (int k = 0; k < M0.m; ++k) f[k] = c.at(k * d);
    return {M0, cocycle_make(M0.algebra(), M0.group(), std::move(f))};
}

struct BaseChangeReport {
    int d = 1;
    long q0 = 0;
    int m0 = 0;
    std::uint64_t order_F = 0;     // H(F)
    std::uint64_t order_F0 = 0;    // restricted cocycle over the intermediate model
    std::uint64_t direct_F0 = 0;   // g with f_d(^d g) = g, computed in the original model
    bool subset = false;           // H(F) inside H(F0)
    bool consistent = false;
};

inline BaseChangeReport base_change_check(const FiniteModel& M, const FiniteCocycle& c, int d,
                                          std::uint64_t budget = kDefaultBudget) {
    BaseChangeReport r;
    r.d = d;
    auto [M0, c0] = restrict_cocycle(M, c, d);
    r.q0 = M0.q;
    r.m0 = M0.m;
    auto HF = twisted_fixed_points(M, c, budget, true);
    auto HF0 = twisted_fixed_points(M0, c0, budget, true);
    r.order_F = HF.order;
    r.order_F0 = HF0.order;
    const int s = d % M.m;
    r.direct_F0 = detail::enumerate_sl(M, budget, [&](const FiniteMatrix& g) { return c.twisted(s, g) == g; }).size();
    std::vector<FiniteMatrix> a = HF.elements, b = HF0.elements;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    r.subset = std::includes(b.begin(), b.end(), a.begin(), a.end());
    r.consistent = r.order_F0 == r.direct_F0 && r.subset && (r.order_F0 % std::max<std::uint64_t>(r.order_F, 1) == 0);
    return r;
}

// ---------------------------------------------------------------- JSON

namespace io {

inline Json to_json(const FiniteModel& M) {
    Json j;
    j["q"] = M.q;
    j["m"] = M.m;
    j["n"] = M.n;
    j["E_modulus"] = M.E->modulus_str();
    return j;
}

inline Json to_json(const ProjectionReport& r) {
    Json j;
    j["e_level_order"] = r.e_level_order;
    j["section_invariant"] = r.section_invariant;
    j["projection_inverts"] = r.projection_inverts;
    j["tuple_mode"] = r.tuple_mode;
    j["tuples_enumerated"] = r.tuples_enumerated;
    j["invariant_tuples"] = r.invariant_tuples;
    j["fibres_checked"] = r.fibres_checked;
    j["injective"] = r.injective;
    j["homomorphism_pairs"] = r.homomorphism_pairs;
    j["homomorphism_ok"] = r.homomorphism_ok;
    j["f_level_order"] = r.f_level_order;
    j["diagonal_invariant"] = r.diagonal_invariant;
    j["f_level_bijective"] = r.f_level_bijective;
    j["passed"] = r.passed;
    return j;
}

inline Json to_json(const BaseChangeReport& r) {
    Json j;
    j["d"] = r.d;
    j["q0"] = r.q0;
    j["m0"] = r.m0;
    j["order_F"] = r.order_F;
    j["order_F0"] = r.order_F0;
    j["direct_F0"] = r.direct_F0;
    j["subset"] = r.subset;
    j["consistent"] = r.consistent;
    return j;
}

/// Keys are group indices; "0" may be omitted and then defaults to (I, false).
inline int group_index_from(const std::string& key) {
    if (key == "0") return 0;
    return static_cast<int>(place_from(key));
}

template <class R, class ElemFrom>
std::map<int, CocycleEntry<R>> assignments_from(const Json& j, const MatrixAlgebra<R>& alg, ElemFrom elem) {
    const Json& as = member(j, "assignments");
    if (!as.is_object()) schema("assignments must be an object");
    std::map<int, CocycleEntry<R>> f;
    const int n = alg.n();
    for (auto it = as.begin(); it != as.end(); ++it) {
        int s = group_index_from(it.key());
        const Json& e = it.value();
        const Json& a = member(e, "alpha");
        if (!a.is_array() || static_cast<int>(a.size()) != n) throw Error(Errc::CoefficientDimensionMismatch, "alpha must have n rows");
        typename MatrixAlgebra<R>::Matrix A;
        for (const auto& row : a) {
            if (!row.is_array() || static_cast<int>(row.size()) != n)
                throw Error(Errc::CoefficientDimensionMismatch, "alpha rows must have n entries");
            for (const auto& x : row) A.push_back(elem(x));
        }
        bool flip = false;
        if (e.contains("flip")) {
            if (!e["flip"].is_boolean()) schema("flip must be a boolean");
            flip = e["flip"].get<bool>();
        }
        f[s] = {std::move(A), flip};
    }
    return f;
}

}  // namespace io

/// Finite-model cocycle document: {"model": {"q","m","n"}, "assignments": {"1": {"alpha": [[...]], "flip": b}}}.
/// Only the generator "1" may be given, in which case the rest follows from the cyclic recursion.
inline std::pair<FiniteModel, FiniteCocycle> finite_cocycle_from(const Json& j, bool validate = true) {
    const Json& mj = io::member(j, "model");
    auto get = [&](const char* k) {
        const Json& x = io::member(mj, k);
        if (!x.is_number_integer()) io::schema(std::string("model.") + k + " must be an integer");
        return x.get<long>();
    };
    FiniteModel M = FiniteModel::make(get("q"), static_cast<int>(get("m")), static_cast<int>(get("n")));
    auto alg = M.algebra();
    Json as = io::member(j, "assignments");
    for (auto it = as.begin(); it != as.end(); ++it) io::group_index_from(it.key());
    auto f = io::assignments_from(j, alg, [&](const Json& x) {
        if (!x.is_number_integer() || x.get<long>() < 0 || !M.E->valid(static_cast<GaloisField::Elem>(x.get<long>())))
            io::schema("finite-field entries are integers in [0, " + std::to_string(M.E->size()) + ")");
        return static_cast<GaloisField::Elem>(x.get<long>());
    });
    if (!f.count(0)) f[0] = {alg.identity(), false};
    if (f.size() == 2 && f.count(1) && M.m > 2) f = cyclic_assignments(M, f[1].alpha, f[1].flip);
    if (!validate) return {M, cocycle_make_unchecked(alg, M.group(), std::move(f))};
    return {M, cocycle_make(alg, M.group(), std::move(f))};
}

using FieldCocycle = Cocycle<NumberFieldRing>;

/// Number-field cocycle document: {"field": {...}, "group": [0, 1], "n": 3, "assignments": {...}} with entries as coordinate vectors.
inline FieldCocycle field_cocycle_from(const Json& j) {
    auto K = std::make_shared<const NumberField>(io::field_from(io::member(j, "field")));
    const Json& nj = io::member(j, "n");
    if (!nj.is_number_integer() || nj.get<int>() < 1) io::schema("n must be a positive integer");
    MatrixAlgebra<NumberFieldRing> alg(NumberFieldRing{K}, nj.get<int>());
    Subgroup S = K->full_group();
    if (j.contains("group")) {
        std::vector<int> members;
        for (const auto& x : j["group"]) {
            if (!x.is_number_integer()) io::schema("group must list automorphism indices");
            members.push_back(x.get<int>());
        }
        for (int s : members) K->check_index(s);
        S = K->subgroup(members);
    }
    const Json& as = io::member(j, "assignments");
    for (auto it = as.begin(); it != as.end(); ++it) io::group_index_from(it.key());
    auto f = io::assignments_from(j, alg, [&](const Json& x) { return io::element_from(x, *K); });
    if (!f.count(0)) f[0] = {alg.identity(), false};
    return cocycle_make(alg, GroupTable::of(K, S), std::move(f));
}

}  // namespace twist

#endif
