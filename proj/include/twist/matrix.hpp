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

// Square matrices over a field adaptor. An adaptor provides Elem, zero, one,
// add, sub, neg, mul, inv, is_zero and act(g, x) (a Galois automorphism).

#ifndef TWIST_MATRIX_HPP
#define TWIST_MATRIX_HPP

#include <memory>
#include <optional>
#include <vector>

#include "twist/galois_field.hpp"
#include "twist/number_field.hpp"

namespace twist {

/// GF(q^m) with Galois group generated by x -> x^q, q = p^r.
struct FiniteRing {
    using Elem = GaloisField::Elem;
    std::shared_ptr<const GaloisField> F;
    int r = 1;

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem add(Elem a, Elem b) const { return F->add(a, b); }
    Elem sub(Elem a, Elem b) const { return F->sub(a, b); }
    Elem neg(Elem a) const { return F->neg(a); }
    Elem mul(Elem a, Elem b) const { return F->mul(a, b); }
    Elem inv(Elem a) const { return F->inv(a); }
    bool is_zero(Elem a) const { return a == 0; }
    /// phi^g with phi the q-power map
    Elem act(int g, Elem a) const { return F->frobenius(a, r * g); }
};

struct NumberFieldRing {
    using Elem = FieldElement;
    std::shared_ptr<const NumberField> K;

    Elem zero() const { return K->zero(); }
    Elem one() const { return K->one(); }
    Elem add(const Elem& a, const Elem& b) const { return K->add(a, b); }
    Elem sub(const Elem& a, const Elem& b) const { return K->sub(a, b); }
    Elem neg(const Elem& a) const { return K->neg(a); }
    Elem mul(const Elem& a, const Elem& b) const { return K->mul(a, b); }
    Elem inv(const Elem& a) const { return K->inv(a); }
    bool is_zero(const Elem& a) const { return a.is_zero(); }
    Elem act(int g, const Elem& a) const { return K->apply(g, a); }
};

template <class R>
class MatrixAlgebra {
   public:
    using Elem = typename R::Elem;
    using Matrix = std::vector<Elem>;  // row-major n x n

    MatrixAlgebra(R ring, int n) : ring_(std::move(ring)), n_(n) {}

    const R& ring() const { return ring_; }
    int n() const { return n_; }
    std::size_t entries() const { return static_cast<std::size_t>(n_ * n_); }

    Matrix identity() const {
        Matrix I(entries(), ring_.zero());
        for (int i = 0; i < n_; ++i) I[idx(i, i)] = ring_.one();
        return I;
    }
    Matrix diagonal(const std::vector<Elem>& d) const {
        Matrix D(entries(), ring_.zero());
        for (int i = 0; i < n_; ++i) D[idx(i, i)] = d[static_cast<std::size_t>(i)];
        return D;
    }
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i * n_ + j); }

    Matrix mul(const Matrix& A, const Matrix& B) const {
        Matrix C(entries(), ring_.zero());
        for (int i = 0; i < n_; ++i)
            for (int k = 0; k < n_; ++k) {
                const Elem& a = A[idx(i, k)];
                if (ring_.is_zero(a)) continue;
                for (int j = 0; j < n_; ++j) C[idx(i, j)] = ring_.add(C[idx(i, j)], ring_.mul(a, B[idx(k, j)]));
            }
        return C;
    }
    Matrix transpose(const Matrix& A) const {
        Matrix T(entries(), ring_.zero());
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) T[idx(j, i)] = A[idx(i, j)];
        return T;
    }
    Matrix scale(const Elem& c, const Matrix& A) const {
        Matrix B = A;
        for (auto& x : B) x = ring_.mul(c, x);
        return B;
    }
    Matrix act(int g, const Matrix& A) const {
        if (g == 0) return A;
        Matrix B = A;
        for (auto& x : B) x = ring_.act(g, x);
        return B;
    }

    Elem det(Matrix A) const {
        if (n_ == 2) return ring_.sub(ring_.mul(A[0], A[3]), ring_.mul(A[1], A[2]));
        Elem d = ring_.one();
        for (int c = 0; c < n_; ++c) {
            int piv = c;
            while (piv < n_ && ring_.is_zero(A[idx(piv, c)])) ++piv;
            if (piv == n_) return ring_.zero();
            if (piv != c) {
                for (int j = 0; j < n_; ++j) std::swap(A[idx(piv, j)], A[idx(c, j)]);
                d = ring_.neg(d);
            }
            d = ring_.mul(d, A[idx(c, c)]);
            Elem inv = ring_.inv(A[idx(c, c)]);
            for (int r = c + 1; r < n_; ++r) {
                if (ring_.is_zero(A[idx(r, c)])) continue;
                Elem f = ring_.mul(A[idx(r, c)], inv);
                for (int j = c; j < n_; ++j) A[idx(r, j)] = ring_.sub(A[idx(r, j)], ring_.mul(f, A[idx(c, j)]));
            }
        }
        return d;
    }

    std::optional<Matrix> try_inverse(Matrix A) const {
        Matrix I = identity();
        for (int c = 0; c < n_; ++c) {
            int piv = c;
            while (piv < n_ && ring_.is_zero(A[idx(piv, c)])) ++piv;
            if (piv == n_) return std::nullopt;
            if (piv != c)
                for (int j = 0; j < n_; ++j) {
                    std::swap(A[idx(piv, j)], A[idx(c, j)]);
                    std::swap(I[idx(piv, j)], I[idx(c, j)]);
                }
            Elem inv = ring_.inv(A[idx(c, c)]);
            for (int j = 0; j < n_; ++j) {
                A[idx(c, j)] = ring_.mul(inv, A[idx(c, j)]);
                I[idx(c, j)] = ring_.mul(inv, I[idx(c, j)]);
            }
            for (int r = 0; r < n_; ++r) {
                if (r == c || ring_.is_zero(A[idx(r, c)])) continue;
                Elem f = A[idx(r, c)];
                for (int j = 0; j < n_; ++j) {
                    A[idx(r, j)] = ring_.sub(A[idx(r, j)], ring_.mul(f, A[idx(c, j)]));
                    I[idx(r, j)] = ring_.sub(I[idx(r, j)], ring_.mul(f, I[idx(c, j)]));
                }
            }
        }
        return I;
    }
    Matrix inverse(const Matrix& A) const {
        auto inv = try_inverse(A);
        if (!inv) throw Error(Errc::NotInvertible, "singular matrix");
        return *inv;
    }
    Matrix inverse_transpose(const Matrix& A) const { return transpose(inverse(A)); }

    /// A = c B for some nonzero c.
    bool scalar_multiple(const Matrix& A, const Matrix& B) const {
        std::optional<Elem> c;
        for (std::size_t k = 0; k < entries(); ++k) {
            const bool za = ring_.is_zero(A[k]), zb = ring_.is_zero(B[k]);
            if (za != zb) return false;
            if (za) continue;
            Elem ratio = ring_.mul(A[k], ring_.inv(B[k]));
            if (!c) c = ratio;
            else if (!(*c == ratio)) return false;
        }
        return c.has_value();
    }
    bool is_scalar(const Matrix& A) const { return scalar_multiple(A, identity()); }

   private:
    R ring_;
    int n_;
};

}  // namespace twist

#endif
