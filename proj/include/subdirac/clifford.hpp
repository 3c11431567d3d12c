#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linalg.hpp"

namespace subdirac::clifford {

/// The four constant 2x2 matrices generating End(C^2).
struct PauliKit {
    CMat sigma0, sigma1, sigma2, sigma3;

    PauliKit() : sigma0(2, 2), sigma1(2, 2), sigma2(2, 2), sigma3(2, 2) {
        sigma0(0, 0) = 1;
        sigma0(1, 1) = 1;
        sigma1(0, 1) = 1;
        sigma1(1, 0) = 1;
        sigma2(0, 1) = cx(0, -1);
        sigma2(1, 0) = cx(0, 1);
        sigma3(0, 0) = 1;
        sigma3(1, 1) = -1;
    }

    const CMat& sigma(int a) const {
        switch (a) {
            case 0: return sigma0;
            case 1: return sigma1;
            case 2: return sigma2;
            default: return sigma3;
        }
    }
};

inline const PauliKit& pauli() {
    static const PauliKit kit;
    return kit;
}

/// Irreducible complex Clifford representation with the fixed tensor-product
/// generator conventions used throughout this library. For odd n the extra
/// abstract generator acts as the scalar odd_sign on the chosen component.
struct CliffordRep {
    int n = 0;
    int spinor_dim = 0;
    int odd_sign = +1;
    std::vector<CMat> generators; // generators[i-1] = gamma(e_i)

    const CMat& gamma(int i) const { return generators[static_cast<size_t>(i) - 1]; }
};

/// Number of 2x2 tensor factors for ambient dimension n.
inline int tensor_factors(int n) { return n / 2; }

inline CliffordRep build_clifford(int n, int odd_sign = +1) {
    if (n < 1) throw DimensionError("build_clifford: n must be >= 1, got " + std::to_string(n));
    if (odd_sign != 1 && odd_sign != -1)
        throw ValidationError("build_clifford: odd_sign must be +1 or -1");

    const auto& p = pauli();
    const int m = tensor_factors(n);
    const int dim = 1 << m;

    CliffordRep rep;
    rep.n = n;
    rep.spinor_dim = dim;
    rep.odd_sign = odd_sign;
    rep.generators.reserve(static_cast<size_t>(n));

    // Builds sigma_1^{(m-j)} (x) sigma_a (x) sigma_0^{(j-1)}.
    auto word = [&](int j, int a) {
        CMat out = CMat::identity(1);
        for (int t = 0; t < m - j; ++t) out = kron(out, p.sigma1);
        out = kron(out, p.sigma(a));
        for (int t = 0; t < j - 1; ++t) out = kron(out, p.sigma0);
        return out;
    };

    for (int i = 1; i <= n; ++i) {
        CMat g;
        if (i == 1) {
            g = CMat::identity(1);
            for (int t = 0; t < m; ++t) g = kron(g, p.sigma1);
            if (n % 2 == 1) g *= cx(static_cast<double>(odd_sign), 0.0);
        } else if (i % 2 == 0) {
            g = word(i / 2, 2);
        } else {
            g = word(i / 2, 3);
        }
        rep.generators.push_back(std::move(g));
    }
    return rep;
}

/// One term of an exterior-form expansion: a strictly increasing multi-index
/// together with a complex coefficient.
struct FormTerm {
    std::vector<int> indices; // 1-based, strictly increasing
    cx coeff;
};
using Form = std::vector<FormTerm>;

/// Matrix image of an exterior form. Degree-1 terms map to generators,
/// higher degrees to antisymmetrized generator products; for strictly
/// increasing indices that product is the plain one.
inline CMat gamma_of_form(const CliffordRep& rep, const Form& form) {
    CMat out(rep.spinor_dim, rep.spinor_dim);
    for (const auto& term : form) {
        CMat w = CMat::identity(rep.spinor_dim);
        int prev = 0;
        for (int idx : term.indices) {
            if (idx < 1 || idx > rep.n)
                throw FormError("index " + std::to_string(idx) + " outside 1.." + std::to_string(rep.n));
            if (idx <= prev)
                throw FormError("multi-index not strictly increasing at " + std::to_string(idx));
            prev = idx;
            w = w * rep.gamma(idx);
        }
        out += term.coeff * w;
    }
    return out;
}

using Spinor = CVec;
using CoSpinor = CVec; // row vector, stored as plain components

/// Antilinear pairing map: entrywise conjugate, read as a row vector.
inline CoSpinor phi_map(const Spinor& s) {
    CoSpinor out(s.size());
    for (size_t i = 0; i < s.size(); ++i) out[i] = std::conj(s[i]);
    return out;
}

inline cx pair_with(const CoSpinor& bar, const CMat& m, const Spinor& s) {
    cx total{};
    for (int i = 0; i < m.rows(); ++i) {
        cx row{};
        for (int j = 0; j < m.cols(); ++j) row += m(i, j) * s[static_cast<size_t>(j)];
        total += bar[static_cast<size_t>(i)] * row;
    }
    return total;
}

inline cx pair_with(const CoSpinor& bar, const Spinor& s) {
    cx total{};
    for (size_t i = 0; i < s.size(); ++i) total += bar[i] * s[i];
    return total;
}

struct FramePair {
    Spinor psi;
    CoSpinor psi_bar;
};

namespace detail {

inline std::vector<Spinor> frame_candidates() {
    const double r = 1.0 / std::sqrt(2.0);
    return {
        {cx(r, 0), cx(r, 0)},   // b1
        {cx(r, 0), cx(0, r)},   // b2
        {cx(1, 0), cx(0, 0)},   // b3
        {cx(r, 0), cx(-r, 0)},  // negated-direction partners, used only
        {cx(r, 0), cx(0, -r)},  // when the odd generator acts as -1
        {cx(0, 0), cx(1, 0)},
    };
}

inline Spinor tensor_word(const std::vector<int>& digits) {
    const auto cands = frame_candidates();
    Spinor out{cx(1, 0)};
    for (int d : digits) {
        const Spinor& b = cands[static_cast<size_t>(d)];
        Spinor next(out.size() * b.size());
        for (size_t i = 0; i < out.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j) next[i * b.size() + j] = out[i] * b[j];
        out = next;
    }
    return out;
}

} // namespace detail

/// Frame spinor pairs: for each ambient index a, a pair with
/// psi_bar gamma(e_b) psi = delta_ab for every b. Constructed by a
/// deterministic lexicographic search over tensor words of the two-component
/// frame candidates, validated directly against the defining identity.
inline std::vector<FramePair> frame_spinors(const CliffordRep& rep) {
    const int m = tensor_factors(rep.n);
    std::vector<FramePair> out;
    out.reserve(static_cast<size_t>(rep.n));

    std::vector<int> digits(static_cast<size_t>(std::max(m, 0)), 0);
    for (int a = 1; a <= rep.n; ++a) {
        bool found = false;
        std::fill(digits.begin(), digits.end(), 0);
        while (true) {
            Spinor psi = detail::tensor_word(digits);
            CoSpinor bar = phi_map(psi);
            bool ok = true;
            for (int b = 1; b <= rep.n && ok; ++b) {
                const cx v = pair_with(bar, rep.gamma(b), psi);
                const double want = (a == b) ? 1.0 : 0.0;
                if (std::abs(v - want) > 1e-12) ok = false;
            }
            if (ok) {
                out.push_back({std::move(psi), std::move(bar)});
                found = true;
                break;
            }
            // next word in lexicographic order
            int pos = static_cast<int>(digits.size()) - 1;
            while (pos >= 0 && digits[static_cast<size_t>(pos)] == 5) {
                digits[static_cast<size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
            ++digits[static_cast<size_t>(pos)];
        }
        if (!found)
            throw ValidationError("frame_spinors: no tensor word satisfies the frame identity for a=" +
                                  std::to_string(a));
    }
    return out;
}

/// A sum of generator words with complex coefficients; the element
/// representation accepted by the inclusion maps. Indices are 1-based and
/// need not be increasing (words multiply as written).
struct WordTerm {
    std::vector<int> word;
    cx coeff;
};
using WordSum = std::vector<WordTerm>;

/// Generator-wise inclusion: each index-i generator of the small algebra maps
/// to the index-i generator of the large one; words map multiplicatively.
inline CMat tau_inclusion(int k, int n, const CliffordRep& rep_k, const CliffordRep& rep_n,
                          const WordSum& element) {
    if (k >= n)
        throw InclusionError("tau_inclusion requires k < n, got k=" + std::to_string(k) +
                             ", n=" + std::to_string(n));
    if (rep_k.n != k || rep_n.n != n)
        throw InclusionError("tau_inclusion: representation dimensions disagree with (k, n)");
    CMat out(rep_n.spinor_dim, rep_n.spinor_dim);
    for (const auto& term : element) {
        CMat w = CMat::identity(rep_n.spinor_dim);
        for (int idx : term.word) {
            if (idx < 1 || idx > k)
                throw InclusionError("word index " + std::to_string(idx) + " outside 1.." +
                                     std::to_string(k));
            w = w * rep_n.gamma(idx);
        }
        out += term.coeff * w;
    }
    return out;
}

/// Algebra inclusion on matrices: pads with identity tensor factors and,
/// when the effective odd signs of source and target disagree, conjugates by
/// the sigma_1 word so that even products of generators are carried onto the
/// corresponding products of the large representation.
inline CMat iota_inclusion(int k, int n, const CliffordRep& rep_k, const CliffordRep& rep_n,
                           const CMat& element) {
    if (k >= n)
        throw InclusionError("iota_inclusion requires k < n");
    if (element.rows() != rep_k.spinor_dim || element.cols() != rep_k.spinor_dim)
        throw InclusionError("iota_inclusion: element has wrong size");
    const int mk = tensor_factors(k);
    const int mn = tensor_factors(n);
    const int sign_k = (k % 2 == 1) ? rep_k.odd_sign : +1;
    const int sign_n = (n % 2 == 1) ? rep_n.odd_sign : +1;

    CMat body = element;
    if (sign_k != sign_n) {
        CMat g1 = CMat::identity(1);
        for (int t = 0; t < mk; ++t) g1 = kron(g1, pauli().sigma1);
        body = g1 * body * g1;
    }
    CMat pad = CMat::identity(1 << (mn - mk));
    return kron(pad, body);
}

/// An even Clifford exponential together with the rotation it covers.
struct SpinElement {
    CMat matrix;
    std::optional<RMat> source_rotation;
};

/// exp(1/4 sum_ij omega_ij gamma_i gamma_j) for antisymmetric omega. The 1/4
/// makes the covered rotation equal exp(omega).
inline SpinElement spin_exp(const CliffordRep& rep, const RMat& omega) {
    if (omega.rows() != rep.n || omega.cols() != rep.n)
        throw DimensionError("spin_exp: omega must be n x n");
    double asym = 0.0;
    for (int i = 0; i < rep.n; ++i)
        for (int j = 0; j < rep.n; ++j) asym = std::max(asym, std::abs(omega(i, j) + omega(j, i)));
    if (asym > 1e-12)
        throw ValidationError("spin_exp: omega is not antisymmetric (residual " + std::to_string(asym) + ")");

    CMat big(rep.spinor_dim, rep.spinor_dim);
    for (int i = 1; i <= rep.n; ++i)
        for (int j = 1; j <= rep.n; ++j) {
            const double w = omega(i - 1, j - 1);
            if (w == 0.0) continue;
            big += cx(0.25 * w, 0.0) * (rep.gamma(i) * rep.gamma(j));
        }
    SpinElement s;
    s.matrix = expm(big);
    s.source_rotation = expm(omega);
    return s;
}

/// Rotation covered by a spin element: R_ji defined through conjugation of
/// the generators. Errors out if the conjugation leaves the generator span.
inline RMat extract_rotation(const CliffordRep& rep, const SpinElement& s) {
    const int dim = rep.spinor_dim;
    if ((s.matrix * s.matrix.adjoint() - CMat::identity(dim)).max_abs() > 1e-9)
        throw ValidationError("extract_rotation: spin element is not unitary");
    const CMat inv = s.matrix.adjoint();
    RMat r(rep.n, rep.n);
    for (int i = 1; i <= rep.n; ++i) {
        const CMat conj = s.matrix * rep.gamma(i) * inv;
        CMat recon(dim, dim);
        for (int j = 1; j <= rep.n; ++j) {
            const cx c = (rep.gamma(j) * conj).trace() * (1.0 / dim);
            if (std::abs(c.imag()) > 1e-9)
                throw ValidationError("extract_rotation: complex coefficient in generator expansion");
            r(j - 1, i - 1) = c.real();
            recon += cx(c.real(), 0.0) * rep.gamma(j);
        }
        if ((recon - conj).max_abs() > 1e-10)
            throw ValidationError("extract_rotation: conjugation leaves the generator span");
    }
    if ((r.transpose() * r - RMat::identity(rep.n)).max_abs() > 1e-10)
        throw ValidationError("extract_rotation: result is not orthogonal");
    return r;
}

namespace detail {

/// Deterministic lift of an arbitrary rotation through a plane-rotation
/// (Givens) factorization. Any branch is acceptable at a base point.
inline SpinElement lift_by_factorization(const CliffordRep& rep, const RMat& r) {
    const int n = rep.n;
    RMat a = r;
    SpinElement s;
    s.matrix = CMat::identity(rep.spinor_dim);
    for (int col = 0; col < n - 1; ++col) {
        for (int row = col + 1; row < n; ++row) {
            const double x = a(col, col), y = a(row, col);
            const double rad = std::hypot(x, y);
            if (rad < 1e-14 || std::abs(y) < 1e-15) continue;
            const double theta = std::atan2(y, x);
            RMat omega(n, n);
            omega(col, row) = theta;
            omega(row, col) = -theta;
            // exp(omega) applied on the left rotates (col,row) rows so that
            // the (row, col) entry vanishes.
            a = expm(omega) * a;
            RMat back = omega * -1.0;
            s.matrix = s.matrix * spin_exp(rep, back).matrix;
        }
    }
    // Residual diagonal of +-1 entries with det +1: clear paired flips.
    for (int i = 0; i < n; ++i) {
        if (a(i, i) < 0.0) {
            int j = i + 1;
            while (j < n && a(j, j) > 0.0) ++j;
            if (j >= n) throw ValidationError("lift_by_factorization: input is not a rotation");
            RMat omega(n, n);
            omega(i, j) = kPi;
            omega(j, i) = -kPi;
            a = expm(omega) * a;
            s.matrix = s.matrix * spin_exp(rep, omega * -1.0).matrix;
        }
    }
    if ((a - RMat::identity(n)).max_abs() > 1e-9)
        throw ValidationError("lift_by_factorization: factorization did not reach identity");
    s.source_rotation = r;
    return s;
}

} // namespace detail

/// Continuous lift of a rotation field given in row-major grid order with the
/// given number of columns (cols = size of the fastest axis; pass the total
/// count as cols for one-dimensional fields). The base sample gets a
/// deterministic branch; every other sample is propagated from its
/// predecessor through the principal relative rotation. Adjacent rotations
/// further than pi/2 apart (conservative Frobenius bound) raise an error
/// naming the offending edge.
inline std::vector<SpinElement> spin_lift_field(const CliffordRep& rep,
                                                const std::vector<RMat>& rotations, int cols) {
    if (rotations.empty()) return {};
    const int total = static_cast<int>(rotations.size());
    std::vector<SpinElement> out(rotations.size());
    out[0] = detail::lift_by_factorization(rep, rotations[0]);
    for (int idx = 1; idx < total; ++idx) {
        const int prev = (idx % cols == 0) ? idx - cols : idx - 1;
        const RMat rel = rotations[static_cast<size_t>(idx)] *
                         rotations[static_cast<size_t>(prev)].transpose();
        RMat omega;
        try {
            omega = rotation_log(rel);
        } catch (const ValidationError&) {
            throw LiftError("rotation field discontinuous at grid edge " + std::to_string(prev) +
                            " -> " + std::to_string(idx));
        }
        if (omega.frobenius() / std::sqrt(2.0) >= kPi / 2.0)
            throw LiftError("adjacent rotations further than pi/2 apart at grid edge " +
                            std::to_string(prev) + " -> " + std::to_string(idx));
        out[static_cast<size_t>(idx)].matrix =
            spin_exp(rep, omega).matrix * out[static_cast<size_t>(prev)].matrix;
        out[static_cast<size_t>(idx)].source_rotation = rotations[static_cast<size_t>(idx)];
    }
    return out;
}

} // namespace subdirac::clifford
