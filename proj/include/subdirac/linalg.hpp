#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <vector>

#include "core.hpp"

namespace subdirac {

/// Dense complex matrix, row-major. Sizes in this library stay tiny
/// (spinor dimensions up to 16, ambient dimensions up to 8).
class CMat {
public:
    CMat() = default;
    CMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static CMat identity(int n) {
        CMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const cx& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    CMat& operator+=(const CMat& o) {
        assert(rows_ == o.rows_ && cols_ == o.cols_);
        for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    CMat& operator-=(const CMat& o) {
        assert(rows_ == o.rows_ && cols_ == o.cols_);
        for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    CMat& operator*=(cx s) {
        for (auto& v : a_) v *= s;
        return *this;
    }

    friend CMat operator+(CMat a, const CMat& b) { return a += b; }
    friend CMat operator-(CMat a, const CMat& b) { return a -= b; }
    friend CMat operator*(CMat a, cx s) { return a *= s; }
    friend CMat operator*(cx s, CMat a) { return a *= s; }

    friend CMat operator*(const CMat& a, const CMat& b) {
        assert(a.cols_ == b.rows_);
        CMat c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const cx aik = a(i, k);
                if (aik == cx{}) continue;
                for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    CMat adjoint() const {
        CMat m(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    cx trace() const {
        cx t{};
        for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius() const {
        double s = 0.0;
        for (const auto& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<cx> a_;
};

inline CMat kron(const CMat& a, const CMat& b) {
    CMat c(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const cx aij = a(i, j);
            if (aij == cx{}) continue;
            for (int p = 0; p < b.rows(); ++p)
                for (int q = 0; q < b.cols(); ++q)
                    c(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
        }
    return c;
}

/// exp(A) by scaling and squaring with a Taylor kernel. Adequate for the
/// small, moderately scaled matrices used here.
inline CMat expm(const CMat& a) {
    assert(a.rows() == a.cols());
    const int n = a.rows();
    int squarings = 0;
    double norm = a.max_abs() * n;
    while (norm > 0.25 && squarings < 60) {
        norm *= 0.5;
        ++squarings;
    }
    CMat x = a * cx(std::ldexp(1.0, -squarings), 0.0);
    CMat result = CMat::identity(n);
    CMat term = CMat::identity(n);
    for (int k = 1; k <= 30; ++k) {
        term = term * x;
        term *= cx(1.0 / k, 0.0);
        result += term;
        if (term.max_abs() < 1e-18) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

/// Dense real matrix, row-major.
class RMat {
public:
    RMat() = default;
    RMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static RMat identity(int n) {
        RMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const double& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    RMat& operator+=(const RMat& o) {
        assert(rows_ == o.rows_ && cols_ == o.cols_);
        for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    RMat& operator-=(const RMat& o) {
        assert(rows_ == o.rows_ && cols_ == o.cols_);
        for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    RMat& operator*=(double s) {
        for (auto& v : a_) v *= s;
        return *this;
    }

    friend RMat operator+(RMat a, const RMat& b) { return a += b; }
    friend RMat operator-(RMat a, const RMat& b) { return a -= b; }
    friend RMat operator*(RMat a, double s) { return a *= s; }
    friend RMat operator*(double s, RMat a) { return a *= s; }

    friend RMat operator*(const RMat& a, const RMat& b) {
        assert(a.cols_ == b.rows_);
        RMat c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const double aik = a(i, k);
                if (aik == 0.0) continue;
                for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    RMat transpose() const {
        RMat m(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius() const {
        double s = 0.0;
        for (double v : a_) s += v * v;
        return std::sqrt(s);
    }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

/// Gaussian elimination with partial pivoting.
inline RMat inverse(const RMat& m) {
    assert(m.rows() == m.cols());
    const int n = m.rows();
    RMat a = m;
    RMat inv = RMat::identity(n);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (std::abs(a(piv, col)) < 1e-14)
            throw ValidationError("singular matrix in inverse()");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a(piv, j), a(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        const double d = 1.0 / a(col, col);
        for (int j = 0; j < n; ++j) {
            a(col, j) *= d;
            inv(col, j) *= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a(r, col);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

inline double det(const RMat& m) {
    assert(m.rows() == m.cols());
    const int n = m.rows();
    RMat a = m;
    double d = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (std::abs(a(piv, col)) == 0.0) return 0.0;
        if (piv != col) {
            d = -d;
            for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
        }
        d *= a(col, col);
        const double inv_p = 1.0 / a(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double f = a(r, col) * inv_p;
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
        }
    }
    return d;
}

inline RMat expm(const RMat& a) {
    assert(a.rows() == a.cols());
    const int n = a.rows();
    int squarings = 0;
    double norm = a.max_abs() * n;
    while (norm > 0.25 && squarings < 60) {
        norm *= 0.5;
        ++squarings;
    }
    RMat x = a * std::ldexp(1.0, -squarings);
    RMat result = RMat::identity(n);
    RMat term = RMat::identity(n);
    for (int k = 1; k <= 30; ++k) {
        term = term * x;
        term *= 1.0 / k;
        result += term;
        if (term.max_abs() < 1e-18) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

namespace detail {

/// Denman-Beavers iteration for the principal square root. Valid for
/// rotations with no angle at pi.
inline RMat sqrtm_db(const RMat& a) {
    RMat y = a;
    RMat z = RMat::identity(a.rows());
    for (int it = 0; it < 40; ++it) {
        RMat yn = (y + inverse(z)) * 0.5;
        RMat zn = (z + inverse(y)) * 0.5;
        y = yn;
        z = zn;
        if ((y * y - a).max_abs() < 1e-15) break;
    }
    return y;
}

} // namespace detail

/// Principal logarithm of a rotation matrix with all rotation angles
/// strictly below pi. Returns the antisymmetric generator.
inline RMat rotation_log(const RMat& r) {
    assert(r.rows() == r.cols());
    const int n = r.rows();
    RMat x = r;
    int doublings = 0;
    while ((x - RMat::identity(n)).frobenius() > 0.35 && doublings < 12) {
        x = detail::sqrtm_db(x);
        ++doublings;
    }
    RMat e = x - RMat::identity(n);
    if (e.frobenius() > 0.6)
        throw ValidationError("rotation_log: matrix too far from identity after scaling");
    RMat term = e;
    RMat log = e;
    for (int k = 2; k <= 48; ++k) {
        term = term * e;
        RMat add = term * (((k % 2) ? 1.0 : -1.0) / k);
        log += add;
        if (add.max_abs() < 1e-18) break;
    }
    log *= std::ldexp(1.0, doublings);
    // Antisymmetrize to clean up roundoff.
    RMat out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = 0.5 * (log(i, j) - log(j, i));
    if ((expm(out) - r).max_abs() > 1e-9)
        throw ValidationError("rotation_log: exp(log R) does not reproduce R");
    return out;
}

/// Column vector helpers used for ambient points and tangents.
using RVec = std::vector<double>;

inline RVec operator+(RVec a, const RVec& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}
inline RVec operator-(RVec a, const RVec& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}
inline RVec operator*(RVec a, double s) {
    for (auto& v : a) v *= s;
    return a;
}
inline RVec operator*(double s, RVec a) { return a * s; }

inline double dot(const RVec& a, const RVec& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}
inline double norm(const RVec& a) { return std::sqrt(dot(a, a)); }

/// Complex column vector (spinor components).
using CVec = std::vector<cx>;

inline CVec operator+(CVec a, const CVec& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}
inline CVec operator-(CVec a, const CVec& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}
inline CVec operator*(CVec a, cx s) {
    for (auto& v : a) v *= s;
    return a;
}
inline CVec operator*(cx s, CVec a) { return a * s; }

inline CVec mat_vec(const CMat& m, const CVec& v) {
    assert(m.cols() == static_cast<int>(v.size()));
    CVec out(m.rows(), cx{});
    for (int i = 0; i < m.rows(); ++i) {
        cx s{};
        for (int j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

inline double max_abs(const CVec& v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

inline RVec mat_vec(const RMat& m, const RVec& v) {
    assert(m.cols() == static_cast<int>(v.size()));
    RVec out(m.rows(), 0.0);
    for (int i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

} // namespace subdirac
