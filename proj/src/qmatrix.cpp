#include "ncpn/qmatrix.hpp"

namespace ncpn {

QMatrix QMatrix::identity(int n) {
    QMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

QMatrix QMatrix::operator+(const QMatrix& o) const {
    if (r_ != o.r_ || c_ != o.c_) throw Error("matrix shape mismatch");
    QMatrix m(r_, c_);
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] + o.a_[i];
    return m;
}

QMatrix QMatrix::operator-(const QMatrix& o) const {
    if (r_ != o.r_ || c_ != o.c_) throw Error("matrix shape mismatch");
    QMatrix m(r_, c_);
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] - o.a_[i];
    return m;
}

QMatrix QMatrix::operator*(const QMatrix& o) const {
    if (c_ != o.r_) throw Error("matrix shape mismatch");
    QMatrix m(r_, o.c_);
    for (int i = 0; i < r_; ++i)
        for (int k = 0; k < c_; ++k) {
            const Rational& v = at(i, k);
            if (sgn(v) == 0) continue;
            for (int j = 0; j < o.c_; ++j) m.at(i, j) += v * o.at(k, j);
        }
    return m;
}

QMatrix QMatrix::scaled(const Rational& c) const {
    QMatrix m(r_, c_);
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] * c;
    return m;
}

bool QMatrix::operator==(const QMatrix& o) const {
    return r_ == o.r_ && c_ == o.c_ && a_ == o.a_;
}

bool QMatrix::is_zero() const {
    for (const Rational& v : a_)
        if (sgn(v) != 0) return false;
    return true;
}

Rational QMatrix::trace() const {
    if (r_ != c_) throw Error("trace of a non-square matrix");
    Rational t = 0;
    for (int i = 0; i < r_; ++i) t += at(i, i);
    return t;
}

std::optional<QMatrix> QMatrix::inverse() const {
    if (r_ != c_) return std::nullopt;
    QMatrix a = *this;
    QMatrix inv = identity(r_);
    for (int col = 0; col < c_; ++col) {
        int pivot = -1;
        for (int row = col; row < r_; ++row)
            if (sgn(a.at(row, col)) != 0) {
                pivot = row;
                break;
            }
        if (pivot < 0) return std::nullopt;
        if (pivot != col)
            for (int j = 0; j < c_; ++j) {
                std::swap(a.at(pivot, j), a.at(col, j));
                std::swap(inv.at(pivot, j), inv.at(col, j));
            }
        Rational p = a.at(col, col);
        for (int j = 0; j < c_; ++j) {
            a.at(col, j) /= p;
            inv.at(col, j) /= p;
        }
        for (int row = 0; row < r_; ++row) {
            if (row == col) continue;
            Rational f = a.at(row, col);
            if (sgn(f) == 0) continue;
            for (int j = 0; j < c_; ++j) {
                a.at(row, j) -= f * a.at(col, j);
                inv.at(row, j) -= f * inv.at(col, j);
            }
        }
    }
    return inv;
}

std::string QMatrix::str() const {
    std::string s = "[";
    for (int i = 0; i < r_; ++i) {
        if (i) s += "; ";
        for (int j = 0; j < c_; ++j) {
            if (j) s += " ";
            s += rat_str(at(i, j));
        }
    }
    return s + "]";
}

} // namespace ncpn
