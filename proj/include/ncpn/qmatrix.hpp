#pragma once

#include "ncpn/rational.hpp"
#include "ncpn/quiver.hpp"

#include <optional>
#include <vector>

namespace ncpn {

// Dense matrices over Q, sized for representation blocks (a handful of rows).
class QMatrix {
public:
    QMatrix() = default;
    QMatrix(int rows, int cols) : r_(rows), c_(cols), a_((size_t)rows * cols, Rational(0)) {}
    static QMatrix identity(int n);

    int rows() const { return r_; }
    int cols() const { return c_; }
    Rational& at(int i, int j) { return a_[(size_t)i * c_ + j]; }
    const Rational& at(int i, int j) const { return a_[(size_t)i * c_ + j]; }

    QMatrix operator+(const QMatrix& o) const;
    QMatrix operator-(const QMatrix& o) const;
    QMatrix operator*(const QMatrix& o) const;
    QMatrix scaled(const Rational& c) const;
    bool operator==(const QMatrix& o) const;
    bool operator!=(const QMatrix& o) const { return !(*this == o); }

    bool is_zero() const;
    Rational trace() const;
    std::optional<QMatrix> inverse() const; // Gauss-Jordan, nullopt when singular

    std::string str() const;

private:
    int r_ = 0, c_ = 0;
    std::vector<Rational> a_;
};

} // namespace ncpn
