#pragma once

#include "ncpn/quiver.hpp"
#include "ncpn/rational.hpp"

#include <map>

namespace ncpn {

// Q-linear combination of words with nonzero coefficients, in canonical
// monomial order. Used both for elements of the path algebra kQ (arrow
// symbols only) and for raw words of the doubled alphabet before necklace
// reduction.
class PathPoly {
public:
    using Terms = std::map<Word, Rational>;

    PathPoly() = default;
    explicit PathPoly(const Quiver& q) : q_(&q) {}
    PathPoly(const Quiver& q, const Word& w, const Rational& c = 1) : q_(&q) { add(w, c); }

    const Quiver& quiver() const {
        if (!q_) throw Error("uninitialized PathPoly");
        return *q_;
    }
    bool compatible(const PathPoly& o) const { return q_ == o.q_ || !q_ || !o.q_; }

    bool zero() const { return terms_.empty(); }
    const Terms& terms() const { return terms_; }
    size_t term_count() const { return terms_.size(); }

    void add(const Word& w, const Rational& c);
    PathPoly& operator+=(const PathPoly& o);
    PathPoly& operator-=(const PathPoly& o);
    PathPoly operator+(const PathPoly& o) const;
    PathPoly operator-(const PathPoly& o) const;
    PathPoly operator-() const;
    PathPoly scaled(const Rational& c) const;

    // Bilinear extension of concatenation; incomposable products vanish.
    PathPoly operator*(const PathPoly& o) const;

    bool operator==(const PathPoly& o) const;
    bool operator!=(const PathPoly& o) const { return !(*this == o); }

    std::string str() const;

private:
    const Quiver* q_ = nullptr;
    Terms terms_;

    void check_mixed(const PathPoly& o) const;
};

PathPoly path_zero(const Quiver& q);
PathPoly path_one(const Quiver& q); // sum of all vertex idempotents
PathPoly path_of(const Quiver& q, const Word& w);
PathPoly idempotent(const Quiver& q, int vertex);

// concat of two plain paths: p . q with q acting first; incomposable -> 0.
PathPoly concat(const Quiver& q, const Word& p, const Word& r);

// a^k on the given loop arrow
Word power_word(const Quiver& q, int arrow, int k);

} // namespace ncpn
