#include "fdiff/scalar.hpp"

#include "fdiff/error.hpp"

#include <functional>

namespace fdiff {

Rational parse_rational(const std::string& text) {
    Rational q;
    if (text.empty() || q.set_str(text, 10) != 0) {
        throw PreconditionError("malformed rational '" + text + "'");
    }
    if (sgn(q.get_den()) == 0) {
        throw PreconditionError("zero denominator in '" + text + "'");
    }
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

Scalar& Scalar::operator+=(const Scalar& o) {
    re_ += o.re_;
    if (sgn(o.im_) != 0) im_ += o.im_;
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    re_ -= o.re_;
    if (sgn(o.im_) != 0) im_ -= o.im_;
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
        re_ *= o.re_;
        return *this;
    }
    Rational re = re_ * o.re_ - im_ * o.im_;
    Rational im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw PreconditionError("division by zero scalar");
    if (sgn(im_) == 0) return Scalar(Rational(1) / re_);
    Rational n = norm();
    return Scalar(re_ / n, -im_ / n);
}

Scalar& Scalar::operator/=(const Scalar& o) {
    if (o.is_zero()) throw PreconditionError("division by zero scalar");
    if (sgn(o.im_) == 0) {
        re_ /= o.re_;
        if (sgn(im_) != 0) im_ /= o.re_;
        return *this;
    }
    return *this *= o.inverse();
}

Scalar Scalar::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Scalar result(1);
    Scalar base = *this;
    while (e > 0) {
        if (e & 1) result *= base;
        e >>= 1;
        if (e > 0) base *= base;
    }
    return result;
}

std::size_t Scalar::hash() const {
    std::hash<std::string> h;
    return h(re_.get_str(16)) * 31u + h(im_.get_str(16));
}

std::string Scalar::str() const {
    if (sgn(im_) == 0) return to_string(re_);
    std::string im_part;
    if (im_ == 1) {
        im_part = "i";
    } else if (im_ == -1) {
        im_part = "-i";
    } else {
        im_part = to_string(im_) + "*i";
    }
    if (sgn(re_) == 0) return im_part;
    std::string out = "(" + to_string(re_);
    if (sgn(im_) > 0) out += "+";
    return out + im_part + ")";
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

Rational binomial(const Rational& alpha, unsigned j) {
    Rational c(1);
    for (unsigned t = 0; t < j; ++t) {
        c *= (alpha - t);
        c /= (t + 1);
    }
    return c;
}

}  // namespace fdiff
