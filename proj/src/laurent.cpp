#include "faberfield/laurent.hpp"

#include <algorithm>
#include <cmath>

namespace faberfield {

LaurentPoly::LaurentPoly(int low, std::vector<cplx> coeffs) : low_(low), c_(std::move(coeffs)) {}

LaurentPoly LaurentPoly::monomial(int power, cplx value) { return LaurentPoly(power, {value}); }

LaurentPoly::cplx LaurentPoly::operator[](int power) const {
    const int i = power - low_;
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : cplx{};
}

void LaurentPoly::add(int power, cplx value) {
    if (c_.empty()) {
        low_ = power;
        c_.assign(1, value);
        return;
    }
    if (power < low_) {
        c_.insert(c_.begin(), low_ - power, cplx{});
        low_ = power;
    } else if (power > high()) {
        c_.resize(power - low_ + 1);
    }
    c_[power - low_] += value;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& other) const {
    if (empty() || other.empty()) {
        return {};
    }
    std::vector<cplx> out(c_.size() + other.c_.size() - 1);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == cplx{}) {
            continue;
        }
        for (std::size_t j = 0; j < other.c_.size(); ++j) {
            out[i + j] += c_[i] * other.c_[j];
        }
    }
    return LaurentPoly(low_ + other.low_, std::move(out));
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& other) { return axpy(1.0, other); }

LaurentPoly& LaurentPoly::axpy(cplx scale, const LaurentPoly& other) {
    if (other.empty()) {
        return *this;
    }
    if (empty()) {
        low_ = other.low_;
        c_.assign(other.c_.size(), cplx{});
    }
    const int lo = std::min(low_, other.low_);
    const int hi = std::max(high(), other.high());
    if (lo < low_) {
        c_.insert(c_.begin(), low_ - lo, cplx{});
        low_ = lo;
    }
    c_.resize(hi - low_ + 1);
    for (std::size_t j = 0; j < other.c_.size(); ++j) {
        c_[other.low_ + static_cast<int>(j) - low_] += scale * other.c_[j];
    }
    return *this;
}

LaurentPoly::cplx LaurentPoly::eval(cplx w) const {
    if (c_.empty()) {
        return {};
    }
    // Separate Horner passes in w and 1/w keep every partial sum bounded.
    cplx pos{};
    for (int p = high(); p >= std::max(low_, 0); --p) {
        pos = pos * w + (*this)[p];
    }
    if (low_ > 0) {
        return pos * std::pow(w, low_);
    }
    cplx neg{};
    const cplx inv = 1.0 / w;
    for (int p = low_; p < std::min(high() + 1, 0); ++p) {
        neg = neg * inv + (*this)[p];
    }
    if (high() < -1) {
        neg *= std::pow(inv, -1 - high());
    }
    return pos + neg * inv;
}

}  // namespace faberfield
