#pragma once

#include <complex>
#include <vector>

namespace faberfield {

/// Finite Laurent polynomial sum_{j=low}^{high} c_j w^j with exact support.
///
/// Products and sums keep every coefficient of the full finite support; nothing
/// is ever truncated.
class LaurentPoly {
public:
    using cplx = std::complex<double>;

    LaurentPoly() = default;
    LaurentPoly(int low, std::vector<cplx> coeffs);

    static LaurentPoly monomial(int power, cplx value = 1.0);

    int low() const { return low_; }
    int high() const { return low_ + static_cast<int>(c_.size()) - 1; }
    bool empty() const { return c_.empty(); }

    /// Coefficient of w^power (zero outside the support).
    cplx operator[](int power) const;
    void add(int power, cplx value);

    LaurentPoly operator*(const LaurentPoly& other) const;
    LaurentPoly& operator+=(const LaurentPoly& other);
    LaurentPoly& axpy(cplx scale, const LaurentPoly& other);

    cplx eval(cplx w) const;

private:
    int low_ = 0;
    std::vector<cplx> c_;
};

}  // namespace faberfield
