#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace evostab {

/// A Lebesgue exponent: a real p in [1, inf) or the symbol infinity.
class Exponent {
public:
    static Exponent finite(double p) {
        if (!(p >= 1.0) || p == std::numeric_limits<double>::infinity())
            throw std::invalid_argument("exponent must satisfy p >= 1 and be finite");
        return Exponent(p);
    }

    static Exponent inf() {
        return Exponent(std::numeric_limits<double>::infinity());
    }

    /// Accepts "inf", "infinity", "oo" (case-insensitive) or a number.
    static Exponent parse(const std::string& text);

    bool is_inf() const { return p_ == std::numeric_limits<double>::infinity(); }
    double value() const { return p_; }

    /// 1/p, with 1/inf = 0.
    double reciprocal() const { return is_inf() ? 0.0 : 1.0 / p_; }

    /// Conjugate exponent p' with 1/p + 1/p' = 1 (p=1 -> inf, p=inf -> 1).
    Exponent conjugate() const {
        if (is_inf()) return finite(1.0);
        if (p_ == 1.0) return inf();
        return finite(p_ / (p_ - 1.0));
    }

    std::string str() const;

    bool operator==(const Exponent& o) const { return p_ == o.p_; }
    bool operator<=(const Exponent& o) const { return p_ <= o.p_; }

private:
    explicit Exponent(double p) : p_(p) {}
    double p_;
};

} // namespace evostab
