#pragma once

#include <cmath>
#include <limits>
#include <ostream>

namespace yamabe {

// A nonnegative-magnitude real carried as sign * mantissa * 10^log10_scale.
// Used wherever tower quantities leave the double exponent range
// (mu_3 ~ 1e-98 type scales and eps^{theta_ell} weights).
struct ScaledValue {
    double mantissa = 0.0;   // in [1, 10) after normalize(), or 0
    double log10_scale = 0.0;

    ScaledValue() = default;
    ScaledValue(double m, double l) : mantissa(m), log10_scale(l) { normalize(); }

    static ScaledValue from_double(double v) {
        if (v == 0.0) return {};
        return ScaledValue(v, 0.0);
    }
    // value = sign * exp(ln_mag)
    static ScaledValue from_log(double ln_mag, double sign = 1.0) {
        if (sign == 0.0 || ln_mag == -std::numeric_limits<double>::infinity()) return {};
        ScaledValue s;
        const double l10 = ln_mag / std::log(10.0);
        const double fl = std::floor(l10);
        s.log10_scale = fl;
        s.mantissa = (sign < 0 ? -1.0 : 1.0) * std::pow(10.0, l10 - fl);
        return s;
    }

    bool is_zero() const { return mantissa == 0.0; }

    void normalize() {
        if (mantissa == 0.0) { log10_scale = 0.0; return; }
        const double l = std::log10(std::fabs(mantissa));
        const double fl = std::floor(l);
        if (fl != 0.0) {
            mantissa *= std::pow(10.0, -fl);
            log10_scale += fl;
        }
    }

    // May overflow to +-inf or underflow to 0; that is the caller's business.
    double to_double() const {
        if (mantissa == 0.0) return 0.0;
        return mantissa * std::pow(10.0, log10_scale);
    }
    // log10 of |value|; -inf for zero.
    double log10_abs() const {
        if (mantissa == 0.0) return -std::numeric_limits<double>::infinity();
        return log10_scale + std::log10(std::fabs(mantissa));
    }
    double sign() const { return mantissa > 0 ? 1.0 : (mantissa < 0 ? -1.0 : 0.0); }

    friend ScaledValue operator*(const ScaledValue& a, const ScaledValue& b) {
        if (a.is_zero() || b.is_zero()) return {};
        return ScaledValue(a.mantissa * b.mantissa, a.log10_scale + b.log10_scale);
    }
    friend ScaledValue operator*(const ScaledValue& a, double c) {
        if (a.is_zero() || c == 0.0) return {};
        return ScaledValue(a.mantissa * c, a.log10_scale);
    }
    friend ScaledValue operator/(const ScaledValue& a, const ScaledValue& b) {
        return ScaledValue(a.mantissa / b.mantissa, a.log10_scale - b.log10_scale);
    }
    friend ScaledValue operator+(const ScaledValue& a, const ScaledValue& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const ScaledValue& big = (a.log10_scale >= b.log10_scale) ? a : b;
        const ScaledValue& sml = (a.log10_scale >= b.log10_scale) ? b : a;
        const double shift = sml.log10_scale - big.log10_scale; // <= 0
        const double add = (shift < -340.0) ? 0.0 : sml.mantissa * std::pow(10.0, shift);
        return ScaledValue(big.mantissa + add, big.log10_scale);
    }
    friend ScaledValue operator-(const ScaledValue& a, const ScaledValue& b) {
        ScaledValue nb = b;
        nb.mantissa = -nb.mantissa;
        return a + nb;
    }
    ScaledValue pow(double e) const {
        if (is_zero()) return {};
        const double l10 = log10_abs() * e;
        return from_log(l10 * std::log(10.0), sign());
    }

    friend std::ostream& operator<<(std::ostream& os, const ScaledValue& v) {
        return os << v.mantissa << "e" << v.log10_scale;
    }
};

} // namespace yamabe
