#pragma once

#include <cassert>
#include <cmath>
#include <limits>

namespace statsim {

/// Nonnegative real stored as its natural logarithm. Exact zero is kept as a
/// distinguished state (log = -inf) and never conflated with small positive
/// values. Needed because quantities like 1/tau^n and tau^(2n) overflow and
/// underflow fixed-width floats long before n gets interesting.
class LogProb {
public:
    constexpr LogProb() : lg_(-kInf) {}

    static constexpr LogProb zero() { return LogProb(); }
    static constexpr LogProb one() { return from_log(0.0); }

    static constexpr LogProb from_log(double lg) {
        LogProb p;
        p.lg_ = lg;
        return p;
    }

    /// v must be finite and >= 0; v == 0 maps to the exact-zero state.
    static LogProb from_linear(double v) {
        assert(v >= 0.0);
        return v == 0.0 ? zero() : from_log(std::log(v));
    }

    constexpr bool is_zero() const { return lg_ == -kInf; }

    /// Natural log of the value; -inf for exact zero.
    constexpr double log() const { return lg_; }

    /// Back to the linear domain; underflows/overflows like exp() does.
    double linear() const { return is_zero() ? 0.0 : std::exp(lg_); }

    friend LogProb operator*(LogProb a, LogProb b) {
        if (a.is_zero() || b.is_zero()) return zero();
        return from_log(a.lg_ + b.lg_);
    }

    LogProb& operator*=(LogProb o) {
        *this = *this * o;
        return *this;
    }

    /// a / b for b > 0.
    friend LogProb operator/(LogProb a, LogProb b) {
        assert(!b.is_zero());
        if (a.is_zero()) return zero();
        return from_log(a.lg_ - b.lg_);
    }

    friend constexpr bool operator==(LogProb a, LogProb b) { return a.lg_ == b.lg_; }
    friend constexpr bool operator<(LogProb a, LogProb b) { return a.lg_ < b.lg_; }
    friend constexpr bool operator<=(LogProb a, LogProb b) { return a.lg_ <= b.lg_; }
    friend constexpr bool operator>(LogProb a, LogProb b) { return a.lg_ > b.lg_; }
    friend constexpr bool operator>=(LogProb a, LogProb b) { return a.lg_ >= b.lg_; }

private:
    static constexpr double kInf = std::numeric_limits<double>::infinity();
    double lg_;
};

}  // namespace statsim
