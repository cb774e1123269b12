#pragma once

#include <cmath>
#include <compare>
#include <string>

#include "finegrain/errors.hpp"

namespace fg {

/// Unit tag for a magnitude. Tags are checked, never inferred; mixing tags is
/// a hard error so estimator bugs surface immediately.
enum class Unit {
    bits,
    ops_per_sec,
    dimensionless,
    meters,
    seconds,
    joules,
    count,
};

std::string to_string(Unit u);
Unit unit_from_string(const std::string& s);

/// A strictly positive magnitude stored as its base-10 logarithm.
///
/// Bit counts and op rates in this model reach 10^(10^29) and beyond, far
/// past any floating-point range. All arithmetic happens on the exponent;
/// the linear value is only materialized when log10 < 300.
class LogQuantity {
  public:
    LogQuantity() = default;
    LogQuantity(double log10_value, Unit unit) : log10_(log10_value), unit_(unit) {}

    static LogQuantity from_linear(double x, Unit unit) {
        if (!(x > 0.0))
            throw std::domain_error("LogQuantity: value must be strictly positive");
        return {std::log10(x), unit};
    }

    double log10() const { return log10_; }
    Unit unit() const { return unit_; }

    /// Linear value; refuses to materialize past 1e300.
    double linear() const {
        if (log10_ > 300.0)
            throw std::overflow_error("LogQuantity: linear value exceeds 1e300");
        return std::pow(10.0, log10_);
    }

    LogQuantity mul(const LogQuantity& rhs) const {
        return {log10_ + rhs.log10_, combine_mul(unit_, rhs.unit_)};
    }

    LogQuantity div(const LogQuantity& rhs) const {
        return {log10_ - rhs.log10_, combine_div(unit_, rhs.unit_)};
    }

    /// Raise to a real power. Only dimensionless and count tags support this.
    LogQuantity pow(double k) const {
        if (unit_ != Unit::dimensionless && unit_ != Unit::count)
            throw unit_error("LogQuantity: pow requires dimensionless or count, got " +
                             to_string(unit_));
        return {log10_ * k, unit_};
    }

    /// Log-sum-exp addition. When the exponents differ by more than 30 the
    /// smaller operand is below representational noise and is absorbed.
    LogQuantity add(const LogQuantity& rhs) const {
        require_same_unit(rhs, "add");
        const double hi = std::max(log10_, rhs.log10_);
        const double lo = std::min(log10_, rhs.log10_);
        if (hi - lo > 30.0) return {hi, unit_};
        return {hi + std::log10(1.0 + std::pow(10.0, lo - hi)), unit_};
    }

    /// Three-way comparison on log10 with tolerance 1e-9.
    std::partial_ordering cmp(const LogQuantity& rhs) const {
        require_same_unit(rhs, "cmp");
        const double d = log10_ - rhs.log10_;
        if (std::fabs(d) <= 1e-9) return std::partial_ordering::equivalent;
        return d < 0.0 ? std::partial_ordering::less : std::partial_ordering::greater;
    }

  private:
    static Unit combine_mul(Unit a, Unit b) {
        if (a == Unit::dimensionless) return b;
        if (b == Unit::dimensionless) return a;
        if (a == Unit::count) return b;
        if (b == Unit::count) return a;
        throw unit_error("LogQuantity: cannot multiply " + to_string(a) + " by " +
                         to_string(b));
    }

    static Unit combine_div(Unit a, Unit b) {
        if (a == b) return Unit::dimensionless;
        if (b == Unit::dimensionless || b == Unit::count) return a;
        throw unit_error("LogQuantity: cannot divide " + to_string(a) + " by " +
                         to_string(b));
    }

    void require_same_unit(const LogQuantity& rhs, const char* op) const {
        if (unit_ != rhs.unit_)
            throw unit_error(std::string("LogQuantity: ") + op + " needs matching units, got " +
                             to_string(unit_) + " vs " + to_string(rhs.unit_));
    }

    double log10_ = 0.0;
    Unit unit_ = Unit::dimensionless;
};

inline LogQuantity lq_from_linear(double x, Unit unit) { return LogQuantity::from_linear(x, unit); }
inline LogQuantity lq_mul(const LogQuantity& a, const LogQuantity& b) { return a.mul(b); }
inline LogQuantity lq_div(const LogQuantity& a, const LogQuantity& b) { return a.div(b); }
inline LogQuantity lq_pow(const LogQuantity& a, double k) { return a.pow(k); }
inline LogQuantity lq_add(const LogQuantity& a, const LogQuantity& b) { return a.add(b); }
inline std::partial_ordering lq_cmp(const LogQuantity& a, const LogQuantity& b) { return a.cmp(b); }

inline std::string to_string(Unit u) {
    switch (u) {
        case Unit::bits: return "bits";
        case Unit::ops_per_sec: return "ops_per_sec";
        case Unit::dimensionless: return "dimensionless";
        case Unit::meters: return "meters";
        case Unit::seconds: return "seconds";
        case Unit::joules: return "joules";
        case Unit::count: return "count";
    }
    return "unknown";
}

inline Unit unit_from_string(const std::string& s) {
    if (s == "bits") return Unit::bits;
    if (s == "ops_per_sec") return Unit::ops_per_sec;
    if (s == "dimensionless") return Unit::dimensionless;
    if (s == "meters") return Unit::meters;
    if (s == "seconds") return Unit::seconds;
    if (s == "joules") return Unit::joules;
    if (s == "count") return Unit::count;
    throw schema_error("unknown unit tag: " + s);
}

} // namespace fg
