#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "genconvex/expr.hpp"

namespace genconvex {

/// Closed interval [lo, hi]; either end may be infinite.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double u) const noexcept { return u >= lo && u <= hi; }
    bool contains(const Interval& other) const noexcept { return other.lo >= lo && other.hi <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

Interval intersect(const Interval& a, const Interval& b);

/// Evaluation strategy behind a FuncDef. Implementations are immutable and
/// safe to call concurrently.
class FuncImpl {
public:
    virtual ~FuncImpl() = default;
    /// nullopt where the function is undefined or non-finite.
    virtual std::optional<double> eval(double u) const noexcept = 0;
    virtual std::string describe() const = 0;
    virtual bool is_identity() const noexcept { return false; }
};

/// A real function of one variable restricted to a closed interval.
///
/// Cheap to copy. Evaluation outside the interval is a DomainError; it is
/// never extrapolated.
class FuncDef {
public:
    FuncDef(std::shared_ptr<const FuncImpl> impl, Interval domain);

    const Interval& domain() const noexcept { return domain_; }
    std::string describe() const { return impl_->describe(); }

    /// Throws DomainError outside the domain or where a partial node is undefined.
    double evaluate(double u) const;
    double operator()(double u) const { return evaluate(u); }

    /// Non-throwing variant for hot loops.
    std::optional<double> try_evaluate(double u) const noexcept {
        if (!domain_.contains(u)) return std::nullopt;
        return impl_->eval(u);
    }

    /// Same function on a narrower (or wider) interval.
    FuncDef restricted(Interval domain) const { return FuncDef(impl_, domain); }

    const FuncImpl& impl() const noexcept { return *impl_; }
    const std::shared_ptr<const FuncImpl>& impl_ptr() const noexcept { return impl_; }

private:
    std::shared_ptr<const FuncImpl> impl_;
    Interval domain_;
};

/// FuncDef from expression text. The variable is taken from `variable`, or
/// inferred when empty (the single free symbol; a constant has none).
FuncDef from_expression(std::string_view text, Interval domain, std::string_view variable = {});

/// Named catalog families:
///   identity                 u
///   constant   [c]           c
///   power      [s]           u^s        (u >= 0 unless s is an integer)
///   recip_power[s]           u^-s       (u > 0)
///   affine     [k, c = 0]    k*u + c
///   poly       [c0, c1, ...] c0 + c1*u + ... (ascending coefficients)
///   sqrt                     sqrt(u)    (u >= 0)
/// The requested interval is clipped to the family's natural domain; an
/// empty result or a malformed parameter list is InvalidArgument.
FuncDef catalog(std::string_view name, std::span<const double> params = {},
                Interval requested = {});

FuncDef catalog(std::string_view name, std::initializer_list<double> params, Interval requested = {});

std::vector<std::string> catalog_families();

}  // namespace genconvex
