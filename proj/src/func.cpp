#include "genconvex/func.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "genconvex/errors.hpp"

namespace genconvex {

namespace {

std::string format_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string format_interval(const Interval& d) {
    return "[" + format_number(d.lo) + ", " + format_number(d.hi) + "]";
}

class ExprImpl final : public FuncImpl {
public:
    ExprImpl(std::string text, const Expr& e) : text_(std::move(text)), program_(e) {}
    std::optional<double> eval(double u) const noexcept override { return program_.eval(u); }
    std::string describe() const override { return text_; }

private:
    std::string text_;
    Program program_;
};

enum class Family { Identity, Constant, Power, RecipPower, Affine, Poly, Sqrt };

struct FamilyInfo {
    std::string_view name;
    Family family;
};

constexpr FamilyInfo kFamilies[] = {
    {"identity", Family::Identity}, {"constant", Family::Constant},
    {"power", Family::Power},       {"recip_power", Family::RecipPower},
    {"affine", Family::Affine},     {"poly", Family::Poly},
    {"sqrt", Family::Sqrt},
};

bool is_integer(double s) { return std::isfinite(s) && std::floor(s) == s; }

class CatalogImpl final : public FuncImpl {
public:
    CatalogImpl(std::string_view name, Family family, std::vector<double> params)
        : name_(name), family_(family), params_(std::move(params)) {}

    std::optional<double> eval(double u) const noexcept override {
        double r = 0.0;
        switch (family_) {
            case Family::Identity:
                r = u;
                break;
            case Family::Constant:
                r = params_[0];
                break;
            case Family::Power: {
                const double s = params_[0];
                if (u < 0.0 && !is_integer(s)) return std::nullopt;
                if (u == 0.0 && s < 0.0) return std::nullopt;
                r = std::pow(u, s);
                break;
            }
            case Family::RecipPower:
                if (u <= 0.0) return std::nullopt;
                r = std::pow(u, -params_[0]);
                break;
            case Family::Affine:
                r = params_[0] * u + (params_.size() > 1 ? params_[1] : 0.0);
                break;
            case Family::Poly:
                r = 0.0;
                for (auto it = params_.rbegin(); it != params_.rend(); ++it) r = r * u + *it;
                break;
            case Family::Sqrt:
                if (u < 0.0) return std::nullopt;
                r = std::sqrt(u);
                break;
        }
        if (!std::isfinite(r)) return std::nullopt;
        return r;
    }

    bool is_identity() const noexcept override { return family_ == Family::Identity; }

    std::string describe() const override {
        std::string out(name_);
        if (!params_.empty()) {
            out += '(';
            for (std::size_t i = 0; i < params_.size(); ++i) {
                if (i) out += ", ";
                out += format_number(params_[i]);
            }
            out += ')';
        }
        return out;
    }

private:
    std::string name_;
    Family family_;
    std::vector<double> params_;
};

Interval natural_domain(Family family, std::span<const double> params) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (family) {
        case Family::Power:
            return is_integer(params[0]) ? Interval{} : Interval{0.0, inf};
        case Family::RecipPower:
        case Family::Sqrt:
            return {0.0, inf};
        default:
            return {};
    }
}

void require_params(std::string_view name, std::span<const double> params, std::size_t lo,
                    std::size_t hi) {
    if (params.size() < lo || params.size() > hi) {
        std::string expected = lo == hi ? std::to_string(lo)
                                        : std::to_string(lo) + ".." +
                                              (hi == SIZE_MAX ? std::string("n") : std::to_string(hi));
        throw InvalidArgument("catalog '" + std::string(name) + "' expects " + expected +
                              " parameter(s), got " + std::to_string(params.size()));
    }
    for (double p : params)
        if (!std::isfinite(p))
            throw InvalidArgument("catalog '" + std::string(name) + "': parameters must be finite");
}

}  // namespace

Interval intersect(const Interval& a, const Interval& b) {
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

FuncDef::FuncDef(std::shared_ptr<const FuncImpl> impl, Interval domain)
    : impl_(std::move(impl)), domain_(domain) {
    if (!impl_) throw InvalidArgument("FuncDef: null implementation");
    if (std::isnan(domain_.lo) || std::isnan(domain_.hi) || domain_.lo > domain_.hi)
        throw InvalidArgument("FuncDef: empty or malformed domain " + format_interval(domain_));
}

double FuncDef::evaluate(double u) const {
    if (!domain_.contains(u))
        throw DomainError(describe() + ": " + format_number(u) + " outside domain " +
                          format_interval(domain_));
    if (auto v = impl_->eval(u)) return *v;
    throw DomainError(describe() + ": undefined at " + format_number(u));
}

FuncDef from_expression(std::string_view text, Interval domain, std::string_view variable) {
    std::string var(variable);
    if (var.empty()) {
        auto symbols = free_symbols(text);
        if (symbols.size() > 1)
            throw ParseError("expression has more than one free symbol ('" + symbols[0] + "', '" +
                                 symbols[1] + "')",
                             0);
        var = symbols.empty() ? "x" : symbols[0];
    }
    Expr e = parse(text, var);
    return FuncDef(std::make_shared<ExprImpl>(std::string(text), e), domain);
}

FuncDef catalog(std::string_view name, std::span<const double> params, Interval requested) {
    const FamilyInfo* info = nullptr;
    for (const auto& f : kFamilies)
        if (f.name == name) info = &f;
    if (!info) throw InvalidArgument("unknown catalog family '" + std::string(name) + "'");

    switch (info->family) {
        case Family::Identity:
        case Family::Sqrt:
            require_params(name, params, 0, 0);
            break;
        case Family::Constant:
        case Family::Power:
        case Family::RecipPower:
            require_params(name, params, 1, 1);
            break;
        case Family::Affine:
            require_params(name, params, 1, 2);
            break;
        case Family::Poly:
            require_params(name, params, 1, SIZE_MAX);
            break;
    }

    const Interval domain = intersect(requested, natural_domain(info->family, params));
    if (!(domain.lo <= domain.hi))
        throw InvalidArgument("catalog '" + std::string(name) + "': requested interval " +
                              format_interval(requested) + " misses the natural domain");
    auto impl = std::make_shared<CatalogImpl>(info->name, info->family,
                                              std::vector<double>(params.begin(), params.end()));
    // A domain that is closed at a pole (recip_power at 0) is allowed: h is
    // only ever sampled on the open interval. Reject only when no interior
    // point is evaluable.
    const double probe = std::isfinite(domain.lo) && std::isfinite(domain.hi)
                             ? 0.5 * (domain.lo + domain.hi)
                             : (std::isfinite(domain.lo) ? domain.lo + 1.0
                                                         : (std::isfinite(domain.hi) ? domain.hi - 1.0 : 0.5));
    if (domain.lo < domain.hi && !impl->eval(probe))
        throw InvalidArgument("catalog '" + std::string(name) + "' is not evaluable on " +
                              format_interval(domain));
    return FuncDef(std::move(impl), domain);
}

FuncDef catalog(std::string_view name, std::initializer_list<double> params, Interval requested) {
    return catalog(name, std::span<const double>(params.begin(), params.size()), requested);
}

std::vector<std::string> catalog_families() {
    std::vector<std::string> out;
    for (const auto& f : kFamilies) out.emplace_back(f.name);
    return out;
}

}  // namespace genconvex
