#include "tipping/config.hpp"

#include "tipping/error.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace tipping {

EcosystemConfig baseline_config() { return EcosystemConfig{}; }

namespace {

void check_restaurant(const Restaurant& r, const char* suffix, std::vector<std::string>& out) {
    auto name = [&](const char* base) { return std::string(base) + suffix; };
    if (!std::isfinite(r.menu_price) || r.menu_price <= 0)
        out.push_back(name("m") + ": menu price must be positive");
    if (!std::isfinite(r.tip_rate) || r.tip_rate < 0 || r.tip_rate >= 1)
        out.push_back(name("T") + ": tip rate out of range [0, 1)");
    if (!std::isfinite(r.waiter_wage) || r.waiter_wage < 0)
        out.push_back(name("bW") + ": waiter base pay must be non-negative");
    if (!std::isfinite(r.cook_wage) || r.cook_wage < 0)
        out.push_back(name("bC") + ": cook base pay must be non-negative");
}

void check_positive(double v, const char* what, std::vector<std::string>& out) {
    if (!std::isfinite(v) || v <= 0) out.push_back(std::string(what) + " must be positive");
}

} // namespace

std::vector<std::string> violations(const EcosystemConfig& c) {
    std::vector<std::string> out;
    check_restaurant(c.own, "1", out);
    check_restaurant(c.rival, "2", out);
    check_positive(c.food_weight, "r: food-to-service ratio", out);
    check_positive(c.cooks_per_waiter, "rCW: cooks-to-waiters ratio", out);
    check_positive(c.diners_per_waiter, "rDW: diners-to-waiters ratio", out);
    if (!std::isfinite(c.min_wage_tipped) || c.min_wage_tipped < 0)
        out.push_back("minWageTipped: must be non-negative");
    if (!(c.min_wage_tipped <= c.min_wage_untipped))
        out.push_back("minWageUntipped: must be at least minWageTipped");
    if (!(c.min_wage_untipped <= c.wage_cap) || !std::isfinite(c.wage_cap))
        out.push_back("wageCap: must be at least minWageUntipped");
    return out;
}

const EcosystemConfig& validate(const EcosystemConfig& config) {
    auto found = violations(config);
    if (found.empty()) return config;
    std::ostringstream msg;
    msg << "invalid configuration: ";
    for (std::size_t i = 0; i < found.size(); ++i) msg << (i ? "; " : "") << found[i];
    throw Error(ErrorKind::Validation, msg.str());
}

bool in_unit_cube(const State& s) {
    auto ok = [](double x) { return x >= 0 && x <= 1; };
    return ok(s.diners) && ok(s.waiters) && ok(s.cooks);
}

void validate_state(const State& s) {
    if (!in_unit_cube(s)) {
        std::ostringstream msg;
        msg << "state (" << s.diners << ", " << s.waiters << ", " << s.cooks
            << ") outside [0,1]^3";
        throw Error(ErrorKind::Validation, msg.str());
    }
}

std::string_view to_string(QualityModel q) {
    switch (q) {
    case QualityModel::StaffCount: return "StaffCount";
    case QualityModel::StaffPay: return "StaffPay";
    case QualityModel::StaffCountTimesPay: return "StaffCountTimesPay";
    }
    return "?";
}

std::string_view to_string(GratuityConvention g) {
    return g == GratuityConvention::AsPrinted ? "AsPrinted" : "SymmetricDenominator";
}

QualityModel parse_quality_model(std::string_view text) {
    if (text == "StaffCount") return QualityModel::StaffCount;
    if (text == "StaffPay") return QualityModel::StaffPay;
    if (text == "StaffCountTimesPay") return QualityModel::StaffCountTimesPay;
    throw Error(ErrorKind::Parse, "unknown quality formulation '" + std::string(text) + "'");
}

GratuityConvention parse_gratuity_convention(std::string_view text) {
    if (text == "SymmetricDenominator") return GratuityConvention::SymmetricDenominator;
    if (text == "AsPrinted") return GratuityConvention::AsPrinted;
    throw Error(ErrorKind::Parse, "unknown gratuity convention '" + std::string(text) + "'");
}

EcosystemConfig scale_prices(EcosystemConfig c, double factor) {
    for (Restaurant* r : {&c.own, &c.rival}) {
        r->menu_price *= factor;
        r->waiter_wage *= factor;
        r->cook_wage *= factor;
    }
    c.min_wage_tipped *= factor;
    c.min_wage_untipped *= factor;
    c.wage_cap *= factor;
    return c;
}

EcosystemConfig swap_restaurants(EcosystemConfig c) {
    std::swap(c.own, c.rival);
    return c;
}

} // namespace tipping
