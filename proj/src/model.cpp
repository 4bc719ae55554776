#include "tipping/model.hpp"

#include "tipping/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tipping {

namespace {

double share_at(Side side, double own_share) {
    return side == Side::Own ? own_share : 1.0 - own_share;
}

double quality_from(const EcosystemConfig& c, const State& s, Side side, double tips) {
    const Restaurant& r = c.side(side);
    const double waiters = share_at(side, s.waiters);
    const double cooks = share_at(side, s.cooks);
    switch (c.quality) {
    case QualityModel::StaffCount:
        return waiters + c.food_weight * c.cooks_per_waiter * cooks;
    case QualityModel::StaffPay:
        return (r.waiter_wage + tips) + c.food_weight * r.cook_wage;
    case QualityModel::StaffCountTimesPay:
        return waiters * (r.waiter_wage + tips) +
               c.food_weight * c.cooks_per_waiter * cooks * r.cook_wage;
    }
    return 0;
}

double value_from(const EcosystemConfig& c, Side side, double q) {
    const Restaurant& r = c.side(side);
    return q / (r.menu_price * (1.0 + r.tip_rate));
}

[[noreturn]] void non_finite(const char* term, const State& s) {
    std::ostringstream msg;
    msg << "non-finite " << term << " at state (" << s.diners << ", " << s.waiters << ", "
        << s.cooks << ")";
    throw Error(ErrorKind::Numeric, msg.str());
}

} // namespace

double gratuity(const EcosystemConfig& c, const State& s, Side side) {
    const Restaurant& r = c.side(side);
    const double diners = share_at(side, s.diners);
    double waiters = s.waiters;
    if (side == Side::Rival && c.gratuity == GratuityConvention::SymmetricDenominator)
        waiters = 1.0 - s.waiters;
    return r.menu_price * c.diners_per_waiter * diners * r.tip_rate /
           std::max(waiters, kWaiterShareFloor);
}

double quality(const EcosystemConfig& c, const State& s, Side side) {
    return quality_from(c, s, side, gratuity(c, s, side));
}

double value(const EcosystemConfig& c, const State& s, Side side) {
    return value_from(c, side, quality(c, s, side));
}

double profit(const EcosystemConfig& c, const State& s) {
    return c.own.menu_price * c.diners_per_waiter * s.diners - c.own.waiter_wage * s.waiters -
           c.own.cook_wage * c.cooks_per_waiter * s.cooks;
}

InstantaneousQuantities evaluate(const EcosystemConfig& c, const State& s) {
    InstantaneousQuantities q;
    q.gratuity_own = gratuity(c, s, Side::Own);
    q.gratuity_rival = gratuity(c, s, Side::Rival);
    q.quality_own = quality_from(c, s, Side::Own, q.gratuity_own);
    q.quality_rival = quality_from(c, s, Side::Rival, q.gratuity_rival);
    q.value_own = value_from(c, Side::Own, q.quality_own);
    q.value_rival = value_from(c, Side::Rival, q.quality_rival);
    q.profit = profit(c, s);
    return q;
}

double transition_share(double own_utility, double rival_utility) {
    const double total = own_utility + rival_utility;
    if (total == 0) return 0.5;
    return own_utility / total;
}

namespace {

// (1 - x) * a/(a+b) - x * b/(a+b)
double flow(double x, double own_utility, double rival_utility) {
    const double total = own_utility + rival_utility;
    if (total == 0) return (1.0 - x) * 0.5 - x * 0.5;
    return (1.0 - x) * (own_utility / total) - x * (rival_utility / total);
}

} // namespace

State rhs(const EcosystemConfig& c, const State& s) {
    const auto q = evaluate(c, s);
    State d;
    d.diners = flow(s.diners, q.value_own, q.value_rival);
    if (!std::isfinite(d.diners)) non_finite("diner flow (value v1/v2)", s);
    d.waiters = flow(s.waiters, c.own.waiter_wage + q.gratuity_own,
                     c.rival.waiter_wage + q.gratuity_rival);
    if (!std::isfinite(d.waiters)) non_finite("waiter flow (pay bW+g)", s);
    d.cooks = flow(s.cooks, c.own.cook_wage, c.rival.cook_wage);
    if (!std::isfinite(d.cooks)) non_finite("cook flow (pay bC)", s);
    return d;
}

double residual(const EcosystemConfig& c, const State& s) {
    const State d = rhs(c, s);
    return std::max({std::abs(d.diners), std::abs(d.waiters), std::abs(d.cooks)});
}

} // namespace tipping
