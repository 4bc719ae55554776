#include "tipping/figures.hpp"

namespace tipping::figures {

EcosystemConfig simulation_base() {
    EcosystemConfig c;
    c.own = {10, 0.2, 5, 10};
    c.rival = {10, 0.2, 5, 10};
    c.food_weight = 12;
    return c;
}

std::vector<NamedConfig> simulation_variants() {
    std::vector<NamedConfig> out;
    auto a = simulation_base();
    a.rival.tip_rate = 0.25;
    out.push_back({"fig2a", a});
    auto b = simulation_base();
    b.rival.menu_price = 15;
    out.push_back({"fig2b", b});
    auto c = simulation_base();
    c.rival.cook_wage = 12;
    out.push_back({"fig2c", c});
    auto d = simulation_base();
    d.rival.waiter_wage = 10;
    d.own.cook_wage = 15;
    out.push_back({"fig2d", d});
    return out;
}

EcosystemConfig phase_portrait() {
    EcosystemConfig c;
    c.own = {10, 0.15, 5, 10};
    c.rival = {10, 0.2, 5, 10};
    c.food_weight = 12;
    c.diners_per_waiter = 1;
    c.cooks_per_waiter = 1;
    return c;
}

EcosystemConfig staff_pay_variant() {
    EcosystemConfig c = threshold_ecosystem();
    c.food_weight = 2;
    c.quality = QualityModel::StaffPay;
    return c;
}

EcosystemConfig staff_count_times_pay_variant() {
    EcosystemConfig c = threshold_ecosystem();
    c.food_weight = 4;
    c.quality = QualityModel::StaffCountTimesPay;
    return c;
}

std::vector<double> sweep_grid(SweepParameter p) {
    switch (p) {
    case SweepParameter::MenuPrice: return linspace(5, 20, 7);
    case SweepParameter::FoodWeight: return linspace(8, 20, 7);
    case SweepParameter::DinersPerWaiter: return linspace(8, 20, 7);
    case SweepParameter::CooksPerWaiter: return linspace(0.5, 2, 7);
    }
    return {};
}

std::vector<double> threshold_tip_grid() { return linspace(0.01, 0.5, 25); }

} // namespace tipping::figures
