#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tipping {

// How diners perceive restaurant quality.
enum class QualityModel {
    StaffCount,          // weighted head count of waiters and cooks
    StaffPay,            // weighted take-home pay of one waiter and one cook
    StaffCountTimesPay,  // head count times pay for each group
};

// Denominator used for the rival's per-waiter gratuity.
//   SymmetricDenominator: rival tips are split among the rival's waiters (1 - W).
//   AsPrinted:            rival tips are divided by our waiter share W.
enum class GratuityConvention {
    SymmetricDenominator,
    AsPrinted,
};

enum class Side { Own, Rival };

// Per-restaurant policy. Prices and wages are in $/hr.
struct Restaurant {
    double menu_price = 10.0;
    double tip_rate = 0.19;
    double waiter_wage = 5.0;
    double cook_wage = 10.40;

    bool operator==(const Restaurant&) const = default;
};

// All parameters of the two-restaurant ecosystem. Defaults are the baseline
// values for a midscale restaurant market.
struct EcosystemConfig {
    Restaurant own;
    Restaurant rival;

    double food_weight = 12.0;        // importance of food relative to service
    double cooks_per_waiter = 1.0;    // total cooks / total waiters
    double diners_per_waiter = 12.0;  // total diners / total waiters

    double min_wage_tipped = 2.13;
    double min_wage_untipped = 7.25;
    double wage_cap = 50.0;

    QualityModel quality = QualityModel::StaffCount;
    GratuityConvention gratuity = GratuityConvention::SymmetricDenominator;

    const Restaurant& side(Side s) const { return s == Side::Own ? own : rival; }
    Restaurant& side(Side s) { return s == Side::Own ? own : rival; }

    bool operator==(const EcosystemConfig&) const = default;
};

// Fractions of all diners, waiters and cooks currently at our restaurant.
struct State {
    double diners = 0.5;
    double waiters = 0.5;
    double cooks = 0.5;

    bool operator==(const State&) const = default;
};

EcosystemConfig baseline_config();

// Returns the list of violated invariants; empty when the config is valid.
std::vector<std::string> violations(const EcosystemConfig& config);

// Throws Error(Validation) naming every violated invariant.
const EcosystemConfig& validate(const EcosystemConfig& config);

bool in_unit_cube(const State& s);
void validate_state(const State& s);

std::string_view to_string(QualityModel q);
std::string_view to_string(GratuityConvention g);
QualityModel parse_quality_model(std::string_view text);
GratuityConvention parse_gratuity_convention(std::string_view text);

// Multiplies every price, wage, floor and cap by `factor`.
EcosystemConfig scale_prices(EcosystemConfig config, double factor);

// Swaps the roles of the two restaurants.
EcosystemConfig swap_restaurants(EcosystemConfig config);

} // namespace tipping
