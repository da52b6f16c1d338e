#include "dwell/domain.hpp"

#include <algorithm>
#include <cmath>

namespace dwell {

void PotentialSpec::validate() const
{
    if (!(well_length > 0.0) || !(barrier_width >= 0.0) || !(barrier_height >= 0.0)) {
        throw DomainError("potential: require l > 0, b >= 0, W0 >= 0");
    }
}

std::string_view to_string(InteractionKind kind)
{
    switch (kind) {
    case InteractionKind::Contact: return "contact";
    case InteractionKind::SoftCoulomb: return "soft_coulomb";
    case InteractionKind::HardCoulomb: return "hard_coulomb";
    }
    return "unknown";
}

InteractionKind interaction_kind_from_string(std::string_view name)
{
    if (name == "contact") return InteractionKind::Contact;
    if (name == "soft_coulomb" || name == "soft") return InteractionKind::SoftCoulomb;
    if (name == "hard_coulomb" || name == "hard") return InteractionKind::HardCoulomb;
    throw DomainError("unknown interaction kind '" + std::string(name) + "'");
}

void InteractionSpec::validate() const
{
    if (kind == InteractionKind::SoftCoulomb && !(softening > 0.0)) {
        throw DomainError("soft-core Coulomb requires softening > 0");
    }
    if (!std::isfinite(strength)) {
        throw DomainError("interaction strength must be finite");
    }
}

std::string_view to_string(RegionLabel region)
{
    switch (region) {
    case RegionLabel::I: return "I";
    case RegionLabel::II: return "II";
    case RegionLabel::III: return "III";
    }
    return "?";
}

namespace {

void check_inside(double x, const PotentialSpec& spec)
{
    if (!(x >= 0.0 && x <= spec.total_length())) {
        throw DomainError("coordinate " + std::to_string(x) + " outside [0, 2l+b]");
    }
}

}  // namespace

double potential_eval(double x, const PotentialSpec& spec)
{
    check_inside(x, spec);
    // Mirrored form so that V(x) == V(L - x) bit for bit.
    const double y = std::min(x, spec.total_length() - x);
    return (y >= spec.well_length) ? spec.barrier_height : 0.0;
}

double interaction_eval(double r, const InteractionSpec& spec)
{
    switch (spec.kind) {
    case InteractionKind::Contact:
        throw DomainError("contact interaction is a measure on x1 = x2 and is not pointwise-evaluable");
    case InteractionKind::SoftCoulomb:
        return 1.0 / std::sqrt(r * r + spec.softening * spec.softening);
    case InteractionKind::HardCoulomb:
        if (r == 0.0) throw DomainError("hard-core Coulomb is singular at r = 0");
        return 1.0 / std::abs(r);
    }
    return 0.0;
}

RegionLabel region_of(double x1, double x2, const PotentialSpec& spec)
{
    check_inside(x1, spec);
    check_inside(x2, spec);
    const double mid = spec.midpoint();
    const bool left1 = x1 <= mid;
    const bool left2 = x2 <= mid;
    if (left1 && left2) return RegionLabel::I;
    if (!left1 && !left2) return RegionLabel::III;
    return RegionLabel::II;
}

}  // namespace dwell
