#pragma once

// Physical configuration of two bosons in a symmetric square double well.
//
// Units: lengths in L, energies in L^-2, times in L^2, interaction strength
// in L^-1 (hbar = 1, m = 1/2).

#include <stdexcept>
#include <string>
#include <string_view>

namespace dwell {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct PotentialSpec {
    double well_length = 50.0;    // l
    double barrier_width = 3.0;   // b
    double barrier_height = 0.3;  // W0

    double total_length() const { return 2.0 * well_length + barrier_width; }
    double midpoint() const { return well_length + 0.5 * barrier_width; }

    // Throws DomainError unless l > 0, b >= 0, W0 >= 0.
    void validate() const;
};

enum class InteractionKind { Contact, SoftCoulomb, HardCoulomb };

std::string_view to_string(InteractionKind kind);
InteractionKind interaction_kind_from_string(std::string_view name);

struct InteractionSpec {
    InteractionKind kind = InteractionKind::Contact;
    double softening = 1.0;  // Delta, SoftCoulomb only
    double strength = 0.0;   // U; negative is attractive

    void validate() const;
};

enum class RegionLabel { I, II, III };

std::string_view to_string(RegionLabel region);

// W0 inside the barrier [l, l+b], 0 in the wells.
double potential_eval(double x, const PotentialSpec& spec);

// Interaction shape before multiplication by U. Contact is a measure on the
// diagonal and cannot be evaluated pointwise.
double interaction_eval(double r, const InteractionSpec& spec);

// Regions split at the barrier midpoint: I both left, III both right,
// II one particle on each side. Points exactly on the midpoint count as left.
RegionLabel region_of(double x1, double x2, const PotentialSpec& spec);

}  // namespace dwell
