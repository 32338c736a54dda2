#pragma once

#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "qcog/errors.hpp"

namespace qcog::scop {

/// Feature applicability weights of an item or prototype, in a fixed order
/// shared across the concept.
struct FeatureVector {
    std::vector<double> values;

    bool operator==(const FeatureVector&) const = default;
};

/// Euclidean conceptual distance sqrt(sum_m (x_km - x_pm)^2) between an item
/// and the prototype. Throws DomainError on length mismatch.
double prototype_distance(const FeatureVector& item, const FeatureVector& prototype);

/// Transition probabilities mu(q,e,p), keyed (q, e, p).
using TransitionTable = std::map<std::tuple<std::string, std::string, std::string>, double>;

/// Applicability weights nu(p,a), keyed (p, a).
using ApplicabilityTable = std::map<std::pair<std::string, std::string>, double>;

/// State-Context-Property concept: finite state, context and property sets,
/// a transition-probability table mu and an applicability table nu.
/// Immutable after construction; safe for concurrent reads.
///
/// The distinguished unit context ("unit") is always present and leaves every
/// state fixed; its transitions are implicit and must not be re-specified
/// with non-identity values.
class ScopConcept {
public:
    static constexpr std::string_view kUnitContext = "unit";

    /// Validates: ground state is a member of states, every mu and nu value
    /// lies in [0,1], and for each (e,p) with e != unit the transition row
    /// sums to 1 within 1e-12. Throws DomainError otherwise.
    ScopConcept(std::vector<std::string> states, std::string ground_state,
                std::vector<std::string> contexts, std::vector<std::string> properties,
                TransitionTable transitions, ApplicabilityTable applicabilities);

    /// mu(q,e,p): probability that state p changes to state q under context e.
    /// Throws LookupError on unknown identifiers. Unlisted triples are 0; the
    /// unit context is the identity.
    double transition_probability(std::string_view q, std::string_view e,
                                  std::string_view p) const;

    /// nu(p,a): applicability weight of property a in state p. Throws
    /// LookupError on unknown identifiers; unlisted pairs are 0.
    double applicability(std::string_view p, std::string_view a) const;

    const std::vector<std::string>& states() const noexcept { return states_; }
    const std::vector<std::string>& contexts() const noexcept { return contexts_; }
    const std::vector<std::string>& properties() const noexcept { return properties_; }
    const std::string& ground_state() const noexcept { return ground_state_; }
    const TransitionTable& transitions() const noexcept { return transitions_; }
    const ApplicabilityTable& applicabilities() const noexcept { return applicabilities_; }

    static ScopConcept from_json(std::string_view text);
    std::string to_json() const;

    bool operator==(const ScopConcept&) const = default;

private:
    std::vector<std::string> states_;
    std::string ground_state_;
    std::vector<std::string> contexts_;
    std::vector<std::string> properties_;
    TransitionTable transitions_;
    ApplicabilityTable applicabilities_;
};

}  // namespace qcog::scop
