#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcog/errors.hpp"

namespace qcog::predict {

/// Quantum prediction constant 1 - (-0.81): the classical complement shifted
/// by the empirically dominant quantum contribution. Exposed as a parameter
/// so sensitivity studies can vary it.
inline constexpr double kQuantumConstant = 1.81;

/// Membership weights of one item for the conjunctions of two concepts and
/// their negations: A and B, A and B', A' and B, A' and B'.
struct ConjunctionNegationRecord {
    std::string label;
    double mu_ab = 0.0;
    double mu_ab_notb = 0.0;
    double mu_nota_b = 0.0;
    double mu_nota_notb = 0.0;

    bool operator==(const ConjunctionNegationRecord&) const = default;
};

/// I_{ABA'B'} = 1 - mu(A and B) - mu(A and B') - mu(A' and B) - mu(A' and B').
/// Zero for data admitting a classical probability model.
double kolmogorov_factor(const ConjunctionNegationRecord& r);

/// A predicted mu(A' and B') value; predictions are reported unclamped and
/// flagged when they fall outside [0,1].
struct Prediction {
    double value = 0.0;
    bool in_range = true;
};

/// Classical prediction 1 - mu(A and B) - mu(A and B') - mu(A' and B).
Prediction classical_prediction(double mu_ab, double mu_ab_notb, double mu_nota_b);

/// Quantum prediction: same complement with 1 replaced by `quantum_constant`.
Prediction quantum_prediction(double mu_ab, double mu_ab_notb, double mu_nota_b,
                              double quantum_constant = kQuantumConstant);

/// Parses CSV with header `label,mu_ab,mu_ab_notb,mu_nota_b,mu_nota_notb`.
/// Throws ParseError on malformed rows, DomainError on values outside [0,1].
std::vector<ConjunctionNegationRecord> parse_records_csv(std::string_view text);

/// JSON report: per record, the Kolmogorov factor, both predictions, their
/// deviations from the observed mu(A' and B'), and out-of-range flags.
std::string report_json(std::span<const ConjunctionNegationRecord> records,
                        double quantum_constant = kQuantumConstant);

}  // namespace qcog::predict
