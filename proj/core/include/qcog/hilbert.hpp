#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcog/errors.hpp"
#include "qcog/ingest.hpp"
#include "qcog/numerics.hpp"

namespace qcog::hilbert {

/// Result of the greedy sign assignment over the lambda values.
struct SignAssignment {
    std::vector<int> epsilons;         // per original index, +1 or -1
    std::vector<double> partial_sums;  // S_1..S_n along the descending-lambda order
    double residual = 0.0;             // final partial sum S_n >= 0
    std::vector<std::size_t> order;    // order[j] = original index of rank j+1
};

/// cos(phi_k) = (mu_ab - (mu_a + mu_b)/2) / (c * sqrt(mu_a * mu_b)).
///
/// Throws DomainError when mu_a * mu_b = 0 or c <= 0 (the phase is undefined
/// for such an item), InfeasibleError when |cos phi| > 1. `label` is used in
/// error messages when nonempty.
double interference_phase(double mu_a, double mu_b, double mu_ab, double c,
                          std::string_view label = {});

/// lambda = sqrt(mu_a * mu_b - (mu_ab - (mu_a + mu_b)/2)^2), the magnitude of
/// each item's sine-sum contribution at c = 1. Throws InfeasibleError on a
/// negative radicand.
double lambda_value(double mu_a, double mu_b, double mu_ab, std::string_view label = {});

/// Orders the lambdas descending (ties by ascending original index), gives the
/// largest the sign +1, then walks down assigning -1 whenever subtracting
/// keeps the partial sum nonnegative and +1 otherwise. Throws DomainError
/// when every lambda is zero.
SignAssignment assign_signs(std::span<const double> lambdas);

/// The single inner-product magnitude c_m absorbing the greedy residual:
/// c_m = sqrt(((S - lambda_m)^2 + J_m^2) / (mu_a_m * mu_b_m)) with
/// J_m = mu_ab_m - (mu_a_m + mu_b_m)/2. Throws DomainError when
/// mu_a_m * mu_b_m = 0 and InfeasibleError when c_m > 1 (the sine sum cannot
/// be closed by a single coefficient).
double compute_cm(double s_residual, double lambda_m, double mu_a_m, double mu_b_m,
                  double mu_ab_m);

/// The fitted Hilbert-space model: per-item phases, signs, lambdas and ranks,
/// the greedy residual, the single non-unit coefficient c_m, and the two unit
/// state vectors in C^(n+1). Immutable once built; safe to share across
/// threads.
struct HilbertModel {
    // Construction conventions: the item phases are carried entirely by the
    // B-side factors (beta_k = phi_k) and the extra coordinate of A is zero.
    static constexpr double kAlphaConvention = 0.0;
    static constexpr double kGammaConvention = 0.0;

    std::size_t n_items = 0;
    std::vector<int> item_indices;    // 1-based indices from the input table
    std::vector<std::string> labels;
    std::vector<double> mu_a, mu_b, mu_ab;  // renormalized inputs

    std::vector<double> cos_phi;
    std::vector<double> phase_rad;    // signed phi_k, radians
    std::vector<int> epsilons;
    std::vector<double> lambdas;
    std::vector<std::size_t> lambda_order;  // descending; order[j] = item position
    std::vector<std::size_t> lambda_rank;   // per item position, 1-based rank
    double s_residual = 0.0;                // S_n
    std::size_t m_position = 0;             // position (0-based) of the max-lambda item
    std::vector<double> c;                  // all 1 except c[m_position]

    numerics::ComplexVector vector_a;  // dimension n_items + 1
    numerics::ComplexVector vector_b;

    std::vector<double> phases_deg() const;
    double c_m() const { return c[m_position]; }
};

/// Builds the full model from a renormalized table: phases, lambda ranking,
/// greedy signs, c_m and the explicit state vectors. Both vectors have unit
/// length and |<A|B>| <= 1e-9 by construction.
///
/// Throws DomainError when the columns are not normalized or an item is
/// degenerate, InfeasibleError when any item has no real lambda, |cos phi|
/// exceeds 1, or c_m > 1.
HilbertModel build_state_vectors(const ingest::ConceptPairData& data);

struct OrthogonalityCheck {
    double cos_sum = 0.0;   // sum_k c_k sqrt(mu_kA mu_kB) cos phi_k
    double sin_sum = 0.0;   // sine analogue
    double abs_inner = 0.0; // |<A|B>| on the constructed vectors
};

/// Diagnostic: recomputes both orthogonality sums from the stored per-item
/// quantities and the inner product on the vectors. All three are <= 1e-9
/// for a correctly built model.
OrthogonalityCheck verify_orthogonality(const HilbertModel& m);

/// Reconstructs mu_k(A or B) = (mu_kA + mu_kB)/2 + c_k sqrt(mu_kA mu_kB)
/// cos phi_k for every item; equals the input column to 1e-9 by construction.
std::vector<double> reconstruct_disjunction(const HilbertModel& m);

/// Born rule: probability of the outcome subspace spanned by the given
/// 0-based coordinates, sum |state_i|^2 over the set. The state must be
/// normalized (DomainError) and the coordinates in range (DomainError).
double born_probability(const numerics::ComplexVector& state,
                        std::span<const std::size_t> coords);

/// Collapse companion of born_probability: the renormalized projection of
/// the state onto the coordinate set. Throws DomainError when the projection
/// has zero norm (collapse undefined).
numerics::ComplexVector collapse(const numerics::ComplexVector& state,
                                 std::span<const std::size_t> coords);

/// 0-based coordinate set of the projector for the item at `position`
/// (0-based): {position} for ordinary items, {position, n_items} for the
/// max-lambda item whose subspace is two-dimensional.
std::vector<std::size_t> item_projector(const HilbertModel& m, std::size_t position);

/// Per-item table plus scalars; every value is recomputable from the embedded
/// model.
struct ModelReport {
    std::string concept_a;
    std::string concept_b;
    HilbertModel model;
    OrthogonalityCheck orthogonality;
    double reconstruction_max_error = 0.0;
};

ModelReport make_report(HilbertModel m, std::string concept_a, std::string concept_b);

/// JSON serialization of the report (per-item rows plus scalars).
std::string report_json(const ModelReport& report);

/// Aligned text table mirroring the published column order, 6 significant
/// digits.
std::string report_table(const ModelReport& report);

/// State vectors as CSV `index,re_a,im_a,re_b,im_b` (n_items + 1 rows, the
/// extra coordinate carries index n_items + 1).
std::string vectors_csv(const HilbertModel& m);

}  // namespace qcog::hilbert
