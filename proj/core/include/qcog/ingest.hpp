#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcog/errors.hpp"

namespace qcog::ingest {

/// One row of a membership table: collapse probabilities of item `index`
/// for concept A, concept B and their disjunction.
struct ItemRecord {
    int index = 0;  // 1-based, unique within a table
    std::string label;
    double mu_a = 0.0;
    double mu_b = 0.0;
    double mu_ab = 0.0;

    bool operator==(const ItemRecord&) const = default;
};

/// A full two-concept membership table. After renormalize_columns each of
/// the three probability columns sums to 1 within 1e-12.
struct ConceptPairData {
    std::string concept_a_label;
    std::string concept_b_label;
    std::vector<ItemRecord> items;

    bool operator==(const ConceptPairData&) const = default;
};

enum class Format { Csv, Json };

/// Parses a membership table.
///
/// CSV: header `index,label,mu_a,mu_b,mu_ab`, UTF-8, '.' decimal separator,
/// LF line endings; the format carries no concept names, so the labels are
/// set to "A" and "B". JSON: object with `concept_a`, `concept_b` and
/// `items: [{index,label,mu_a,mu_b,mu_ab}]`.
///
/// Values are read verbatim and, with `renormalize` set, each probability
/// column is then divided by its sum so it sums to 1.
///
/// Throws ParseError (with line number for CSV) on malformed input,
/// DomainError when a probability lies outside [0,1] before renormalization,
/// when the table has fewer than two items, or when an index repeats.
ConceptPairData parse_probability_table(std::string_view text, Format format,
                                        bool renormalize = true);

/// Inverse of parse_probability_table. CSV output round-trips bit-for-bit:
/// every double is printed in its shortest form that re-reads to the same
/// value. Labels must not contain ',' or line breaks (DomainError).
std::string serialize(const ConceptPairData& data, Format format);

/// Divides each probability column by its sum. Columns already summing to 1
/// within 1e-13 are left untouched, which makes the operation idempotent at
/// the bit level. Throws DomainError on a zero column sum.
void renormalize_columns(ConceptPairData& data);

/// One measured concept column of 7-point Likert judgments: degrees -3..-1
/// mark non-membership, 0 the borderline, 1..3 membership.
struct LikertRating {
    std::string label;
    int degree = 0;  // in [-3, 3]

    bool operator==(const LikertRating&) const = default;
};

struct LikertTable {
    std::vector<LikertRating> entries;

    bool operator==(const LikertTable&) const = default;
};

/// Converts Likert degrees of membership/non-membership in [-3,3] to collapse
/// probabilities: shift every rating by +3, then divide by the shifted sum.
/// Throws DomainError on an empty list, a rating outside [-3,3], or when all
/// ratings are -3 (zero shifted sum).
std::vector<double> likert_to_collapse_probabilities(std::span<const int> ratings);
std::vector<double> likert_to_collapse_probabilities(const LikertTable& table);

/// One normalization defect: the offending column ("A", "B" or "A or B"),
/// the item index for entry-level defects (0 for column sums), and a message.
struct Violation {
    std::string column;
    int item_index = 0;
    std::string message;

    bool operator==(const Violation&) const = default;
};

/// Report-only check: returns an empty list iff every entry lies in [0,1] and
/// all three column sums are within `tol` of 1.
std::vector<Violation> validate_normalization(const ConceptPairData& data, double tol);

}  // namespace qcog::ingest
