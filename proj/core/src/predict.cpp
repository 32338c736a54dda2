#include "qcog/predict.hpp"

#include <charconv>

#include "json.hpp"

namespace qcog::predict {

namespace {

constexpr std::string_view kCsvHeader = "label,mu_ab,mu_ab_notb,mu_nota_b,mu_nota_notb";

double parse_probability(std::string_view field, std::size_t line, std::string_view what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError("malformed " + std::string(what) + " value '" + std::string(field) + "'",
                         line);
    }
    if (!(v >= 0.0 && v <= 1.0)) {
        throw DomainError(std::string(what) + " outside [0,1]");
    }
    return v;
}

}  // namespace

double kolmogorov_factor(const ConjunctionNegationRecord& r) {
    return 1.0 - r.mu_ab - r.mu_ab_notb - r.mu_nota_b - r.mu_nota_notb;
}

Prediction classical_prediction(double mu_ab, double mu_ab_notb, double mu_nota_b) {
    const double value = 1.0 - mu_ab - mu_ab_notb - mu_nota_b;
    return {value, value >= 0.0 && value <= 1.0};
}

Prediction quantum_prediction(double mu_ab, double mu_ab_notb, double mu_nota_b,
                              double quantum_constant) {
    const double value = quantum_constant - mu_ab - mu_ab_notb - mu_nota_b;
    return {value, value >= 0.0 && value <= 1.0};
}

std::vector<ConjunctionNegationRecord> parse_records_csv(std::string_view text) {
    std::vector<ConjunctionNegationRecord> records;
    std::size_t line_no = 0;
    bool saw_header = false;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t eol = text.find('\n', start);
        std::string_view line = text.substr(
            start, eol == std::string_view::npos ? text.size() - start : eol - start);
        start = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (!saw_header) {
            if (line != kCsvHeader) {
                throw ParseError("expected header '" + std::string(kCsvHeader) + "'", line_no);
            }
            saw_header = true;
            continue;
        }
        std::vector<std::string_view> fields;
        std::size_t field_start = 0;
        while (true) {
            const std::size_t pos = line.find(',', field_start);
            if (pos == std::string_view::npos) {
                fields.push_back(line.substr(field_start));
                break;
            }
            fields.push_back(line.substr(field_start, pos - field_start));
            field_start = pos + 1;
        }
        if (fields.size() != 5) {
            throw ParseError("expected 5 fields, got " + std::to_string(fields.size()), line_no);
        }
        ConjunctionNegationRecord rec;
        rec.label = std::string(fields[0]);
        rec.mu_ab = parse_probability(fields[1], line_no, "mu_ab");
        rec.mu_ab_notb = parse_probability(fields[2], line_no, "mu_ab_notb");
        rec.mu_nota_b = parse_probability(fields[3], line_no, "mu_nota_b");
        rec.mu_nota_notb = parse_probability(fields[4], line_no, "mu_nota_notb");
        records.push_back(std::move(rec));
    }
    if (!saw_header) {
        throw DomainError("no records");
    }
    return records;
}

std::string report_json(std::span<const ConjunctionNegationRecord> records,
                        double quantum_constant) {
    nlohmann::ordered_json j;
    j["quantum_constant"] = quantum_constant;
    j["records"] = nlohmann::ordered_json::array();
    for (const ConjunctionNegationRecord& r : records) {
        const Prediction cl = classical_prediction(r.mu_ab, r.mu_ab_notb, r.mu_nota_b);
        const Prediction qu = quantum_prediction(r.mu_ab, r.mu_ab_notb, r.mu_nota_b,
                                                 quantum_constant);
        j["records"].push_back({{"label", r.label},
                                {"mu_ab", r.mu_ab},
                                {"mu_ab_notb", r.mu_ab_notb},
                                {"mu_nota_b", r.mu_nota_b},
                                {"mu_nota_notb", r.mu_nota_notb},
                                {"kolmogorov_factor", kolmogorov_factor(r)},
                                {"classical_prediction", cl.value},
                                {"classical_in_range", cl.in_range},
                                {"classical_deviation", r.mu_nota_notb - cl.value},
                                {"quantum_prediction", qu.value},
                                {"quantum_in_range", qu.in_range},
                                {"quantum_deviation", r.mu_nota_notb - qu.value}});
    }
    return j.dump(2) + "\n";
}

}  // namespace qcog::predict
