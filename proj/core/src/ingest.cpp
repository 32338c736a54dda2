#include "qcog/ingest.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include "json.hpp"

namespace qcog::ingest {

namespace {

constexpr std::string_view kCsvHeader = "index,label,mu_a,mu_b,mu_ab";

// Column sums within this distance of 1 are treated as already normalized,
// so renormalize_columns is a bit-level no-op on its own output.
constexpr double kAlreadyNormalizedTol = 1e-13;

std::string shortest(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

double parse_double(std::string_view field, std::size_t line, std::string_view what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError("malformed " + std::string(what) + " value '" + std::string(field) + "'",
                         line);
    }
    return v;
}

int parse_index(std::string_view field, std::size_t line) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || v < 1) {
        throw ParseError("malformed index '" + std::string(field) + "'", line);
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

void check_probability(double v, std::string_view what, int index) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw DomainError(std::string(what) + " = " + shortest(v) + " outside [0,1] for item " +
                          std::to_string(index));
    }
}

void validate_items(const ConceptPairData& data) {
    if (data.items.empty()) {
        throw DomainError("no items");
    }
    if (data.items.size() < 2) {
        throw DomainError("a concept pair table needs at least 2 items");
    }
    std::set<int> seen;
    for (const ItemRecord& it : data.items) {
        if (it.index < 1) {
            throw DomainError("item index " + std::to_string(it.index) + " is not positive");
        }
        if (!seen.insert(it.index).second) {
            throw DomainError("duplicate item index " + std::to_string(it.index));
        }
        check_probability(it.mu_a, "mu_a", it.index);
        check_probability(it.mu_b, "mu_b", it.index);
        check_probability(it.mu_ab, "mu_ab", it.index);
    }
}

ConceptPairData parse_csv(std::string_view text) {
    ConceptPairData data;
    data.concept_a_label = "A";
    data.concept_b_label = "B";

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
        const auto fields = split(line, ',');
        if (fields.size() != 5) {
            throw ParseError("expected 5 fields, got " + std::to_string(fields.size()), line_no);
        }
        ItemRecord rec;
        rec.index = parse_index(fields[0], line_no);
        rec.label = std::string(fields[1]);
        rec.mu_a = parse_double(fields[2], line_no, "mu_a");
        rec.mu_b = parse_double(fields[3], line_no, "mu_b");
        rec.mu_ab = parse_double(fields[4], line_no, "mu_ab");
        data.items.push_back(std::move(rec));
    }
    if (!saw_header) {
        throw DomainError("no items");
    }
    return data;
}

ConceptPairData parse_json_table(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    try {
        ConceptPairData data;
        data.concept_a_label = j.at("concept_a").get<std::string>();
        data.concept_b_label = j.at("concept_b").get<std::string>();
        for (const auto& item : j.at("items")) {
            ItemRecord rec;
            rec.index = item.at("index").get<int>();
            rec.label = item.at("label").get<std::string>();
            rec.mu_a = item.at("mu_a").get<double>();
            rec.mu_b = item.at("mu_b").get<double>();
            rec.mu_ab = item.at("mu_ab").get<double>();
            data.items.push_back(std::move(rec));
        }
        return data;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid membership table JSON: ") + e.what());
    }
}

void check_label_csv_safe(const std::string& label) {
    if (label.find(',') != std::string::npos || label.find('\n') != std::string::npos ||
        label.find('\r') != std::string::npos) {
        throw DomainError("label '" + label + "' cannot be stored in CSV");
    }
}

}  // namespace

ConceptPairData parse_probability_table(std::string_view text, Format format, bool renormalize) {
    ConceptPairData data = format == Format::Csv ? parse_csv(text) : parse_json_table(text);
    validate_items(data);
    if (renormalize) {
        renormalize_columns(data);
    }
    return data;
}

std::string serialize(const ConceptPairData& data, Format format) {
    if (format == Format::Csv) {
        std::string out{kCsvHeader};
        out += '\n';
        for (const ItemRecord& it : data.items) {
            check_label_csv_safe(it.label);
            out += std::to_string(it.index);
            out += ',';
            out += it.label;
            out += ',';
            out += shortest(it.mu_a);
            out += ',';
            out += shortest(it.mu_b);
            out += ',';
            out += shortest(it.mu_ab);
            out += '\n';
        }
        return out;
    }
    nlohmann::ordered_json j;
    j["concept_a"] = data.concept_a_label;
    j["concept_b"] = data.concept_b_label;
    j["items"] = nlohmann::ordered_json::array();
    for (const ItemRecord& it : data.items) {
        j["items"].push_back({{"index", it.index},
                              {"label", it.label},
                              {"mu_a", it.mu_a},
                              {"mu_b", it.mu_b},
                              {"mu_ab", it.mu_ab}});
    }
    return j.dump(2) + "\n";
}

void renormalize_columns(ConceptPairData& data) {
    const auto renorm = [&](double ItemRecord::* field, std::string_view name) {
        double sum = 0.0;
        for (const ItemRecord& it : data.items) sum += it.*field;
        if (sum == 0.0) {
            throw DomainError("column " + std::string(name) + " sums to zero");
        }
        if (std::abs(sum - 1.0) <= kAlreadyNormalizedTol) return;
        for (ItemRecord& it : data.items) it.*field /= sum;
    };
    renorm(&ItemRecord::mu_a, "A");
    renorm(&ItemRecord::mu_b, "B");
    renorm(&ItemRecord::mu_ab, "A or B");
}

std::vector<double> likert_to_collapse_probabilities(std::span<const int> ratings) {
    if (ratings.empty()) {
        throw DomainError("no ratings");
    }
    long long sum = 0;
    for (int r : ratings) {
        if (r < -3 || r > 3) {
            throw DomainError("rating " + std::to_string(r) + " outside [-3,3]");
        }
        sum += r + 3;
    }
    if (sum == 0) {
        throw DomainError("all ratings are -3: shifted sum is zero");
    }
    std::vector<double> out;
    out.reserve(ratings.size());
    for (int r : ratings) {
        out.push_back(static_cast<double>(r + 3) / static_cast<double>(sum));
    }
    return out;
}

std::vector<double> likert_to_collapse_probabilities(const LikertTable& table) {
    std::vector<int> degrees;
    degrees.reserve(table.entries.size());
    for (const LikertRating& r : table.entries) degrees.push_back(r.degree);
    return likert_to_collapse_probabilities(degrees);
}

std::vector<Violation> validate_normalization(const ConceptPairData& data, double tol) {
    std::vector<Violation> report;
    const auto check_column = [&](double ItemRecord::* field, const std::string& name) {
        double sum = 0.0;
        for (const ItemRecord& it : data.items) {
            const double v = it.*field;
            sum += v;
            if (!(v >= 0.0 && v <= 1.0)) {
                report.push_back({name, it.index,
                                  "entry " + shortest(v) + " outside [0,1]"});
            }
        }
        if (std::abs(sum - 1.0) > tol) {
            report.push_back({name, 0, "column sum " + shortest(sum) + " differs from 1"});
        }
    };
    check_column(&ItemRecord::mu_a, "A");
    check_column(&ItemRecord::mu_b, "B");
    check_column(&ItemRecord::mu_ab, "A or B");
    return report;
}

}  // namespace qcog::ingest
