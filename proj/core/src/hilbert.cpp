#include "qcog/hilbert.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace qcog::hilbert {

namespace {

constexpr double kNormalizationTol = 1e-12;
// Headroom for values pushed just past 1 by rounding; beyond it the data is
// genuinely infeasible.
constexpr double kFeasibilityEps = 1e-12;

std::string item_tag(std::string_view label) {
    return label.empty() ? std::string{} : " for item '" + std::string(label) + "'";
}

double interference_term(double mu_a, double mu_b, double mu_ab) {
    return mu_ab - 0.5 * (mu_a + mu_b);
}

std::string format_sig(double v, int digits = 6) {
    char buf[48];
    const int n = std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return std::string(buf, buf + n);
}

std::string shortest(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

}  // namespace

double interference_phase(double mu_a, double mu_b, double mu_ab, double c,
                          std::string_view label) {
    if (mu_a * mu_b == 0.0) {
        throw DomainError("interference phase undefined: mu_a * mu_b = 0" + item_tag(label));
    }
    if (c <= 0.0) {
        throw DomainError("interference phase undefined: c <= 0" + item_tag(label));
    }
    const double cos_phi = interference_term(mu_a, mu_b, mu_ab) / (c * std::sqrt(mu_a * mu_b));
    if (std::abs(cos_phi) > 1.0 + kFeasibilityEps) {
        throw InfeasibleError("|cos phi| = " + format_sig(std::abs(cos_phi)) +
                              " exceeds 1" + item_tag(label));
    }
    return std::clamp(cos_phi, -1.0, 1.0);
}

double lambda_value(double mu_a, double mu_b, double mu_ab, std::string_view label) {
    const double j = interference_term(mu_a, mu_b, mu_ab);
    const double radicand = mu_a * mu_b - j * j;
    if (radicand < -kFeasibilityEps) {
        throw InfeasibleError("lambda radicand " + format_sig(radicand) +
                              " is negative" + item_tag(label));
    }
    return std::sqrt(std::max(radicand, 0.0));
}

SignAssignment assign_signs(std::span<const double> lambdas) {
    if (lambdas.empty()) {
        throw DomainError("assign_signs: empty lambda list");
    }
    if (std::all_of(lambdas.begin(), lambdas.end(), [](double l) { return l == 0.0; })) {
        throw DomainError("assign_signs: all lambda values are zero");
    }

    SignAssignment out;
    out.order.resize(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) out.order[i] = i;
    std::stable_sort(out.order.begin(), out.order.end(),
                     [&](std::size_t a, std::size_t b) { return lambdas[a] > lambdas[b]; });

    out.epsilons.assign(lambdas.size(), 0);
    out.partial_sums.reserve(lambdas.size());

    double s = lambdas[out.order[0]];
    out.epsilons[out.order[0]] = +1;
    out.partial_sums.push_back(s);
    for (std::size_t j = 1; j < out.order.size(); ++j) {
        const std::size_t i = out.order[j];
        if (s - lambdas[i] >= 0.0) {
            s -= lambdas[i];
            out.epsilons[i] = -1;
        } else {
            s += lambdas[i];
            out.epsilons[i] = +1;
        }
        out.partial_sums.push_back(s);
    }
    out.residual = s;
    return out;
}

double compute_cm(double s_residual, double lambda_m, double mu_a_m, double mu_b_m,
                  double mu_ab_m) {
    if (mu_a_m * mu_b_m <= 0.0) {
        throw DomainError("compute_cm: mu_a_m * mu_b_m must be positive");
    }
    const double diff = s_residual - lambda_m;
    const double j = interference_term(mu_a_m, mu_b_m, mu_ab_m);
    const double cm = std::sqrt((diff * diff + j * j) / (mu_a_m * mu_b_m));
    if (cm > 1.0 + kFeasibilityEps) {
        throw InfeasibleError("c_m = " + format_sig(cm) +
                              " exceeds 1: sine sum unsatisfiable with a single coefficient");
    }
    return std::min(cm, 1.0);
}

std::vector<double> HilbertModel::phases_deg() const {
    std::vector<double> deg(phase_rad.size());
    for (std::size_t k = 0; k < phase_rad.size(); ++k) {
        deg[k] = phase_rad[k] * 180.0 / std::numbers::pi;
    }
    return deg;
}

HilbertModel build_state_vectors(const ingest::ConceptPairData& data) {
    const std::size_t n = data.items.size();
    if (n < 2) {
        throw DomainError("build_state_vectors: at least 2 items required");
    }

    HilbertModel m;
    m.n_items = n;
    m.item_indices.reserve(n);
    m.labels.reserve(n);
    for (const ingest::ItemRecord& it : data.items) {
        m.item_indices.push_back(it.index);
        m.labels.push_back(it.label);
        m.mu_a.push_back(it.mu_a);
        m.mu_b.push_back(it.mu_b);
        m.mu_ab.push_back(it.mu_ab);
    }

    const std::pair<const std::vector<double>*, const char*> columns[] = {
        {&m.mu_a, "A"}, {&m.mu_b, "B"}, {&m.mu_ab, "A or B"}};
    for (const auto& [col, name] : columns) {
        double sum = 0.0;
        for (double v : *col) sum += v;
        if (std::abs(sum - 1.0) > kNormalizationTol) {
            throw DomainError(std::string("column ") + name + " sums to " + format_sig(sum, 17) +
                              ", expected 1: renormalize first");
        }
    }

    // Feasibility and lambda per item.
    m.lambdas.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        m.lambdas[k] = lambda_value(m.mu_a[k], m.mu_b[k], m.mu_ab[k], m.labels[k]);
    }

    SignAssignment signs = assign_signs(m.lambdas);
    m.epsilons = std::move(signs.epsilons);
    m.lambda_order = std::move(signs.order);
    m.s_residual = signs.residual;
    m.m_position = m.lambda_order[0];
    m.lambda_rank.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        m.lambda_rank[m.lambda_order[j]] = j + 1;
    }

    m.c.assign(n, 1.0);
    m.c[m.m_position] = compute_cm(m.s_residual, m.lambdas[m.m_position], m.mu_a[m.m_position],
                                   m.mu_b[m.m_position], m.mu_ab[m.m_position]);

    m.cos_phi.resize(n);
    m.phase_rad.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        m.cos_phi[k] = interference_phase(m.mu_a[k], m.mu_b[k], m.mu_ab[k], m.c[k], m.labels[k]);
        m.phase_rad[k] = m.epsilons[k] * std::acos(m.cos_phi[k]);
    }

    // Explicit C^(n+1) vectors: A is real with an empty extra coordinate; B
    // carries the phases, with the max-lambda item split over two coordinates.
    m.vector_a.assign(n + 1, numerics::Complex{0.0, 0.0});
    m.vector_b.assign(n + 1, numerics::Complex{0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) {
        m.vector_a[k] = numerics::Complex{std::sqrt(m.mu_a[k]), 0.0};
        m.vector_b[k] = std::polar(std::sqrt(m.mu_b[k]) * m.c[k], m.phase_rad[k]);
    }
    const double b_m = std::sqrt(m.mu_b[m.m_position]);
    const double cm = m.c[m.m_position];
    m.vector_b[n] = numerics::Complex{b_m * std::sqrt(1.0 - cm * cm), 0.0};
    return m;
}

OrthogonalityCheck verify_orthogonality(const HilbertModel& m) {
    OrthogonalityCheck check;
    for (std::size_t k = 0; k < m.n_items; ++k) {
        const double amp = m.c[k] * std::sqrt(m.mu_a[k] * m.mu_b[k]);
        check.cos_sum += amp * m.cos_phi[k];
        check.sin_sum +=
            amp * m.epsilons[k] * std::sqrt(1.0 - m.cos_phi[k] * m.cos_phi[k]);
    }
    check.abs_inner = std::abs(numerics::inner_product(m.vector_a, m.vector_b));
    return check;
}

std::vector<double> reconstruct_disjunction(const HilbertModel& m) {
    std::vector<double> out(m.n_items);
    for (std::size_t k = 0; k < m.n_items; ++k) {
        out[k] = 0.5 * (m.mu_a[k] + m.mu_b[k]) +
                 m.c[k] * std::sqrt(m.mu_a[k] * m.mu_b[k]) * std::cos(m.phase_rad[k]);
    }
    return out;
}

double born_probability(const numerics::ComplexVector& state,
                        std::span<const std::size_t> coords) {
    if (std::abs(numerics::norm(state) - 1.0) > 1e-9) {
        throw DomainError("born_probability: state is not normalized");
    }
    double p = 0.0;
    for (std::size_t i : coords) {
        if (i >= state.size()) {
            throw DomainError("born_probability: coordinate " + std::to_string(i) +
                              " out of range");
        }
        p += std::norm(state[i]);
    }
    return p;
}

numerics::ComplexVector collapse(const numerics::ComplexVector& state,
                                 std::span<const std::size_t> coords) {
    const double p = born_probability(state, coords);
    if (p <= 0.0) {
        throw DomainError("collapse undefined: projected state has zero norm");
    }
    numerics::ComplexVector out(state.size(), numerics::Complex{0.0, 0.0});
    const double scale = 1.0 / std::sqrt(p);
    for (std::size_t i : coords) {
        out[i] = state[i] * scale;
    }
    return out;
}

std::vector<std::size_t> item_projector(const HilbertModel& m, std::size_t position) {
    if (position >= m.n_items) {
        throw DomainError("item_projector: position out of range");
    }
    if (position == m.m_position) {
        return {position, m.n_items};
    }
    return {position};
}

ModelReport make_report(HilbertModel m, std::string concept_a, std::string concept_b) {
    ModelReport report;
    report.concept_a = std::move(concept_a);
    report.concept_b = std::move(concept_b);
    report.orthogonality = verify_orthogonality(m);
    const std::vector<double> rec = reconstruct_disjunction(m);
    for (std::size_t k = 0; k < m.n_items; ++k) {
        report.reconstruction_max_error =
            std::max(report.reconstruction_max_error, std::abs(rec[k] - m.mu_ab[k]));
    }
    report.model = std::move(m);
    return report;
}

std::string report_json(const ModelReport& report) {
    const HilbertModel& m = report.model;
    const std::vector<double> deg = m.phases_deg();
    nlohmann::ordered_json j;
    j["concept_a"] = report.concept_a;
    j["concept_b"] = report.concept_b;
    j["n_items"] = m.n_items;
    j["items"] = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < m.n_items; ++k) {
        j["items"].push_back({{"index", m.item_indices[k]},
                              {"label", m.labels[k]},
                              {"mu_a", m.mu_a[k]},
                              {"mu_b", m.mu_b[k]},
                              {"mu_ab", m.mu_ab[k]},
                              {"lambda", m.lambdas[k]},
                              {"lambda_rank", m.lambda_rank[k]},
                              {"epsilon", m.epsilons[k]},
                              {"phi_deg", deg[k]},
                              {"cos_phi", m.cos_phi[k]},
                              {"c", m.c[k]}});
    }
    j["s_residual"] = m.s_residual;
    j["c_m"] = m.c_m();
    j["m_index"] = m.item_indices[m.m_position];
    j["m_label"] = m.labels[m.m_position];
    j["orthogonality"] = {{"cos_sum", report.orthogonality.cos_sum},
                          {"sin_sum", report.orthogonality.sin_sum},
                          {"abs_inner", report.orthogonality.abs_inner}};
    j["reconstruction_max_error"] = report.reconstruction_max_error;
    return j.dump(2) + "\n";
}

std::string report_table(const ModelReport& report) {
    const HilbertModel& m = report.model;
    const std::vector<double> deg = m.phases_deg();

    std::size_t label_width = 5;
    for (const std::string& l : m.labels) label_width = std::max(label_width, l.size());

    std::ostringstream os;
    os << report.concept_a << " (A) / " << report.concept_b << " (B)\n\n";
    char line[256];
    std::snprintf(line, sizeof(line), "%4s  %-*s  %10s  %10s  %10s  %10s  %5s  %4s  %9s\n", "k",
                  static_cast<int>(label_width), "item", "mu_a", "mu_b", "mu_ab", "lambda",
                  "rank", "eps", "phi_deg");
    os << line;
    for (std::size_t k = 0; k < m.n_items; ++k) {
        std::snprintf(line, sizeof(line),
                      "%4d  %-*s  %10s  %10s  %10s  %10s  %5zu  %+4d  %9s\n", m.item_indices[k],
                      static_cast<int>(label_width), m.labels[k].c_str(),
                      format_sig(m.mu_a[k]).c_str(), format_sig(m.mu_b[k]).c_str(),
                      format_sig(m.mu_ab[k]).c_str(), format_sig(m.lambdas[k]).c_str(),
                      m.lambda_rank[k], m.epsilons[k], format_sig(deg[k]).c_str());
        os << line;
    }
    os << "\nS_" << m.n_items << " = " << format_sig(m.s_residual)
       << "\nc_m = " << format_sig(m.c_m()) << " (item " << m.item_indices[m.m_position] << ", "
       << m.labels[m.m_position] << ")"
       << "\n|<A|B>| = " << format_sig(report.orthogonality.abs_inner)
       << "\nreconstruction max error = " << format_sig(report.reconstruction_max_error) << "\n";
    return os.str();
}

std::string vectors_csv(const HilbertModel& m) {
    std::string out = "index,re_a,im_a,re_b,im_b\n";
    for (std::size_t i = 0; i < m.vector_a.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += shortest(m.vector_a[i].real());
        out += ',';
        out += shortest(m.vector_a[i].imag());
        out += ',';
        out += shortest(m.vector_b[i].real());
        out += ',';
        out += shortest(m.vector_b[i].imag());
        out += '\n';
    }
    return out;
}

}  // namespace qcog::hilbert
