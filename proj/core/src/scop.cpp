#include "qcog/scop.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace qcog::scop {

namespace {

constexpr double kRowSumTol = 1e-12;

bool contains(const std::vector<std::string>& xs, std::string_view x) {
    return std::find(xs.begin(), xs.end(), x) != xs.end();
}

void require_member(const std::vector<std::string>& xs, std::string_view x,
                    std::string_view kind) {
    if (!contains(xs, x)) {
        throw LookupError("unknown " + std::string(kind) + " '" + std::string(x) + "'");
    }
}

}  // namespace

double prototype_distance(const FeatureVector& item, const FeatureVector& prototype) {
    if (item.values.size() != prototype.values.size()) {
        throw DomainError("feature vectors have different lengths (" +
                          std::to_string(item.values.size()) + " vs " +
                          std::to_string(prototype.values.size()) + ")");
    }
    double acc = 0.0;
    for (std::size_t m = 0; m < item.values.size(); ++m) {
        const double d = item.values[m] - prototype.values[m];
        acc += d * d;
    }
    return std::sqrt(acc);
}

ScopConcept::ScopConcept(std::vector<std::string> states, std::string ground_state,
                         std::vector<std::string> contexts,
                         std::vector<std::string> properties, TransitionTable transitions,
                         ApplicabilityTable applicabilities)
    : states_(std::move(states)),
      ground_state_(std::move(ground_state)),
      contexts_(std::move(contexts)),
      properties_(std::move(properties)),
      transitions_(std::move(transitions)),
      applicabilities_(std::move(applicabilities)) {
    if (!contains(states_, ground_state_)) {
        throw DomainError("ground state '" + ground_state_ + "' is not a member of states");
    }
    if (!contains(contexts_, std::string(kUnitContext))) {
        contexts_.emplace_back(kUnitContext);
    }

    // Per-(e,p) row sums; the unit context is implicit and must stay identity,
    // so explicit unit entries are validated and then dropped.
    std::map<std::pair<std::string, std::string>, double> row_sums;
    for (auto it = transitions_.begin(); it != transitions_.end();) {
        const auto& [q, e, p] = it->first;
        const double prob = it->second;
        require_member(states_, q, "state");
        require_member(contexts_, e, "context");
        require_member(states_, p, "state");
        if (!(prob >= 0.0 && prob <= 1.0)) {
            throw DomainError("mu(" + q + "," + e + "," + p + ") outside [0,1]");
        }
        if (e == kUnitContext) {
            const double expected = q == p ? 1.0 : 0.0;
            if (prob != expected) {
                throw DomainError("unit context must leave state '" + p + "' fixed");
            }
            it = transitions_.erase(it);
            continue;
        }
        row_sums[{e, p}] += prob;
        ++it;
    }
    for (const std::string& e : contexts_) {
        if (e == kUnitContext) continue;
        for (const std::string& p : states_) {
            const auto it = row_sums.find({e, p});
            const double sum = it == row_sums.end() ? 0.0 : it->second;
            if (std::abs(sum - 1.0) > kRowSumTol) {
                throw DomainError("transition row (e=" + e + ", p=" + p + ") sums to " +
                                  std::to_string(sum) + ", expected 1");
            }
        }
    }

    for (const auto& [key, weight] : applicabilities_) {
        const auto& [p, a] = key;
        require_member(states_, p, "state");
        require_member(properties_, a, "property");
        if (!(weight >= 0.0 && weight <= 1.0)) {
            throw DomainError("nu(" + p + "," + a + ") outside [0,1]");
        }
    }
}

double ScopConcept::transition_probability(std::string_view q, std::string_view e,
                                           std::string_view p) const {
    require_member(states_, q, "state");
    require_member(contexts_, e, "context");
    require_member(states_, p, "state");
    if (e == kUnitContext) {
        return q == p ? 1.0 : 0.0;
    }
    const auto it = transitions_.find({std::string(q), std::string(e), std::string(p)});
    return it == transitions_.end() ? 0.0 : it->second;
}

double ScopConcept::applicability(std::string_view p, std::string_view a) const {
    require_member(states_, p, "state");
    require_member(properties_, a, "property");
    const auto it = applicabilities_.find({std::string(p), std::string(a)});
    return it == applicabilities_.end() ? 0.0 : it->second;
}

ScopConcept ScopConcept::from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    try {
        TransitionTable transitions;
        for (const auto& t : j.value("transitions", nlohmann::json::array())) {
            transitions[{t.at("q").get<std::string>(), t.at("e").get<std::string>(),
                         t.at("p").get<std::string>()}] = t.at("prob").get<double>();
        }
        ApplicabilityTable applicabilities;
        for (const auto& t : j.value("applicabilities", nlohmann::json::array())) {
            applicabilities[{t.at("p").get<std::string>(), t.at("a").get<std::string>()}] =
                t.at("weight").get<double>();
        }
        return ScopConcept(j.at("states").get<std::vector<std::string>>(),
                           j.at("ground_state").get<std::string>(),
                           j.at("contexts").get<std::vector<std::string>>(),
                           j.at("properties").get<std::vector<std::string>>(),
                           std::move(transitions), std::move(applicabilities));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid SCoP JSON: ") + e.what());
    }
}

std::string ScopConcept::to_json() const {
    nlohmann::ordered_json j;
    j["states"] = states_;
    j["ground_state"] = ground_state_;
    j["contexts"] = contexts_;
    j["properties"] = properties_;
    j["transitions"] = nlohmann::ordered_json::array();
    for (const auto& [key, prob] : transitions_) {
        const auto& [q, e, p] = key;
        j["transitions"].push_back({{"q", q}, {"e", e}, {"p", p}, {"prob", prob}});
    }
    j["applicabilities"] = nlohmann::ordered_json::array();
    for (const auto& [key, weight] : applicabilities_) {
        j["applicabilities"].push_back({{"p", key.first}, {"a", key.second}, {"weight", weight}});
    }
    return j.dump(2) + "\n";
}

}  // namespace qcog::scop
