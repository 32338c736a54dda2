#include "qcog/wavefield.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "test_support.hpp"

using namespace qcog;
namespace wf = qcog::wavefield;

namespace {

wf::GaussianPacket packet_a() {
    return {qcog_test::kPacketAmpA, 0.0, 0.0, qcog_test::kPacketSigAx, qcog_test::kPacketSigAy};
}

wf::GaussianPacket packet_b() {
    return {qcog_test::kPacketAmpB, 10.0, 4.0, qcog_test::kPacketSigBx, qcog_test::kPacketSigBy};
}

wf::WaveFieldSpec table_spec() { return wf::parse_spec_json(qcog_test::wavefield_spec_json()); }

std::vector<double> corpus_f_values(const ingest::ConceptPairData& data) {
    std::vector<double> f;
    for (const auto& it : data.items) f.push_back(it.mu_ab - 0.5 * (it.mu_a + it.mu_b));
    return f;
}

// Term-by-term std::pow evaluation, the independent route for the
// incremental-powers evaluator.
double phase_by_pow(std::span<const double> coeffs, double x, double y) {
    double acc = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        acc += coeffs[k] * std::pow(x, wf::kPhaseBasis[k].first) *
               std::pow(y, wf::kPhaseBasis[k].second);
    }
    return acc;
}

}  // namespace

TEST_CASE("gaussian density peaks at the packet center") {
    const auto a = packet_a();
    CHECK(wf::gaussian_density(a, 0.0, 0.0) == qcog_test::kPacketAmpA);
    // hand-evaluated exponent at the second packet's center (10, 4)
    CHECK(wf::gaussian_density(a, 10.0, 4.0) ==
          doctest::Approx(0.14254439285526307).epsilon(1e-9));
    CHECK(std::abs(wf::gaussian_density(a, 10.0, 4.0) - 0.1426) <= 1e-3);
    // monotone decay along a ray
    double prev = wf::gaussian_density(a, 0.0, 0.0);
    for (int step = 1; step <= 20; ++step) {
        const double cur = wf::gaussian_density(a, 0.4 * step, 0.25 * step);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("midpoint collapse probabilities cross-check the two tables") {
    CHECK(wf::collapse_probability_midpoint(packet_a(), {0.0, 0.0}, 0.1) ==
          doctest::Approx(0.118412).epsilon(1e-12));
    CHECK(std::abs(wf::collapse_probability_midpoint(packet_a(), {0.0, 0.0}, 0.1) - 0.1184) <=
          5e-4);
    CHECK(std::abs(wf::collapse_probability_midpoint(packet_b(), {10.0, 4.0}, 0.1) - 0.1284) <=
          5e-4);
    CHECK(wf::collapse_probability_midpoint(packet_a(), {3.0, 2.0}, 0.0) == 0.0);
}

TEST_CASE("midpoint probabilities match the corpus at every item position") {
    const auto data = qcog_test::load_corpus();
    for (std::size_t k = 0; k < 24; ++k) {
        const auto [x, y] = qcog_test::kItemXY[k];
        CHECK(std::abs(wf::collapse_probability_midpoint(packet_a(), {x, y}, 0.1) -
                       data.items[k].mu_a) <= 5e-3);
        CHECK(std::abs(wf::collapse_probability_midpoint(packet_b(), {x, y}, 0.1) -
                       data.items[k].mu_b) <= 5e-3);
    }
}

TEST_CASE("fit_item_positions reproduces both probabilities") {
    const auto data = qcog_test::load_corpus();
    std::vector<wf::Point> reference;
    for (const auto& [x, y] : qcog_test::kItemXY) reference.push_back({x, y});

    const auto points = wf::fit_item_positions(data, packet_a(), packet_b(), 0.1, reference);
    REQUIRE(points.size() == 24);
    for (std::size_t k = 0; k < 24; ++k) {
        CHECK(std::abs(wf::collapse_probability_midpoint(packet_a(), points[k], 0.1) -
                       data.items[k].mu_a) <= 1e-6);
        CHECK(std::abs(wf::collapse_probability_midpoint(packet_b(), points[k], 0.1) -
                       data.items[k].mu_b) <= 1e-6);
        // nearest-to-reference selection keeps the published layout; the
        // published coordinates themselves are only 5e-3-accurate, so the
        // exact intersection can sit a noticeable step away
        const double dx = points[k].x - reference[k].x;
        const double dy = points[k].y - reference[k].y;
        CHECK(std::sqrt(dx * dx + dy * dy) <= 0.5);
    }
}

TEST_CASE("fit places a peak-constrained item at the packet center") {
    const auto a = packet_a();
    const auto b = packet_b();
    const double delta = 0.1;
    ingest::ConceptPairData data;
    data.items = {{1, "peak", delta * a.amplitude,
                   delta * wf::gaussian_density(b, a.cx, a.cy), 0.0},
                  {2, "other", delta * wf::gaussian_density(a, 2.0, 1.0),
                   delta * wf::gaussian_density(b, 2.0, 1.0), 0.0}};
    const auto points = wf::fit_item_positions(data, a, b, delta);
    CHECK(points[0].x == a.cx);
    CHECK(points[0].y == a.cy);
    CHECK(std::abs(wf::collapse_probability_midpoint(a, points[1], delta) -
                   data.items[1].mu_a) <= 1e-6);
    CHECK(std::abs(wf::collapse_probability_midpoint(b, points[1], delta) -
                   data.items[1].mu_b) <= 1e-6);
}

TEST_CASE("fit fails loudly when the level sets cannot intersect") {
    ingest::ConceptPairData data;
    // more probability than the whole packet peak can deliver
    data.items = {{1, "toobright", 0.9, 0.01, 0.0}, {2, "ok", 0.01, 0.01, 0.0}};
    try {
        (void)wf::fit_item_positions(data, packet_a(), packet_b(), 0.1);
        FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
        CHECK(std::string(e.what()).find("toobright") != std::string::npos);
    }

    // tight rings around two distant centers never meet
    wf::GaussianPacket near{1.0, 0.0, 0.0, 0.5, 0.5};
    wf::GaussianPacket far{1.0, 100.0, 0.0, 0.5, 0.5};
    ingest::ConceptPairData rings;
    rings.items = {{1, "disjoint", 0.0999, 0.0999, 0.0}, {2, "also", 0.0999, 0.0999, 0.0}};
    CHECK_THROWS_AS((void)wf::fit_item_positions(rings, near, far, 0.1), InfeasibleError);
}

TEST_CASE("phase field solve closes the linearized system") {
    const auto data = qcog_test::load_corpus();
    auto spec = table_spec();
    const auto f = corpus_f_values(data);
    const auto sol = wf::build_phase_field(spec, f);
    REQUIRE(sol.coeffs.size() == 24);
    CHECK(sol.max_residual_rel <= 1e-6);
    for (std::size_t k = 0; k < 24; ++k) {
        // substitute back: theta(x_k, y_k) * Delta * f(x_k, y_k) = f_k
        const double theta =
            wf::evaluate_phase(sol.coeffs, spec.positions[k].x, spec.positions[k].y);
        const double fxy = std::sqrt(
            wf::gaussian_density(spec.packet_a, spec.positions[k].x, spec.positions[k].y) *
            wf::gaussian_density(spec.packet_b, spec.positions[k].x, spec.positions[k].y));
        CHECK(std::abs(theta * spec.cell_area * fxy - f[k]) <= 1e-6 * std::abs(f[k]));
        CHECK(sol.theta_points[k] == doctest::Approx(theta).epsilon(1e-6));
        CHECK(sol.cos_theta_points[k] == std::cos(sol.theta_points[k]));
    }
}

TEST_CASE("zero interference solves to the zero polynomial") {
    auto spec = table_spec();
    const std::vector<double> zeros(24, 0.0);
    const auto sol = wf::build_phase_field(spec, zeros);
    for (double c : sol.coeffs) CHECK(c == 0.0);
    CHECK(sol.max_residual_rel == 0.0);
}

TEST_CASE("permuting the items leaves the recovered point values unchanged") {
    const auto data = qcog_test::load_corpus();
    auto spec = table_spec();
    const auto f = corpus_f_values(data);
    const auto sol = wf::build_phase_field(spec, f);

    auto permuted = spec;
    std::vector<double> f_perm = f;
    std::mt19937 rng(163);
    std::vector<std::size_t> perm(24);
    for (std::size_t i = 0; i < 24; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < 24; ++i) {
        permuted.positions[i] = spec.positions[perm[i]];
        f_perm[i] = f[perm[i]];
    }
    const auto sol2 = wf::build_phase_field(permuted, f_perm);
    for (std::size_t i = 0; i < 24; ++i) {
        const double a =
            wf::evaluate_phase(sol.coeffs, permuted.positions[i].x, permuted.positions[i].y);
        const double b =
            wf::evaluate_phase(sol2.coeffs, permuted.positions[i].x, permuted.positions[i].y);
        CHECK(a == doctest::Approx(b).epsilon(1e-8));
    }
}

TEST_CASE("rescaled solve agrees with the literal basis at the items") {
    const auto data = qcog_test::load_corpus();
    auto spec = table_spec();
    const auto f = corpus_f_values(data);
    const auto plain = wf::build_phase_field(spec, f, false);
    const auto scaled = wf::build_phase_field(spec, f, true);
    CHECK(scaled.rescaled_coords);
    CHECK(scaled.max_residual_rel <= 1e-6);
    for (std::size_t k = 0; k < 24; ++k) {
        CHECK(plain.theta_points[k] == doctest::Approx(scaled.theta_points[k]).epsilon(1e-10));
    }
}

TEST_CASE("phase field input validation") {
    const auto data = qcog_test::load_corpus();
    auto spec = table_spec();
    const auto f = corpus_f_values(data);

    auto few = spec;
    few.positions.pop_back();
    CHECK_THROWS_AS((void)wf::build_phase_field(few, f), DomainError);
    CHECK_THROWS_AS(
        (void)wf::build_phase_field(spec, std::vector<double>(23, 0.0)), DomainError);

    auto dup = spec;
    dup.positions[1].x = dup.positions[0].x;
    dup.positions[1].y = dup.positions[0].y;
    CHECK_THROWS_AS((void)wf::build_phase_field(dup, f), DomainError);
}

TEST_CASE("collinear positions make the system singular") {
    auto spec = table_spec();
    for (std::size_t k = 0; k < spec.positions.size(); ++k) {
        spec.positions[k].x = static_cast<double>(k) * 0.3 - 3.0;
        spec.positions[k].y = 0.0;  // y-monomials all vanish
    }
    CHECK_THROWS_AS((void)wf::build_phase_field(spec, std::vector<double>(24, 0.001)),
                    SingularMatrixError);
}

TEST_CASE("phase evaluation matches the pow-based route") {
    CHECK(wf::evaluate_phase(std::vector<double>{}, 3.0, 4.0) == 0.0);
    CHECK(wf::evaluate_phase(std::vector<double>(24, 0.0), 3.0, 4.0) == 0.0);

    std::vector<double> only_constant(24, 0.0);
    only_constant[0] = 2.5;
    CHECK(wf::evaluate_phase(only_constant, -7.0, 11.0) == 2.5);

    std::mt19937 rng(8);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<double> coeffs(24);
        for (double& c : coeffs) c = coeff(rng);
        const double x = coord(rng), y = coord(rng);
        const double direct = phase_by_pow(coeffs, x, y);
        const double got = wf::evaluate_phase(coeffs, x, y);
        CHECK(std::abs(got - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("renders put the A maximum at the packet center") {
    auto spec = table_spec();
    spec.phase_coeffs.clear();
    // 41x41 grid centered so that (0,0) is exactly a pixel center
    const wf::GridSpec grid{41, 41, -10.25, -10.25, 10.25, 10.25};
    const auto raster = wf::render_intensity(spec, wf::Field::A, grid);
    std::size_t best = 0;
    for (std::size_t i = 1; i < raster.values.size(); ++i) {
        if (raster.values[i] > raster.values[best]) best = i;
    }
    const int row = static_cast<int>(best) / grid.width;
    const int col = static_cast<int>(best) % grid.width;
    CHECK(row == 20);
    CHECK(col == 20);
    CHECK(raster.values[best] == qcog_test::kPacketAmpA);
}

TEST_CASE("identical packets with zero phase double the intensity") {
    wf::WaveFieldSpec spec;
    spec.packet_a = packet_a();
    spec.packet_b = packet_a();
    const wf::GridSpec grid{32, 16, -8.0, -4.0, 8.0, 4.0};
    const auto one = wf::render_intensity(spec, wf::Field::A, grid);
    const auto both = wf::render_intensity(spec, wf::Field::AorB, grid);
    for (std::size_t i = 0; i < one.values.size(); ++i) {
        CHECK(both.values[i] == doctest::Approx(2.0 * one.values[i]).epsilon(1e-14));
    }
}

TEST_CASE("superposition decomposes into average plus interference") {
    const auto data = qcog_test::load_corpus();
    auto spec = table_spec();
    spec.phase_coeffs = wf::build_phase_field(spec, corpus_f_values(data)).coeffs;
    const wf::GridSpec grid{64, 48, -14.0, -8.0, 26.0, 12.0};
    const auto ra = wf::render_intensity(spec, wf::Field::A, grid);
    const auto rb = wf::render_intensity(spec, wf::Field::B, grid);
    const auto rab = wf::render_intensity(spec, wf::Field::AorB, grid);
    const double px = (grid.x1 - grid.x0) / grid.width;
    const double py = (grid.y1 - grid.y0) / grid.height;
    for (int row = 0; row < grid.height; ++row) {
        for (int col = 0; col < grid.width; ++col) {
            const double x = grid.x0 + (col + 0.5) * px;
            const double y = grid.y1 - (row + 0.5) * py;
            const double cross = std::sqrt(ra.at(row, col) * rb.at(row, col)) *
                                 std::cos(wf::evaluate_phase(spec.phase_coeffs, x, y));
            CHECK(std::abs(rab.at(row, col) - 0.5 * (ra.at(row, col) + rb.at(row, col)) -
                           cross) <= 1e-12);
        }
    }
}

TEST_CASE("interference fringes alternate along the packet axis") {
    const auto data = qcog_test::load_corpus();
    auto spec = table_spec();
    spec.phase_coeffs = wf::build_phase_field(spec, corpus_f_values(data)).coeffs;
    int sign_changes = 0;
    double prev = std::cos(wf::evaluate_phase(spec.phase_coeffs, 0.0, 0.0));
    for (int s = 1; s <= 2000; ++s) {
        const double t = s / 2000.0;
        const double c = std::cos(wf::evaluate_phase(spec.phase_coeffs, 10.0 * t, 4.0 * t));
        if ((c < 0.0) != (prev < 0.0)) ++sign_changes;
        prev = c;
    }
    CHECK(sign_changes >= 10);
}

TEST_CASE("rendering is deterministic") {
    auto spec = table_spec();
    spec.phase_coeffs.assign(24, 0.0);
    spec.phase_coeffs[2] = 1.5;
    const wf::GridSpec grid{50, 40, -12.0, -6.0, 24.0, 10.0};
    const auto r1 = wf::render_intensity(spec, wf::Field::AorB, grid);
    const auto r2 = wf::render_intensity(spec, wf::Field::AorB, grid);
    CHECK(r1.values == r2.values);
    CHECK(wf::pgm_bytes(r1) == wf::pgm_bytes(r2));
    CHECK(wf::csv_bytes(r1) == wf::csv_bytes(r2));
}

TEST_CASE("render rejects degenerate grids") {
    const auto spec = table_spec();
    CHECK_THROWS_AS((void)wf::render_intensity(spec, wf::Field::A, {0, 4, 0, 0, 1, 1}),
                    DomainError);
    CHECK_THROWS_AS((void)wf::render_intensity(spec, wf::Field::A, {4, 4, 1, 0, 1, 2}),
                    DomainError);
}

TEST_CASE("pgm output is valid and min-max normalized") {
    wf::Raster single;
    single.width = 1;
    single.height = 1;
    single.values = {3.7};
    const std::string tiny = wf::pgm_bytes(single);
    CHECK(tiny == std::string("P5\n1 1\n255\n") + '\0');

    wf::Raster ramp;
    ramp.width = 3;
    ramp.height = 1;
    ramp.values = {0.0, 0.5, 1.0};
    const std::string bytes = wf::pgm_bytes(ramp);
    const std::string header = "P5\n3 1\n255\n";
    REQUIRE(bytes.size() == header.size() + 3);
    CHECK(bytes.substr(0, header.size()) == header);
    CHECK(static_cast<unsigned char>(bytes[header.size() + 0]) == 0);
    CHECK(static_cast<unsigned char>(bytes[header.size() + 1]) == 128);
    CHECK(static_cast<unsigned char>(bytes[header.size() + 2]) == 255);

    // negative dust is clamped for display
    wf::Raster dust;
    dust.width = 2;
    dust.height = 1;
    dust.values = {-1e-18, 1.0};
    const std::string clamped = wf::pgm_bytes(dust);
    const std::size_t header2 = std::string("P5\n2 1\n255\n").size();
    CHECK(static_cast<unsigned char>(clamped[header2 + 0]) == 0);
    CHECK(static_cast<unsigned char>(clamped[header2 + 1]) == 255);
}

TEST_CASE("csv grid carries raw values") {
    wf::Raster r;
    r.width = 2;
    r.height = 2;
    r.values = {0.25, -1e-18, 3.0, 0.0};
    CHECK(wf::csv_bytes(r) == "0.25,-1e-18\n3,0\n");
}

TEST_CASE("spec JSON parses the bundled file") {
    const auto spec = table_spec();
    CHECK(spec.packet_a.amplitude == qcog_test::kPacketAmpA);
    CHECK(spec.packet_b.sx == qcog_test::kPacketSigBx);
    CHECK(spec.cell_area == 0.1);
    REQUIRE(spec.positions.size() == 24);
    CHECK(spec.positions[7].label == "Apple");
    CHECK(spec.positions[7].x == 0.0);
    CHECK(spec.positions[20].label == "Broccoli");
    CHECK(spec.positions[20].x == 10.0);
    CHECK(spec.phase_coeffs.size() == 24);
    CHECK(spec.grid.width == 512);
    CHECK(spec.grid.x1 == 26.0);
}

TEST_CASE("spec JSON validation") {
    CHECK_THROWS_AS((void)wf::parse_spec_json("{"), ParseError);
    CHECK_THROWS_AS((void)wf::parse_spec_json("{}"), ParseError);
    nlohmann::json j = nlohmann::json::parse(qcog_test::wavefield_spec_json());
    j["packet_a"]["sigma"][0] = -1.0;
    CHECK_THROWS_AS((void)wf::parse_spec_json(j.dump()), DomainError);
    j = nlohmann::json::parse(qcog_test::wavefield_spec_json());
    j["phase_coeffs"] = {1.0, 2.0};
    CHECK_THROWS_AS((void)wf::parse_spec_json(j.dump()), DomainError);
    j = nlohmann::json::parse(qcog_test::wavefield_spec_json());
    j["delta"] = 0.0;
    CHECK_THROWS_AS((void)wf::parse_spec_json(j.dump()), DomainError);
}

TEST_CASE("phase solution JSON carries diagnostics") {
    const auto data = qcog_test::load_corpus();
    auto spec = table_spec();
    const auto sol = wf::build_phase_field(spec, corpus_f_values(data));
    const auto j = nlohmann::json::parse(wf::phase_solution_json(spec, sol));
    CHECK(j.at("delta") == 0.1);
    CHECK(j.at("items").size() == 24);
    CHECK(j.at("coefficients").size() == 24);
    CHECK(j.at("max_residual_rel").get<double>() <= 1e-6);
    CHECK(j.at("items")[7].at("label") == "Apple");
    CHECK(j.at("items")[7].contains("cos_theta"));
}
