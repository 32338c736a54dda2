#include "qcog/wavefield.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "json.hpp"

#include "qcog/numerics.hpp"

namespace qcog::wavefield {

namespace {

constexpr double kPlacementTol = 1e-6;
constexpr double kMinGaussianProduct = 1e-300;

std::string shortest(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

void check_packet(const GaussianPacket& p, std::string_view which) {
    if (!(p.amplitude > 0.0) || !(p.sx > 0.0) || !(p.sy > 0.0)) {
        throw DomainError("packet " + std::string(which) +
                          ": amplitude and widths must be positive");
    }
}

// Gaussian-like product magnitude |psi_A psi_B| at (x,y).
double packet_product(const GaussianPacket& a, const GaussianPacket& b, double x, double y) {
    return std::sqrt(gaussian_density(a, x, y) * gaussian_density(b, x, y));
}

std::size_t basis_slot(int px, int py) {
    for (std::size_t k = 0; k < kPhaseBasis.size(); ++k) {
        if (kPhaseBasis[k].first == px && kPhaseBasis[k].second == py) return k;
    }
    throw DomainError("phase basis has no monomial x^" + std::to_string(px) + " y^" +
                      std::to_string(py));
}

// Binomial coefficients up to the basis degree.
double binomial(int n, int k) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
}

}  // namespace

double gaussian_density(const GaussianPacket& p, double x, double y) {
    const double dx = x - p.cx;
    const double dy = y - p.cy;
    return p.amplitude *
           std::exp(-(dx * dx / (2.0 * p.sx * p.sx) + dy * dy / (2.0 * p.sy * p.sy)));
}

double collapse_probability_midpoint(const GaussianPacket& p, Point position,
                                     double cell_area) {
    if (cell_area < 0.0) {
        throw DomainError("cell area must be nonnegative");
    }
    return cell_area * gaussian_density(p, position.x, position.y);
}

std::vector<Point> fit_item_positions(const ingest::ConceptPairData& data,
                                      const GaussianPacket& packet_a,
                                      const GaussianPacket& packet_b, double cell_area,
                                      std::span<const Point> reference) {
    check_packet(packet_a, "A");
    check_packet(packet_b, "B");
    if (!(cell_area > 0.0)) {
        throw DomainError("cell area must be positive");
    }
    if (!reference.empty() && reference.size() != data.items.size()) {
        throw DomainError("reference layout size does not match the item count");
    }

    std::vector<Point> out;
    out.reserve(data.items.size());

    for (std::size_t k = 0; k < data.items.size(); ++k) {
        const ingest::ItemRecord& item = data.items[k];
        const double peak_a = cell_area * packet_a.amplitude;
        const double peak_b = cell_area * packet_b.amplitude;
        if (item.mu_a > peak_a || item.mu_b > peak_b || item.mu_a <= 0.0 || item.mu_b <= 0.0) {
            throw InfeasibleError("placement infeasible for item '" + item.label +
                                  "': target outside the packet range");
        }
        const double level_a = std::log(peak_a / item.mu_a);  // >= 0
        const double level_b = std::log(peak_b / item.mu_b);

        const auto b_mismatch = [&](double x, double y) {
            const double ddx = x - packet_b.cx;
            const double ddy = y - packet_b.cy;
            return ddx * ddx / (2.0 * packet_b.sx * packet_b.sx) +
                   ddy * ddy / (2.0 * packet_b.sy * packet_b.sy) - level_b;
        };

        std::vector<Point> candidates;
        if (level_a <= 1e-14) {
            // Peak constraint: the A level set degenerates to the center.
            candidates.push_back({packet_a.cx, packet_a.cy});
        } else {
            const double r = std::sqrt(2.0 * level_a);
            const auto on_ellipse = [&](double t) {
                return Point{packet_a.cx + r * packet_a.sx * std::cos(t),
                             packet_a.cy + r * packet_a.sy * std::sin(t)};
            };
            const int samples = 7200;
            const double step = 2.0 * std::numbers::pi / samples;
            double prev_t = 0.0;
            Point p0 = on_ellipse(prev_t);
            double prev_g = b_mismatch(p0.x, p0.y);
            for (int s = 1; s <= samples; ++s) {
                const double t = s * step;
                const Point p = on_ellipse(t);
                const double g = b_mismatch(p.x, p.y);
                if (prev_g == 0.0) {
                    candidates.push_back(on_ellipse(prev_t));
                } else if ((prev_g < 0.0) != (g < 0.0)) {
                    double lo = prev_t, hi = t, glo = prev_g;
                    for (int it = 0; it < 80; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        const Point pm = on_ellipse(mid);
                        const double gm = b_mismatch(pm.x, pm.y);
                        if (gm == 0.0) {
                            lo = hi = mid;
                            break;
                        }
                        if ((glo < 0.0) != (gm < 0.0)) {
                            hi = mid;
                        } else {
                            lo = mid;
                            glo = gm;
                        }
                    }
                    candidates.push_back(on_ellipse(0.5 * (lo + hi)));
                }
                prev_t = t;
                prev_g = g;
            }
        }

        if (candidates.empty()) {
            throw InfeasibleError("placement infeasible for item '" + item.label +
                                  "': level sets do not intersect");
        }

        const auto score = [&](const Point& p) {
            if (!reference.empty()) {
                const double dx = p.x - reference[k].x;
                const double dy = p.y - reference[k].y;
                return dx * dx + dy * dy;
            }
            return p.x * p.x + p.y * p.y;
        };
        const Point chosen = *std::min_element(
            candidates.begin(), candidates.end(),
            [&](const Point& a, const Point& b) { return score(a) < score(b); });

        const double got_a = collapse_probability_midpoint(packet_a, chosen, cell_area);
        const double got_b = collapse_probability_midpoint(packet_b, chosen, cell_area);
        if (std::abs(got_a - item.mu_a) > kPlacementTol ||
            std::abs(got_b - item.mu_b) > kPlacementTol) {
            throw InfeasibleError("placement infeasible for item '" + item.label +
                                  "': no intersection reproduces both probabilities");
        }
        out.push_back(chosen);
    }
    return out;
}

double evaluate_phase(std::span<const double> coeffs, double x, double y) {
    if (coeffs.empty()) return 0.0;
    if (coeffs.size() > kPhaseBasis.size()) {
        throw DomainError("phase polynomial has at most " +
                          std::to_string(kPhaseBasis.size()) + " coefficients");
    }
    double xp[7], yp[6];
    xp[0] = 1.0;
    for (int i = 1; i <= 6; ++i) xp[i] = xp[i - 1] * x;
    yp[0] = 1.0;
    for (int i = 1; i <= 5; ++i) yp[i] = yp[i - 1] * y;
    double acc = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        acc += coeffs[k] * xp[kPhaseBasis[k].first] * yp[kPhaseBasis[k].second];
    }
    return acc;
}

double evaluate_phase(const WaveFieldSpec& spec, double x, double y) {
    return evaluate_phase(spec.phase_coeffs, x, y);
}

PhaseFieldSolution build_phase_field(const WaveFieldSpec& spec,
                                     std::span<const double> f_values, bool rescale_coords) {
    const std::size_t n = kPhaseBasis.size();
    if (spec.positions.size() != n) {
        throw DomainError("phase field needs exactly " + std::to_string(n) + " positions, got " +
                          std::to_string(spec.positions.size()));
    }
    if (f_values.size() != n) {
        throw DomainError("phase field needs exactly " + std::to_string(n) + " f values, got " +
                          std::to_string(f_values.size()));
    }
    if (!(spec.cell_area > 0.0)) {
        throw DomainError("cell area must be positive");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (spec.positions[i].x == spec.positions[j].x &&
                spec.positions[i].y == spec.positions[j].y) {
                throw DomainError("positions of items '" + spec.positions[i].label + "' and '" +
                                  spec.positions[j].label + "' coincide");
            }
        }
    }

    PhaseFieldSolution sol;
    sol.rescaled_coords = rescale_coords;
    sol.theta_points.resize(n);
    std::vector<double> fxy(n);
    for (std::size_t k = 0; k < n; ++k) {
        fxy[k] = packet_product(spec.packet_a, spec.packet_b, spec.positions[k].x,
                                spec.positions[k].y);
        if (!(fxy[k] > kMinGaussianProduct)) {
            throw DomainError("packet product vanishes at item '" + spec.positions[k].label +
                              "': position is too far out");
        }
        sol.theta_points[k] = f_values[k] / (spec.cell_area * fxy[k]);
    }
    sol.cos_theta_points.resize(n);
    for (std::size_t k = 0; k < n; ++k) sol.cos_theta_points[k] = std::cos(sol.theta_points[k]);

    // Optional affine map of the positions onto [-1,1]^2.
    double ax = 1.0, bx = 0.0, ay = 1.0, by = 0.0;
    if (rescale_coords) {
        double xmin = spec.positions[0].x, xmax = xmin;
        double ymin = spec.positions[0].y, ymax = ymin;
        for (const ItemPosition& p : spec.positions) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
        ax = xmax > xmin ? 2.0 / (xmax - xmin) : 1.0;
        bx = xmax > xmin ? -(xmax + xmin) / (xmax - xmin) : -xmin;
        ay = ymax > ymin ? 2.0 / (ymax - ymin) : 1.0;
        by = ymax > ymin ? -(ymax + ymin) / (ymax - ymin) : -ymin;
    }

    numerics::DenseMatrix system(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double u = ax * spec.positions[k].x + bx;
        const double v = ay * spec.positions[k].y + by;
        double up[7], vp[6];
        up[0] = 1.0;
        for (int i = 1; i <= 6; ++i) up[i] = up[i - 1] * u;
        vp[0] = 1.0;
        for (int i = 1; i <= 5; ++i) vp[i] = vp[i - 1] * v;
        for (std::size_t c = 0; c < n; ++c) {
            system.at(k, c) = up[kPhaseBasis[c].first] * vp[kPhaseBasis[c].second];
        }
    }
    const std::vector<double> raw = numerics::solve_dense_linear(system, sol.theta_points);

    if (!rescale_coords) {
        sol.coeffs = raw;
    } else {
        // Expand each G_k (a u + b)^p (c v + d)^q back into x,y monomials; the
        // basis is closed under lowering exponents, so every term has a slot.
        sol.coeffs.assign(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            const int p = kPhaseBasis[k].first;
            const int q = kPhaseBasis[k].second;
            for (int i = 0; i <= p; ++i) {
                const double cx = binomial(p, i) * std::pow(ax, i) * std::pow(bx, p - i);
                for (int j = 0; j <= q; ++j) {
                    const double cy = binomial(q, j) * std::pow(ay, j) * std::pow(by, q - j);
                    sol.coeffs[basis_slot(i, j)] += raw[k] * cx * cy;
                }
            }
        }
    }

    sol.residual_rel.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double theta = evaluate_phase(sol.coeffs, spec.positions[k].x, spec.positions[k].y);
        const double lhs = spec.cell_area * fxy[k] * theta;
        const double denom = std::max(std::abs(f_values[k]), 1e-30);
        sol.residual_rel[k] = std::abs(lhs - f_values[k]) / denom;
        sol.max_residual_rel = std::max(sol.max_residual_rel, sol.residual_rel[k]);
    }
    return sol;
}

Raster render_intensity(const WaveFieldSpec& spec, Field field, const GridSpec& grid) {
    if (grid.width < 1 || grid.height < 1) {
        throw DomainError("grid dimensions must be positive");
    }
    if (!(grid.x1 > grid.x0) || !(grid.y1 > grid.y0)) {
        throw DomainError("grid extent has zero area");
    }
    check_packet(spec.packet_a, "A");
    check_packet(spec.packet_b, "B");

    Raster raster;
    raster.width = grid.width;
    raster.height = grid.height;
    raster.x0 = grid.x0;
    raster.y0 = grid.y0;
    raster.x1 = grid.x1;
    raster.y1 = grid.y1;
    raster.values.resize(static_cast<std::size_t>(grid.width) * grid.height);

    const double px = (grid.x1 - grid.x0) / grid.width;
    const double py = (grid.y1 - grid.y0) / grid.height;
    for (int row = 0; row < grid.height; ++row) {
        const double y = grid.y1 - (row + 0.5) * py;
        for (int col = 0; col < grid.width; ++col) {
            const double x = grid.x0 + (col + 0.5) * px;
            double value = 0.0;
            switch (field) {
                case Field::A:
                    value = gaussian_density(spec.packet_a, x, y);
                    break;
                case Field::B:
                    value = gaussian_density(spec.packet_b, x, y);
                    break;
                case Field::AorB: {
                    const double ia = gaussian_density(spec.packet_a, x, y);
                    const double ib = gaussian_density(spec.packet_b, x, y);
                    const double theta = evaluate_phase(spec.phase_coeffs, x, y);
                    value = 0.5 * (ia + ib) + std::sqrt(ia * ib) * std::cos(theta);
                    break;
                }
            }
            raster.values[static_cast<std::size_t>(row) * grid.width + col] = value;
        }
    }
    return raster;
}

std::string pgm_bytes(const Raster& raster) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (double v : raster.values) {
        const double d = std::max(v, 0.0);
        if (first) {
            lo = hi = d;
            first = false;
        } else {
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
    }
    const double span = hi - lo;

    std::string out = "P5\n" + std::to_string(raster.width) + " " +
                      std::to_string(raster.height) + "\n255\n";
    out.reserve(out.size() + raster.values.size());
    for (double v : raster.values) {
        const double d = std::max(v, 0.0);
        const long level = span > 0.0 ? std::lround(255.0 * (d - lo) / span) : 0;
        out.push_back(static_cast<char>(static_cast<unsigned char>(std::clamp(level, 0L, 255L))));
    }
    return out;
}

std::string csv_bytes(const Raster& raster) {
    std::string out;
    for (int row = 0; row < raster.height; ++row) {
        for (int col = 0; col < raster.width; ++col) {
            if (col > 0) out += ',';
            out += shortest(raster.at(row, col));
        }
        out += '\n';
    }
    return out;
}

WaveFieldSpec parse_spec_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    try {
        WaveFieldSpec spec;
        const auto read_packet = [](const nlohmann::json& pj) {
            GaussianPacket p;
            p.amplitude = pj.at("amplitude").get<double>();
            p.cx = pj.at("center").at(0).get<double>();
            p.cy = pj.at("center").at(1).get<double>();
            p.sx = pj.at("sigma").at(0).get<double>();
            p.sy = pj.at("sigma").at(1).get<double>();
            return p;
        };
        spec.packet_a = read_packet(j.at("packet_a"));
        spec.packet_b = read_packet(j.at("packet_b"));
        spec.cell_area = j.at("delta").get<double>();
        for (const auto& pj : j.at("positions")) {
            ItemPosition p;
            p.index = pj.at("index").get<int>();
            p.label = pj.at("label").get<std::string>();
            p.x = pj.at("x").get<double>();
            p.y = pj.at("y").get<double>();
            spec.positions.push_back(std::move(p));
        }
        if (j.contains("phase_coeffs")) {
            spec.phase_coeffs = j.at("phase_coeffs").get<std::vector<double>>();
        }
        if (j.contains("grid")) {
            const auto& gj = j.at("grid");
            spec.grid.width = gj.at("width").get<int>();
            spec.grid.height = gj.at("height").get<int>();
            spec.grid.x0 = gj.at("extent").at(0).get<double>();
            spec.grid.y0 = gj.at("extent").at(1).get<double>();
            spec.grid.x1 = gj.at("extent").at(2).get<double>();
            spec.grid.y1 = gj.at("extent").at(3).get<double>();
        }

        check_packet(spec.packet_a, "A");
        check_packet(spec.packet_b, "B");
        if (!(spec.cell_area > 0.0)) {
            throw DomainError("delta must be positive");
        }
        if (!spec.phase_coeffs.empty() && spec.phase_coeffs.size() != kPhaseBasis.size()) {
            throw DomainError("phase_coeffs must have " + std::to_string(kPhaseBasis.size()) +
                              " entries");
        }
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid wave-field spec JSON: ") + e.what());
    }
}

std::string phase_solution_json(const WaveFieldSpec& spec, const PhaseFieldSolution& solution) {
    nlohmann::ordered_json j;
    j["delta"] = spec.cell_area;
    j["rescaled_coords"] = solution.rescaled_coords;
    j["items"] = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < spec.positions.size(); ++k) {
        j["items"].push_back({{"index", spec.positions[k].index},
                              {"label", spec.positions[k].label},
                              {"x", spec.positions[k].x},
                              {"y", spec.positions[k].y},
                              {"theta", solution.theta_points[k]},
                              {"cos_theta", solution.cos_theta_points[k]},
                              {"residual_rel", solution.residual_rel[k]}});
    }
    j["coefficients"] = solution.coeffs;
    j["max_residual_rel"] = solution.max_residual_rel;
    return j.dump(2) + "\n";
}

}  // namespace qcog::wavefield
