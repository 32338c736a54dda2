#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qcog/errors.hpp"
#include "qcog/ingest.hpp"

namespace qcog::wavefield {

/// One 2D Gaussian wave packet |psi|^2 = D exp(-((x-cx)^2/(2 sx^2) +
/// (y-cy)^2/(2 sy^2))). D, sx, sy must be positive.
struct GaussianPacket {
    double amplitude = 1.0;  // D
    double cx = 0.0;
    double cy = 0.0;
    double sx = 1.0;
    double sy = 1.0;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// An item's spot in the plane, carrying the table index and label.
struct ItemPosition {
    int index = 0;
    std::string label;
    double x = 0.0;
    double y = 0.0;
};

struct GridSpec {
    int width = 0;
    int height = 0;
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;  // extent, x0 < x1 and y0 < y1
};

/// Monomial basis of the phase polynomial, in fixed order:
/// 1, x, y, x2, xy, y2, x3, x2y, xy2, y3, x4, x3y, x2y2, xy3, y4,
/// x5, x4y, x3y2, x2y3, xy4, y5, x6, x5y, x4y2.
inline constexpr std::array<std::pair<int, int>, 24> kPhaseBasis{{
    {0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1},
    {1, 2}, {0, 3}, {4, 0}, {3, 1}, {2, 2}, {1, 3}, {0, 4}, {5, 0},
    {4, 1}, {3, 2}, {2, 3}, {1, 4}, {0, 5}, {6, 0}, {5, 1}, {4, 2},
}};

/// Full wave-field configuration: the two packets, item positions, the cell
/// area used by the midpoint rule, the phase-field coefficients (empty until
/// solved; the phase is 0 everywhere when empty) and the render grid.
struct WaveFieldSpec {
    GaussianPacket packet_a;
    GaussianPacket packet_b;
    std::vector<ItemPosition> positions;
    double cell_area = 0.1;  // Delta
    std::vector<double> phase_coeffs;  // size 24 when present
    GridSpec grid;
};

/// |psi|^2 of a packet at (x,y).
double gaussian_density(const GaussianPacket& p, double x, double y);

/// Midpoint approximation of the collapse integral over the cell at
/// `position`: cell_area * gaussian_density(p, x, y).
double collapse_probability_midpoint(const GaussianPacket& p, Point position,
                                     double cell_area);

/// Places every item at a point where both midpoint probabilities reproduce
/// the table: cell_area * |psi_A|^2 = mu_kA and cell_area * |psi_B|^2 =
/// mu_kB, each within 1e-6. Candidates are the intersections of the two
/// level-set ellipses; the one nearest reference[k] is chosen when a
/// reference layout is supplied, otherwise the one nearest the origin.
/// Throws InfeasibleError, naming the item, when the level sets do not
/// intersect.
std::vector<Point> fit_item_positions(const ingest::ConceptPairData& data,
                                      const GaussianPacket& packet_a,
                                      const GaussianPacket& packet_b, double cell_area,
                                      std::span<const Point> reference = {});

struct PhaseFieldSolution {
    std::vector<double> coeffs;           // F_1..F_24 over kPhaseBasis
    std::vector<double> theta_points;     // theta targets f_k / (Delta f(x_k,y_k))
    std::vector<double> cos_theta_points; // cos of the targets (diagnostic)
    std::vector<double> residual_rel;     // per item, on the returned coefficients
    double max_residual_rel = 0.0;
    bool rescaled_coords = false;
};

/// Solves the linearized phase-field system Delta f(x_k,y_k) theta(x_k,y_k)
/// = f_k at the 24 item positions, then interpolates theta by the fixed
/// 24-monomial polynomial. f_k = mu_k(A or B) - (mu_kA + mu_kB)/2 comes in
/// through `f_values`.
///
/// With `rescale_coords` the positions are affinely mapped to [-1,1]^2
/// before solving and the coefficients mapped back, taming the conditioning
/// of the monomial system; default off, matching the published basis
/// literally.
///
/// Throws DomainError unless there are exactly 24 distinct positions with
/// f(x_k,y_k) > 0, SingularMatrixError when the interpolation system is
/// degenerate.
PhaseFieldSolution build_phase_field(const WaveFieldSpec& spec,
                                     std::span<const double> f_values,
                                     bool rescale_coords = false);

/// Evaluates the phase polynomial over kPhaseBasis. An empty coefficient
/// list is the zero field.
double evaluate_phase(std::span<const double> coeffs, double x, double y);
double evaluate_phase(const WaveFieldSpec& spec, double x, double y);

enum class Field { A, B, AorB };

/// Rasterized intensities over a grid. Row 0 is the top of the image
/// (y = y1 side); pixels are sampled at their centers. Values are raw, may
/// carry rounding dust below zero for AorB, and are clamped only for
/// display.
struct Raster {
    int width = 0;
    int height = 0;
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
    std::vector<double> values;  // row-major, width * height

    double at(int row, int col) const { return values[static_cast<std::size_t>(row) * width + col]; }
};

/// Per-pixel evaluation of |psi_A|^2, |psi_B|^2 or the superposition
/// (|psi_A|^2 + |psi_B|^2)/2 + |psi_A psi_B| cos theta. Deterministic:
/// identical spec and grid give a bit-identical raster. Throws DomainError
/// on a non-positive grid or zero-area extent.
Raster render_intensity(const WaveFieldSpec& spec, Field field, const GridSpec& grid);

/// Binary 8-bit PGM (P5) with linear min-max normalization per image;
/// negative values are clamped to 0 for display only.
std::string pgm_bytes(const Raster& raster);

/// Raw unnormalized intensities, one CSV row per raster row.
std::string csv_bytes(const Raster& raster);

/// Parses the wave-field spec JSON (packets, positions, delta, optional
/// phase_coeffs, grid). Throws ParseError / DomainError.
WaveFieldSpec parse_spec_json(std::string_view text);

/// phase_solution.json payload: theta point values, coefficients, residuals
/// and per-item diagnostics.
std::string phase_solution_json(const WaveFieldSpec& spec,
                                const PhaseFieldSolution& solution);

}  // namespace qcog::wavefield
