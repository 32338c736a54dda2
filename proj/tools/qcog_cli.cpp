// qcog: fit the two-concept superposition model, render wave-field
// interference rasters, and evaluate classical vs quantum predictions.
//
// Exit codes: 0 success, 1 I/O or parse failure, 2 model infeasibility or
// solver failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "qcog/errors.hpp"
#include "qcog/hilbert.hpp"
#include "qcog/ingest.hpp"
#include "qcog/predict.hpp"
#include "qcog/wavefield.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string input;
    std::string spec_path;
    std::string out_dir;
    std::string name = "wavefield";
    double tol = 1e-9;
    double delta = 0.0;  // 0 = use the spec file's delta
    bool no_renormalize = false;
    bool rescale_coords = false;
    std::string grid;    // "WxH"
    std::string extent;  // "x0,y0,x1,y1"
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw qcog::Error("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw qcog::Error("cannot write '" + path.string() + "'");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw qcog::Error("short write to '" + path.string() + "'");
    }
}

qcog::ingest::Format sniff_format(const fs::path& path) {
    return path.extension() == ".json" ? qcog::ingest::Format::Json
                                       : qcog::ingest::Format::Csv;
}

std::string sig6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void apply_grid_overrides(const Options& opt, qcog::wavefield::GridSpec& grid) {
    if (!opt.grid.empty()) {
        int w = 0, h = 0;
        if (std::sscanf(opt.grid.c_str(), "%dx%d", &w, &h) != 2 || w < 1 || h < 1) {
            throw qcog::DomainError("--grid expects WxH with positive integers");
        }
        grid.width = w;
        grid.height = h;
    }
    if (!opt.extent.empty()) {
        double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
        if (std::sscanf(opt.extent.c_str(), "%lf,%lf,%lf,%lf", &x0, &y0, &x1, &y1) != 4) {
            throw qcog::DomainError("--extent expects x0,y0,x1,y1");
        }
        grid.x0 = x0;
        grid.y0 = y0;
        grid.x1 = x1;
        grid.y1 = y1;
    }
}

int cmd_model(const Options& opt) {
    const auto data = qcog::ingest::parse_probability_table(
        read_file(opt.input), sniff_format(opt.input), !opt.no_renormalize);
    auto model = qcog::hilbert::build_state_vectors(data);
    const auto report = qcog::hilbert::make_report(std::move(model), data.concept_a_label,
                                                   data.concept_b_label);

    fs::create_directories(opt.out_dir);
    write_file(fs::path(opt.out_dir) / "report.json", qcog::hilbert::report_json(report));
    write_file(fs::path(opt.out_dir) / "report.txt", qcog::hilbert::report_table(report));
    write_file(fs::path(opt.out_dir) / "vectors.csv", qcog::hilbert::vectors_csv(report.model));

    std::cout << "model: n=" << report.model.n_items << " S_" << report.model.n_items << "="
              << sig6(report.model.s_residual) << " c_m=" << sig6(report.model.c_m())
              << " (item " << report.model.labels[report.model.m_position] << ")"
              << " |<A|B>|=" << sig6(report.orthogonality.abs_inner) << "\n";
    std::cout << "wrote " << opt.out_dir << "/report.json, report.txt, vectors.csv\n";
    return 0;
}

int cmd_wavefield(const Options& opt) {
    namespace wf = qcog::wavefield;
    wf::WaveFieldSpec spec = wf::parse_spec_json(read_file(opt.spec_path));
    const auto data = qcog::ingest::parse_probability_table(
        read_file(opt.input), sniff_format(opt.input), !opt.no_renormalize);
    if (opt.delta > 0.0) {
        spec.cell_area = opt.delta;
    }

    // Align positions with items by table index.
    if (spec.positions.size() != data.items.size()) {
        throw qcog::DomainError("spec has " + std::to_string(spec.positions.size()) +
                                " positions but the table has " +
                                std::to_string(data.items.size()) + " items");
    }
    std::vector<wf::ItemPosition> ordered;
    ordered.reserve(data.items.size());
    for (const auto& item : data.items) {
        const auto it = std::find_if(spec.positions.begin(), spec.positions.end(),
                                     [&](const auto& p) { return p.index == item.index; });
        if (it == spec.positions.end()) {
            throw qcog::DomainError("spec has no position for item index " +
                                    std::to_string(item.index));
        }
        ordered.push_back(*it);
    }
    spec.positions = std::move(ordered);

    std::vector<double> f_values;
    f_values.reserve(data.items.size());
    for (const auto& item : data.items) {
        f_values.push_back(item.mu_ab - 0.5 * (item.mu_a + item.mu_b));
    }

    const wf::PhaseFieldSolution solution =
        wf::build_phase_field(spec, f_values, opt.rescale_coords);
    spec.phase_coeffs = solution.coeffs;

    wf::GridSpec grid = spec.grid;
    apply_grid_overrides(opt, grid);

    fs::create_directories(opt.out_dir);
    const fs::path base = fs::path(opt.out_dir) / opt.name;
    const std::pair<wf::Field, const char*> fields[] = {
        {wf::Field::A, "A"}, {wf::Field::B, "B"}, {wf::Field::AorB, "AorB"}};
    for (const auto& [field, tag] : fields) {
        const wf::Raster raster = wf::render_intensity(spec, field, grid);
        write_file(base.string() + "_" + tag + ".pgm", wf::pgm_bytes(raster));
        write_file(base.string() + "_" + tag + ".csv", wf::csv_bytes(raster));
    }
    write_file(fs::path(opt.out_dir) / "phase_solution.json",
               wf::phase_solution_json(spec, solution));

    std::cout << "wavefield: delta=" << sig6(spec.cell_area) << " grid=" << grid.width << "x"
              << grid.height << " max_residual_rel=" << sig6(solution.max_residual_rel) << "\n";
    std::cout << "wrote " << opt.out_dir << "/" << opt.name
              << "_{A,B,AorB}.{pgm,csv}, phase_solution.json\n";
    return 0;
}

int cmd_predict(const Options& opt) {
    const auto records = qcog::predict::parse_records_csv(read_file(opt.input));
    fs::create_directories(opt.out_dir);
    write_file(fs::path(opt.out_dir) / "predictions.json",
               qcog::predict::report_json(records));
    std::cout << "predict: " << records.size() << " records\n";
    std::cout << "wrote " << opt.out_dir << "/predictions.json\n";
    return 0;
}

int cmd_validate(const Options& opt) {
    const auto data = qcog::ingest::parse_probability_table(
        read_file(opt.input), sniff_format(opt.input), !opt.no_renormalize);
    const auto violations = qcog::ingest::validate_normalization(data, opt.tol);
    if (violations.empty()) {
        std::cout << "ok: all entries in [0,1], column sums within " << sig6(opt.tol)
                  << " of 1\n";
    } else {
        for (const auto& v : violations) {
            std::cout << "violation: column " << v.column;
            if (v.item_index > 0) std::cout << " item " << v.item_index;
            std::cout << ": " << v.message << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-concept superposition model toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("--tol", opt.tol, "normalization tolerance (validate)");
    app.add_flag("--no-renormalize", opt.no_renormalize, "keep columns as read");
    app.add_option("--delta", opt.delta, "override the spec cell area");
    app.add_flag("--rescale-coords", opt.rescale_coords,
                 "solve the phase field on coordinates rescaled to [-1,1]^2");
    app.add_option("--grid", opt.grid, "render grid as WxH");
    app.add_option("--extent", opt.extent, "render extent as x0,y0,x1,y1");

    CLI::App* model = app.add_subcommand("model", "fit the Hilbert-space model");
    model->add_option("input", opt.input, "membership table (.csv or .json)")->required();
    model->add_option("out_dir", opt.out_dir, "output directory")->required();

    CLI::App* wavefield = app.add_subcommand("wavefield", "solve and render the wave field");
    wavefield->add_option("spec", opt.spec_path, "wave-field spec (.json)")->required();
    wavefield->add_option("input", opt.input, "membership table (.csv or .json)")->required();
    wavefield->add_option("out_dir", opt.out_dir, "output directory")->required();
    wavefield->add_option("--name", opt.name, "output base name (default: wavefield)");

    CLI::App* predict = app.add_subcommand("predict", "conjunction/negation predictions");
    predict->add_option("input", opt.input, "records table (.csv)")->required();
    predict->add_option("out_dir", opt.out_dir, "output directory")->required();

    CLI::App* validate = app.add_subcommand("validate", "check table normalization");
    validate->add_option("input", opt.input, "membership table (.csv or .json)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (model->parsed()) return cmd_model(opt);
        if (wavefield->parsed()) return cmd_wavefield(opt);
        if (predict->parsed()) return cmd_predict(opt);
        if (validate->parsed()) return cmd_validate(opt);
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const qcog::InfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qcog::SingularMatrixError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
