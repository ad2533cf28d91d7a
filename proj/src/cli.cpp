#include "tessera/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <omp.h>

#include "CLI11.hpp"
#include "tessera/analysis.hpp"
#include "tessera/errors.hpp"
#include "tessera/grid_graph.hpp"
#include "tessera/harness.hpp"
#include "tessera/numfmt.hpp"
#include "tessera/render.hpp"
#include "tessera/steiner.hpp"

namespace tessera {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Empty path means stdout.
void write_output(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) {
        out << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + path + "'");
    f << content;
}

std::vector<double> parse_palette(const std::string& csv) {
    std::vector<double> palette;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            palette.push_back(std::stod(item, &used));
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
                ++used;
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ValidationError("bad palette entry '" + item + "'");
        }
    }
    if (palette.empty()) throw ValidationError("palette is empty");
    return palette;
}

bool is_input_error(const Error& e) {
    return dynamic_cast<const ParseError*>(&e) || dynamic_cast<const ValidationError*>(&e) ||
           dynamic_cast<const IndexError*>(&e) || dynamic_cast<const OutOfBounds*>(&e) ||
           dynamic_cast<const InvalidQuery*>(&e) || dynamic_cast<const NotAdjacent*>(&e) ||
           dynamic_cast<const NotAPath*>(&e) || dynamic_cast<const BadThreshold*>(&e) ||
           dynamic_cast<const LevelTooLarge*>(&e);
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"weighted-grid shortest paths: 8-neighbor grid solver, boundary-point "
                 "reference solver, ratio analysis, SVG rendering"};
    app.require_subcommand(1);

    std::string in_path, out_path, grid_file, ref_file, palette_csv;
    double a = 0.414213562;
    double rel_tol = 1e-4;
    int level = 5;
    int jobs = omp_get_max_threads();
    std::uint64_t seed = 0;
    std::uint64_t budget = 1000;

    auto add_common = [&](CLI::App* cmd, bool with_level, bool with_a, bool with_jobs) {
        cmd->add_option("--in", in_path, "input instance path")->required();
        cmd->add_option("--out", out_path, "output path (default: stdout)");
        if (with_level) {
            cmd->add_option("--level", level, "refinement level ceiling (0..7)")
                ->envname("TESSERA_LEVEL");
            cmd->add_option("--rel-tol", rel_tol, "oracle convergence tolerance");
        }
        if (with_a) cmd->add_option("--a", a, "level-set threshold in [0, 0.5]");
        if (with_jobs)
            cmd->add_option("--jobs", jobs, "worker threads")->envname("TESSERA_JOBS");
    };

    CLI::App* solve_grid = app.add_subcommand("solve-grid", "shortest grid-graph path");
    add_common(solve_grid, false, false, false);
    solve_grid->callback([&] {
        const Instance inst = load_instance(read_file(in_path));
        const GridPath gp = grid_dijkstra(inst.tess, inst.query);
        write_output(out_path, grid_path_json(gp) + "\n", out);
    });

    CLI::App* solve_ref = app.add_subcommand("solve-ref", "boundary-point reference path");
    add_common(solve_ref, true, false, false);
    solve_ref->callback([&] {
        const Instance inst = load_instance(read_file(in_path));
        const RefSolution sol = converge(inst.tess, inst.query, level, rel_tol);
        write_output(out_path, ref_solution_json(sol) + "\n", out);
    });

    CLI::App* lemma = app.add_subcommand(
        "lemma-path", "axis+bridge grid path built from the reference path's level set");
    add_common(lemma, true, true, false);
    lemma->callback([&] {
        const Instance inst = load_instance(read_file(in_path));
        const RefSolution sol = converge(inst.tess, inst.query, level, rel_tol);
        const GridPath gp = construct_lemma_path(inst.tess, inst.query, sol.polyline, a);
        write_output(out_path, grid_path_json(gp) + "\n", out);
    });

    CLI::App* ratio = app.add_subcommand("ratio", "grid/reference cost ratio report");
    add_common(ratio, true, true, false);
    // evaluate_instance folds solver failures into the report, which would
    // turn a bad --level into an internal error; reject it up front instead
    auto check_level = [&] {
        if (level < 0 || level > 7)
            throw LevelTooLarge("refinement level must be in 0..7");
    };

    ratio->callback([&] {
        check_level();
        const Instance inst = load_instance(read_file(in_path));
        HarnessOptions opt;
        opt.max_level = level;
        opt.rel_tol = rel_tol;
        opt.a = a;
        const RatioReport rep = evaluate_instance(in_path, inst.tess, inst.query, opt);
        write_output(out_path, report_csv({&rep, 1}), out);
        if (!rep.error.empty()) throw Error(rep.id + ": " + rep.error);
        if (!rep.bound_ok)
            throw Error(rep.id + ": ratio " + fmt_g9(rep.ratio) +
                        " violates the sqrt(2)+1 bound");
    });

    CLI::App* sweep =
        app.add_subcommand("sweep", "ratio reports for every instance in a manifest");
    add_common(sweep, true, true, true);
    sweep->callback([&] {
        check_level();
        const std::filesystem::path manifest(in_path);
        std::istringstream lines(read_file(in_path));
        std::vector<NamedInstance> instances;
        std::string line;
        while (std::getline(lines, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            std::filesystem::path p(line);
            if (p.is_relative()) p = manifest.parent_path() / p;
            Instance inst = load_instance(read_file(p.string()));
            instances.push_back(NamedInstance{line, std::move(inst.tess), inst.query});
        }
        if (instances.empty()) throw ValidationError("manifest lists no instances");
        HarnessOptions opt;
        opt.max_level = level;
        opt.rel_tol = rel_tol;
        opt.a = a;
        opt.jobs = jobs;
        const std::vector<RatioReport> reports = ratio_harness(instances, opt);
        write_output(out_path, report_csv(reports), out);
        bool all_bound_ok = true;
        for (const RatioReport& r : reports) {
            if (!r.error.empty()) err << "warning: " << r.id << ": " << r.error << "\n";
            all_bound_ok = all_bound_ok && r.bound_ok;
        }
        if (!all_bound_ok) throw Error("some instance violates the sqrt(2)+1 bound");
    });

    CLI::App* search = app.add_subcommand(
        "search-worst", "maximize the grid/reference ratio over weight assignments");
    add_common(search, true, true, true);
    search->add_option("--palette", palette_csv, "comma-separated weights")->required();
    search->add_option("--budget", budget, "max assignments to evaluate");
    search->add_option("--seed", seed, "sampling seed");
    search->callback([&] {
        check_level();
        const Instance tmpl = load_instance(read_file(in_path));
        HarnessOptions opt;
        opt.max_level = level;
        opt.rel_tol = rel_tol;
        opt.a = a;
        opt.jobs = jobs;
        const SearchResult res =
            worst_case_search(tmpl.tess.width(), tmpl.tess.height(), parse_palette(palette_csv),
                              budget, opt, seed, &tmpl.query);
        write_output(out_path, serialize_instance(res.tess, res.query), out);
        err << "best " << res.id << " ratio " << fmt_g9(res.ratio) << " over "
            << res.evaluated << (res.exhaustive ? " assignments (exhaustive)\n"
                                                : " sampled assignments\n");
    });

    CLI::App* render = app.add_subcommand("render", "SVG of an instance with path overlays");
    add_common(render, false, false, false);
    render->add_option("--grid", grid_file, "grid path JSON to overlay");
    render->add_option("--ref", ref_file, "reference path JSON to overlay");
    render->callback([&] {
        const Instance inst = load_instance(read_file(in_path));
        GridPath gp;
        Polyline ref;
        const bool has_grid = !grid_file.empty();
        const bool has_ref = !ref_file.empty();
        if (has_grid) gp = load_grid_path_json(read_file(grid_file));
        if (has_ref) ref = load_polyline_json(read_file(ref_file));
        const std::string svg = render_svg(inst.tess, has_grid ? &gp : nullptr,
                                           has_ref ? &ref : nullptr, RenderSpec{},
                                           &inst.query);
        write_output(out_path, svg, out);
    });

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    } catch (const Error& e) {
        if (is_input_error(e)) {
            err << "error: " << e.what() << "\n";
            return 1;
        }
        err << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace tessera
