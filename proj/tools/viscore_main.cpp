// viscore command line: limit sets, component charts, visual measures, core
// slices, and the verification suites.
#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "viscore/io.hpp"
#include "viscore/suites.hpp"

using namespace viscore;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInconclusive = 3;

struct CommonArgs {
    std::string config;
    int res = 32;
    int depth = 4;
    double dilation = 1.5;  // in cell diagonals
    double tau = 0.02;
    size_t samples = 100000;
    uint64_t seed = 0;
    bool seed_set = false;
    std::string out = "out";
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--config", a.config, "group file (JSON)");
    cmd->add_option("--res", a.res, "raster resolution n (6 n^2 cells)");
    cmd->add_option("--depth", a.depth, "word depth for enumeration/sampling");
    cmd->add_option("--dilation", a.dilation, "limit-mark dilation in cell diagonals");
    cmd->add_option("--tau", a.tau, "verdict tolerance");
    cmd->add_option("--samples", a.samples, "sample count for stochastic estimates");
    cmd->add_option("--seed", a.seed, "RNG seed")->each([&](const std::string&) {
        a.seed_set = true;
    });
    cmd->add_option("--out", a.out, "output base path (extensions appended)");
}

std::shared_ptr<const GroupSpec> load_group(const CommonArgs& a) {
    if (a.config.empty()) throw std::invalid_argument("--config is required");
    return load_group_file(a.config);
}

struct ChartBundle {
    std::shared_ptr<const SphereRaster> raster;
    std::vector<SpherePoint> samples;
    ComponentChart chart;
};

ChartBundle build_chart(const GroupSpec& g, const CommonArgs& a) {
    ChartBundle b;
    b.raster = build_raster(a.res);
    b.samples = sample_limit_set(g, a.depth);
    b.chart = label_components(
        b.raster, mark_limit_cells(*b.raster, b.samples, a.dilation * b.raster->cell_diag));
    return b;
}

Vec3 parse_vec3(const std::string& s) {
    Vec3 v;
    if (std::sscanf(s.c_str(), "%lf,%lf,%lf", &v.x, &v.y, &v.z) != 3)
        throw std::invalid_argument("expected three comma-separated numbers: " + s);
    return v;
}

int cmd_limitset(const CommonArgs& a, const std::string& view) {
    auto group = load_group(a);
    std::vector<SpherePoint> samples;
    if (a.depth <= 0) {
        std::fprintf(stderr, "warning: depth %d produces no limit samples\n", a.depth);
    } else {
        samples = sample_limit_set(*group, a.depth);
    }
    write_text_file(a.out + ".csv", points_csv(samples));
    write_ppm(a.out + ".ppm", render_points(samples, 512, parse_vec3(view)));
    std::printf("%zu limit samples -> %s.csv, %s.ppm\n", samples.size(), a.out.c_str(),
                a.out.c_str());
    return kExitOk;
}

int cmd_components(const CommonArgs& a) {
    auto group = load_group(a);
    ChartBundle b = build_chart(*group, a);
    write_text_file(a.out + ".json", chart_report_json(b.chart));
    write_ppm(a.out + ".ppm", render_chart(b.chart));
    std::printf("%zu components (marked area %s) -> %s.json, %s.ppm\n",
                b.chart.components.size(), fmt_g9(b.chart.marked_area).c_str(),
                a.out.c_str(), a.out.c_str());
    return kExitOk;
}

int cmd_hmeasure(const CommonArgs& a, const std::string& point, const std::string& selector,
                 const std::string& method) {
    BallPoint y(parse_vec3(point));  // throws std::domain_error outside the ball
    bool stochastic = method != "kernel";
    if (stochastic && !a.seed_set)
        throw std::invalid_argument("--seed is required for the ray estimator");

    // resolve the region and its membership predicate
    auto raster = build_raster(a.res);
    CellRegion region;
    std::function<bool(const SpherePoint&)> member;
    ChartBundle bundle;
    if (selector == "all") {
        region = region_all(*raster);
        member = [](const SpherePoint&) { return true; };
    } else if (selector.rfind("cap:", 0) == 0) {
        std::string spec = selector.substr(4);
        Cap cap;
        if (std::sscanf(spec.c_str(), "%lf,%lf,%lf,%lf", &cap.center.x, &cap.center.y,
                        &cap.center.z, &cap.theta) != 4)
            throw std::invalid_argument("cap selector needs cx,cy,cz,theta");
        cap.center = cap.center.normalized();
        region = region_cap(*raster, cap);
        member = [cap](const SpherePoint& p) { return cap.contains(p); };
    } else if (selector.rfind("component:", 0) == 0) {
        int id = std::stoi(selector.substr(10));
        auto group = load_group(a);
        bundle = build_chart(*group, a);
        raster = bundle.raster;
        if (id < 0 || id >= (int)bundle.chart.components.size())
            throw std::invalid_argument("no such component: " + std::to_string(id));
        region = bundle.chart.component_region(id);
        const ComponentChart& chart = bundle.chart;
        member = [&chart, id](const SpherePoint& p) { return chart.label_of(p) == id; };
    } else {
        throw std::invalid_argument("selector must be all, cap:..., or component:<id>");
    }

    auto print = [](const char* tag, const HarmonicEstimate& e) {
        std::printf("%s value=%s error=%s count=%zu\n", tag, fmt_g9(e.value).c_str(),
                    fmt_g9(e.error).c_str(), e.count);
    };
    if (method == "kernel" || method == "both") {
        print("kernel", measure_kernel(y, region, *raster));
    }
    if (method == "rays" || method == "both") {
        print("rays", measure_rays(y, member, a.samples, a.seed));
    }
    if (method == "both") {
        HarmonicEstimate k = measure_kernel(y, region, *raster);
        HarmonicEstimate r = measure_rays(y, member, a.samples, a.seed);
        double diff = std::abs(k.value - r.value);
        std::printf("difference=%s combined_error=%s %s\n", fmt_g9(diff).c_str(),
                    fmt_g9(k.error + r.error).c_str(),
                    diff <= k.error + r.error ? "consistent" : "DISAGREE");
    }
    return kExitOk;
}

int cmd_slice(const CommonArgs& a, const std::string& plane_spec, double window, int pixels) {
    auto group = load_group(a);
    ChartBundle b = build_chart(*group, a);

    SlicePlane plane;
    if (!plane_spec.empty()) {
        double v[9];
        if (std::sscanf(plane_spec.c_str(), "%lf,%lf,%lf;%lf,%lf,%lf;%lf,%lf,%lf", &v[0],
                        &v[1], &v[2], &v[3], &v[4], &v[5], &v[6], &v[7], &v[8]) != 9)
            throw std::invalid_argument("plane spec: bx,by,bz;ux,uy,uz;vx,vy,vz");
        plane.base = {v[0], v[1], v[2]};
        plane.u = Vec3{v[3], v[4], v[5]}.normalized();
        plane.v = Vec3{v[6], v[7], v[8]}.normalized();
    }
    if (plane.base.norm() >= 1.0)
        throw std::invalid_argument("plane basepoint must lie inside the ball");

    HullQuery q;
    q.chart = &b.chart;
    q.tau = a.tau;
    q.seed = a.seed_set ? a.seed : 1;
    ConvexHullSamples hull = ConvexHullSamples::build(b.samples);
    SliceResult slice = slice_classify(plane, window, pixels, q, hull);
    write_ppm(a.out + ".ppm", render_slice(slice));
    write_text_file(a.out + ".csv", slice_csv(slice));

    size_t nv = 0, nc = 0, nu = 0;
    for (SliceState s : slice.states) {
        nv += s == SliceState::V;
        nc += s == SliceState::C_only;
        nu += s == SliceState::uncertain;
    }
    std::printf("slice %dx%d: V=%zu C_only=%zu uncertain=%zu -> %s.ppm, %s.csv\n", pixels,
                pixels, nv, nc, nu, a.out.c_str(), a.out.c_str());
    return kExitOk;
}

int cmd_verify(const CommonArgs& a, const std::string& suite, bool res_is_set) {
    if (!a.seed_set) throw std::invalid_argument("--seed is required for verify");
    if (suite != "all" && suite != "cores" && suite != "emptiness" && suite != "embedding" &&
        suite != "combination")
        throw std::invalid_argument("unknown suite: " + suite);
    SuiteOptions opt;
    opt.seed = a.seed;
    opt.res_override = res_is_set ? a.res : 0;
    std::vector<SuiteResult> results = run_verify(suite, opt);
    for (const auto& r : results)
        for (const auto& c : r.checks)
            std::printf("[%s] %s/%s%s%s\n",
                        c.status == SuiteCheck::Status::pass          ? "PASS"
                        : c.status == SuiteCheck::Status::fail        ? "FAIL"
                                                                      : "INCONCLUSIVE",
                        r.suite.c_str(), c.name.c_str(), c.detail.empty() ? "" : ": ",
                        c.detail.c_str());
    std::string report = verify_report_json(results, opt);
    if (!a.out.empty() && a.out != "out") write_text_file(a.out, report);
    int code = verify_exit_code(results);
    std::printf("verify %s: exit %d\n", suite.c_str(), code);
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"visual cores of Kleinian groups"};
    app.require_subcommand(1);

    CommonArgs a;
    std::string view = "0,0,1";
    std::string point = "0,0,0";
    std::string selector = "all";
    std::string method = "kernel";
    std::string plane_spec;
    std::string suite = "all";
    std::string dump_dir = "fixtures";
    double window = 0.95;
    int pixels = 101;

    CLI::App* limitset = app.add_subcommand("limitset", "sample and render a limit set");
    add_common(limitset, a);
    limitset->add_option("--view", view, "orthographic view direction x,y,z");

    CLI::App* components = app.add_subcommand("components", "domain-of-discontinuity chart");
    add_common(components, a);

    CLI::App* hmeasure = app.add_subcommand("hmeasure", "visual measure of a region");
    add_common(hmeasure, a);
    hmeasure->add_option("--point", point, "ball-model evaluation point x,y,z");
    hmeasure->add_option("--selector", selector, "all | cap:cx,cy,cz,theta | component:<id>");
    hmeasure->add_option("--method", method, "kernel | rays | both");

    CLI::App* slice = app.add_subcommand("slice", "classify a planar slice of the ball");
    add_common(slice, a);
    slice->add_option("--plane", plane_spec, "bx,by,bz;ux,uy,uz;vx,vy,vz");
    slice->add_option("--window", window, "half-width of the slice window");
    slice->add_option("--pixels", pixels, "slice resolution in pixels");

    CLI::App* verify = app.add_subcommand("verify", "run verification suites on fixtures");
    add_common(verify, a);
    verify->add_option("suite", suite, "cores | emptiness | embedding | combination | all");

    CLI::App* dump = app.add_subcommand("dump-fixtures", "write the shipped fixture files");
    dump->add_option("dir", dump_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (limitset->parsed()) return cmd_limitset(a, view);
        if (components->parsed()) return cmd_components(a);
        if (hmeasure->parsed()) return cmd_hmeasure(a, point, selector, method);
        if (slice->parsed()) return cmd_slice(a, plane_spec, window, pixels);
        if (verify->parsed()) return cmd_verify(a, suite, verify->count("--res") > 0);
        if (dump->parsed()) {
            write_fixture_files(dump_dir);
            std::printf("fixture files written to %s\n", dump_dir.c_str());
            return kExitOk;
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::range_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const BudgetExceeded& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const CertificateDenied& e) {
        std::fprintf(stderr, "certificate denied: %s\n", e.what());
        return kExitViolation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "inconclusive: %s\n", e.what());
        return kExitInconclusive;
    }
    return kExitUsage;
}
