#include "viscore/io.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>

namespace viscore {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

MoebiusMap matrix_from_json(const ordered_json& j) {
    if (!j.is_array() || j.size() != 4)
        throw std::invalid_argument("group file: matrix must be four [re, im] pairs");
    Complex e[4];
    for (int i = 0; i < 4; ++i) {
        if (!j[i].is_array() || j[i].size() != 2)
            throw std::invalid_argument("group file: matrix entry must be [re, im]");
        e[i] = Complex(j[i][0].get<double>(), j[i][1].get<double>());
    }
    Complex det = e[0] * e[3] - e[1] * e[2];
    if (std::abs(std::abs(det) - 1.0) > 1e-6)
        throw std::invalid_argument("group file: |det| deviates from 1 by more than 1e-6");
    return MoebiusMap::make(e[0], e[1], e[2], e[3]);
}

ordered_json matrix_to_json(const MoebiusMap& m) {
    auto pair = [](Complex z) { return ordered_json::array({z.real(), z.imag()}); };
    return ordered_json::array({pair(m.a), pair(m.b), pair(m.c), pair(m.d)});
}

Cap cap_from_json(const ordered_json& j) {
    if (!j.is_array() || j.size() != 4)
        throw std::invalid_argument("group file: cap must be [cx, cy, cz, theta]");
    Cap c;
    c.center = Vec3{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()}.normalized();
    c.theta = j[3].get<double>();
    return c;
}

ordered_json cap_to_json(const Cap& c) {
    return ordered_json::array({c.center.x, c.center.y, c.center.z, c.theta});
}

std::shared_ptr<const GroupSpec> load_group_json(const fs::path& path);

std::shared_ptr<const GroupSpec> load_raw(const ordered_json& j) {
    std::vector<Generator> gens;
    for (const auto& g : j.at("generators"))
        gens.push_back({g.at("label").get<std::string>(), matrix_from_json(g.at("matrix"))});
    return std::make_shared<GroupSpec>(
        GroupSpec::raw(j.at("name").get<std::string>(), std::move(gens)));
}

std::shared_ptr<const GroupSpec> load_group_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open group file: " + path.string());
    ordered_json j = ordered_json::parse(in);

    const auto& con = j.at("construction");
    if (con.is_string() && con.get<std::string>() == "raw") return load_raw(j);

    if (con.is_object() && con.contains("free_product")) {
        const auto& files = con.at("free_product");
        if (!files.is_array() || files.size() != 2)
            throw std::invalid_argument("group file: free_product needs two summand files");
        fs::path dir = path.parent_path();
        auto left = load_group_json(dir / files[0].get<std::string>());
        auto right = load_group_json(dir / files[1].get<std::string>());
        std::string name = j.at("name").get<std::string>();

        if (con.value("skip_certificate", false)) {
            return std::make_shared<GroupSpec>(
                GroupSpec::free_product(name, std::move(left), std::move(right)));
        }
        const auto& caps = con.at("caps");
        if (!caps.is_array() || caps.size() != 2)
            throw std::invalid_argument("group file: free_product needs two caps");
        int depth = con.value("cert_depth", 4);
        CombineResult c = klein_combine_free(std::move(left), std::move(right),
                                             cap_from_json(caps[0]), cap_from_json(caps[1]),
                                             depth, name);
        return c.group;
    }
    throw std::invalid_argument("group file: unknown construction");
}

void write_raw_file(const fs::path& path, const GroupSpec& g) {
    ordered_json j;
    j["name"] = g.name;
    j["generators"] = ordered_json::array();
    for (const auto& gen : g.generators) {
        ordered_json e;
        e["label"] = gen.label;
        e["matrix"] = matrix_to_json(gen.map);
        j["generators"].push_back(e);
    }
    j["construction"] = "raw";
    write_text_file(path.string(), j.dump(2) + "\n");
}

void write_free_product_file(const fs::path& path, const std::string& name,
                             const std::string& left_file, const std::string& right_file,
                             const Cap& b1, const Cap& b2, int depth, bool skip_cert) {
    ordered_json j;
    j["name"] = name;
    j["generators"] = ordered_json::array();
    ordered_json con;
    con["free_product"] = ordered_json::array({left_file, right_file});
    if (skip_cert) {
        con["skip_certificate"] = true;
    } else {
        con["caps"] = ordered_json::array({cap_to_json(b1), cap_to_json(b2)});
        con["cert_depth"] = depth;
    }
    j["construction"] = std::move(con);
    write_text_file(path.string(), j.dump(2) + "\n");
}

}  // namespace

std::shared_ptr<const GroupSpec> load_group_file(const std::string& path) {
    return load_group_json(fs::path(path));
}

void write_fixture_files(const std::string& dir) {
    fs::path d(dir);
    fs::create_directories(d);
    write_raw_file(d / "octagon.json", *fixtures::octagon_group());
    write_raw_file(d / "schottky_a.json", *fixtures::schottky_piece_a());
    write_raw_file(d / "schottky_b.json", *fixtures::schottky_piece_b());
    write_raw_file(d / "cyclic_north.json", *fixtures::cyclic_north());
    write_raw_file(d / "cyclic_straddling.json", *fixtures::cyclic_straddling());
    write_free_product_file(d / "schottky.json", "schottky", "schottky_a.json",
                            "schottky_b.json", fixtures::schottky_cap_a(),
                            fixtures::schottky_cap_b(), 4, false);
    write_free_product_file(d / "freecomb.json", "freecomb", "octagon.json",
                            "cyclic_north.json", fixtures::freecomb_cap_octagon(),
                            fixtures::freecomb_cap_cyclic(), 4, false);
    write_free_product_file(d / "freecomb_corrupt.json", "freecomb_corrupt", "octagon.json",
                            "cyclic_straddling.json", Cap{}, Cap{}, 0, true);
}

// ---------------------------------------------------------------------------
// images

void write_ppm(const std::string& path, const Image& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.rgb.data()), (std::streamsize)img.rgb.size());
}

namespace {

std::array<uint8_t, 3> label_color(int label) {
    // deterministic distinct-ish palette
    uint64_t h = splitmix64((uint64_t)label * 0x9e3779b97f4a7c15ull + 17);
    uint8_t r = (uint8_t)(64 + (h & 0x7F));
    uint8_t g = (uint8_t)(64 + ((h >> 8) & 0x7F));
    uint8_t b = (uint8_t)(64 + ((h >> 16) & 0x7F));
    return {r, g, b};
}

}  // namespace

Image render_chart(const ComponentChart& chart) {
    const SphereRaster& r = *chart.raster;
    int n = r.n;
    Image img;
    img.width = 3 * n;
    img.height = 2 * n;
    img.rgb.assign((size_t)img.width * img.height * 3, 255);
    // faces +X +Y +Z on the top row, -X -Y -Z below
    const int order[6] = {0, 2, 4, 1, 3, 5};
    for (int slot = 0; slot < 6; ++slot) {
        int f = order[slot];
        int ox = (slot % 3) * n, oy = (slot / 3) * n;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                size_t cell = ((size_t)f * n + i) * n + j;
                std::array<uint8_t, 3> col{0, 0, 0};
                if (!chart.marked[cell]) col = label_color(chart.label[cell]);
                int px = ox + i, py = oy + (n - 1 - j);
                size_t at = ((size_t)py * img.width + px) * 3;
                img.rgb[at] = col[0];
                img.rgb[at + 1] = col[1];
                img.rgb[at + 2] = col[2];
            }
        }
    }
    return img;
}

Image render_slice(const SliceResult& slice) {
    Image img;
    img.width = slice.res;
    img.height = slice.res;
    img.rgb.assign((size_t)slice.res * slice.res * 3, 255);
    for (int j = 0; j < slice.res; ++j) {
        for (int i = 0; i < slice.res; ++i) {
            std::array<uint8_t, 3> col{255, 255, 255};
            switch (slice.states[(size_t)j * slice.res + i]) {
                case SliceState::V: col = {60, 90, 230}; break;
                case SliceState::C_only: col = {70, 200, 90}; break;
                case SliceState::outside: col = {255, 255, 255}; break;
                case SliceState::uncertain: col = {160, 160, 160}; break;
            }
            size_t at = (((size_t)(slice.res - 1 - j)) * slice.res + i) * 3;
            img.rgb[at] = col[0];
            img.rgb[at + 1] = col[1];
            img.rgb[at + 2] = col[2];
        }
    }
    return img;
}

Image render_points(const std::vector<SpherePoint>& points, int size, const Vec3& view) {
    Image img;
    img.width = size;
    img.height = size;
    img.rgb.assign((size_t)size * size * 3, 255);
    Vec3 w = view.normalized();
    Vec3 any = std::abs(w.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
    Vec3 u = w.cross(any).normalized();
    Vec3 v = w.cross(u);
    for (const SpherePoint& p : points) {
        if (p.unit.dot(w) < 0) continue;  // back hemisphere
        double x = p.unit.dot(u), y = p.unit.dot(v);
        int px = (int)((x + 1.0) * 0.5 * (size - 1));
        int py = (int)((1.0 - (y + 1.0) * 0.5) * (size - 1));
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                int qx = px + dx, qy = py + dy;
                if (qx < 0 || qy < 0 || qx >= size || qy >= size) continue;
                size_t at = ((size_t)qy * size + qx) * 3;
                img.rgb[at] = img.rgb[at + 1] = img.rgb[at + 2] = 0;
            }
    }
    return img;
}

// ---------------------------------------------------------------------------
// reports

std::string chart_report_json(const ComponentChart& chart) {
    ordered_json j;
    j["resolution"] = chart.raster->n;
    j["marked_area"] = chart.marked_area;
    j["component_count"] = chart.components.size();
    j["components"] = ordered_json::array();
    for (const auto& c : chart.components) {
        ordered_json e;
        e["id"] = c.id;
        e["area"] = c.area;
        e["cells"] = c.cells.size();
        e["boundary_cells"] = c.boundary_cells.size();
        e["jordan"] = c.jordan == JordanFlag::yes ? "yes"
                     : c.jordan == JordanFlag::no ? "no"
                                                  : "uncertain";
        e["euler_characteristic"] = c.euler_characteristic;
        j["components"].push_back(e);
    }
    return j.dump(2) + "\n";
}

std::string points_csv(const std::vector<SpherePoint>& points) {
    std::string out = "x,y,z\n";
    for (const SpherePoint& p : points) {
        out += fmt_g9(p.unit.x);
        out += ',';
        out += fmt_g9(p.unit.y);
        out += ',';
        out += fmt_g9(p.unit.z);
        out += '\n';
    }
    return out;
}

std::string slice_csv(const SliceResult& slice) {
    static const char* kNames[4] = {"V", "C_only", "outside", "uncertain"};
    std::string out = "x,y,z,state,visual_margin,convex_margin\n";
    for (size_t i = 0; i < slice.states.size(); ++i) {
        const Vec3& p = slice.points[i];
        out += fmt_g9(p.x);
        out += ',';
        out += fmt_g9(p.y);
        out += ',';
        out += fmt_g9(p.z);
        out += ',';
        out += kNames[(int)slice.states[i]];
        out += ',';
        out += fmt_g9(slice.visual_margin[i]);
        out += ',';
        out += fmt_g9(slice.convex_margin[i]);
        out += '\n';
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

}  // namespace viscore
