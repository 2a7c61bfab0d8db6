#pragma once

#include <cstdint>
#include <string>

#include "viscore/cores.hpp"
#include "viscore/fixtures.hpp"
#include "viscore/group.hpp"

namespace viscore {

// Group configuration files (JSON).  Matrices are normalized on load and
// rejected if |det| strays more than 1e-6 from 1 beforehand.  A free_product
// file references its two summand files and carries the combination caps; the
// certificate is re-derived on load unless the file opts out.
std::shared_ptr<const GroupSpec> load_group_file(const std::string& path);

// canonical shipped fixture set, one file per group plus summand pieces
void write_fixture_files(const std::string& dir);

struct Image {
    int width = 0, height = 0;
    std::vector<uint8_t> rgb;  // 3 bytes per pixel, row-major
};

void write_ppm(const std::string& path, const Image& img);  // binary P6

Image render_chart(const ComponentChart& chart);  // 3x2 face grid, marked = black
Image render_slice(const SliceResult& slice);
Image render_points(const std::vector<SpherePoint>& points, int size, const Vec3& view);

std::string chart_report_json(const ComponentChart& chart);
std::string points_csv(const std::vector<SpherePoint>& points);
std::string slice_csv(const SliceResult& slice);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace viscore
