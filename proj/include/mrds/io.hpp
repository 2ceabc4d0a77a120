#pragma once

#include <json.hpp>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mrds/basin.hpp"
#include "mrds/bifurcation.hpp"
#include "mrds/certify.hpp"
#include "mrds/gdms.hpp"
#include "mrds/grid.hpp"
#include "mrds/minimal.hpp"
#include "mrds/orbit.hpp"

namespace mrds {

using json = nlohmann::json;

// System descriptions use 1-based vertex indices.
Gdms parse_system(const json& j);
Gdms load_system(const std::string& path);
json system_to_json(const Gdms& g);

json map_to_json(const RationalMap& f);
RationalMap map_from_json(const json& j);
json point_to_json(const SpherePoint& p);
SpherePoint point_from_json(const json& j);

json validation_report(const Gdms& g);

json boxes_to_json(const BoxSet& s);
BoxSet boxes_from_json(const json& j);
json certificate_to_json(const StabilityCertificate& c);
StabilityCertificate certificate_from_json(const json& j);
json cover_to_json(const MinimalSetCover& c);
json classification_to_json(const Classification& c);
json verdict_to_json(const Verdict& v);
json lyapunov_to_json(const LyapunovEstimate& e);
json bif_report_to_json(const BifReport& r);
json chaotic_to_json(const ChaoticReport& r);

/// Binary PGM (P5).
void write_pgm(const std::string& path, int width, int height, const std::vector<std::uint8_t>& pixels);
/// One layer (vertex, chart) of a mask as 0/255 pixels, row 0 at the top.
std::vector<std::uint8_t> mask_layer(const GridMask& m, int v, Chart c);
std::vector<std::uint8_t> field_layer(const GridField& f, int v, Chart c);
json mask_to_rle(const GridMask& m);
GridMask mask_from_rle(const json& j);

void write_cloud_csv(std::ostream& os, const std::vector<std::pair<SpherePoint, int>>& cloud);
void write_basin_csv(std::ostream& os, const BasinEstimate& b);

}  // namespace mrds
