#ifndef HJNET_IO_HPP
#define HJNET_IO_HPP

#include <string>
#include <vector>

#include "hjnet/scheme.hpp"
#include "hjnet/traffic.hpp"

namespace hjnet {

// CSV with one row per arc sample: arc_id,s,x_pos,y_pos,value. Formatting is
// fixed so identical runs produce byte-identical files.
std::string snapshot_csv(const GridFunction& v);
std::string density_csv(const DensityField& rho, const Grid& grid);
std::string node_density_csv(const DensityField& rho, const Network& net);
std::string witness_csv(const std::vector<UpdateWitness>& wits, const Grid& grid);

// Heat-map of a per-sample scalar as colored polyline segments.
std::string heatmap_svg(const Grid& grid, const std::vector<std::vector<double>>& per_arc_values,
                        double vmin, double vmax);

void write_file(const std::string& path, const std::string& content);

} // namespace hjnet

#endif
