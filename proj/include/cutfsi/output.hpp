#pragma once

#include <string>
#include <vector>

#include "cutfsi/timeloop.hpp"

namespace cutfsi {

/// Fixed CSV column order.
inline constexpr const char* kCsvHeader = "t,dt,hx,hy,vx,vy,theta,omega,Fx,Fy,T,newton_iters,n_cut";

/// Header plus one row per record, 17 significant digits, LF endings.
void write_csv(const std::vector<SimRecord>& records, const std::string& path);
std::vector<SimRecord> read_csv(const std::string& path);

/// Line-oriented field dump of the active nodes:
///   # cutfsi fields t=<t>
///   nodes <N>
///   <id> <x> <y> <|u|> <u_x> <u_y> <p>      (N lines)
///   triangles <M>
///   <a> <b> <c> <tag>                       (M lines, node ids as above)
/// Vertices carry their pressure; edge nodes carry the interpolated one.
/// Nodes inside the solid carry the extended rigid velocity.
void write_fields(const Simulation& sim, const std::string& path);

/// Run metadata as "key = value" lines.
void write_metadata(const Simulation& sim, const std::string& path);

}  // namespace cutfsi
