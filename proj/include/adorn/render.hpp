#pragma once

// SVG frames and CSV trajectory logs.

#include <string>
#include <vector>

#include "adorn/scene.hpp"
#include "adorn/unfold.hpp"

namespace adorn {

struct RenderOptions {
  double width = 640;  // pixels; height follows the drawing's aspect ratio
  double margin = 16;
};

/// One frame with every scene vertex at `positions`. Adornments and pieces are filled, chain bases bold,
/// extra linkage bars thin.
std::string render_svg(const Scene& s, const std::vector<Point2>& positions, const RenderOptions& opts = {});
/// Throws GeometryError when the file cannot be written.
void render(const Scene& s, const std::string& path, const RenderOptions& opts = {});

/// Writes frame_NNNN.svg for every trajectory frame plus trajectory.csv ("t,vertex,x,y") into dir.
/// All frames share one viewport. Returns the frame paths.
std::vector<std::string> render_trajectory(const Scene& s, const Trajectory& t, const std::string& dir,
                                           const RenderOptions& opts = {});
void write_trajectory_csv(const Trajectory& t, const std::string& path);

}  // namespace adorn
