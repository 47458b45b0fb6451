#pragma once

// Named scenes reconstructed from the constructions discussed in the literature on adorned chains.

#include <string>
#include <vector>

#include "adorn/scene.hpp"

namespace adorn {

enum class Expected { unfolds, certified_rigid, conjectured_locked, counterexample };
std::string to_string(Expected e);

struct GalleryEntry {
  std::string name;
  Scene scene;
  Expected expected = Expected::unfolds;
};

std::vector<std::string> gallery_names();
/// Names may carry an apex angle in degrees for the isosceles families, e.g. "locked-9-simplified@75".
/// Throws GeometryError listing the available names when the name is unknown.
GalleryEntry gallery(const std::string& name);

/// Simplified nine-triangle linkage: collocated vertices joined by one-sided wedges, apex angle in degrees.
SelfTouchingLinkage nine_simplified_linkage(double apex_deg);
/// The same linkage with extra collocated vertices that Rules 1 and 2 remove; rule chain included.
Scene nine_tight(double apex_deg);
SelfTouchingLinkage seven_simplified_linkage();
/// Convex arm of the seven-triangle argument: the chain A, P, Q, B.
std::vector<Point2> seven_cauchy_arm();

}  // namespace adorn
