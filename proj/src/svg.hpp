#pragma once

#include <string>

#include "chart.hpp"
#include "pipeline.hpp"

namespace asvnav::svg {

// Layered plot of one frame in chart coordinates, north up. Layers with
// nothing to draw are omitted; the ownship marker rides with the plan.
std::string render_frame(const chart::Chart& chart, const Snapshot& snap);

}  // namespace asvnav::svg
