#pragma once

#include <span>
#include <vector>

#include "gazedyn/types.hpp"

// Batch descriptor extraction over many windows of one scanpath. The serial
// version is the reference; the OpenMP version must match it exactly.
namespace gazedyn::kernels {

std::vector<GlanceFeatureVector> extract_serial(const Scanpath& scanpath,
                                                std::span<const FrameSpan> windows,
                                                const FeatureConfig& config);

std::vector<GlanceFeatureVector> extract_parallel(const Scanpath& scanpath,
                                                  std::span<const FrameSpan> windows,
                                                  const FeatureConfig& config);

}  // namespace gazedyn::kernels
