#include "gazedyn/kernels.hpp"

#include "gazedyn/features.hpp"
#include "gazedyn/parallel.hpp"

namespace gazedyn::kernels {

std::vector<GlanceFeatureVector> extract_serial(const Scanpath& scanpath,
                                                std::span<const FrameSpan> windows,
                                                const FeatureConfig& config) {
  std::vector<GlanceFeatureVector> out;
  out.reserve(windows.size());
  for (const FrameSpan& w : windows) out.push_back(features::assemble_features(scanpath, w, config));
  return out;
}

std::vector<GlanceFeatureVector> extract_parallel(const Scanpath& scanpath,
                                                  std::span<const FrameSpan> windows,
                                                  const FeatureConfig& config) {
  std::vector<GlanceFeatureVector> out(windows.size());
  parallel_for(windows.size(), [&](std::size_t i) {
    out[i] = features::assemble_features(scanpath, windows[i], config);
  });
  return out;
}

}  // namespace gazedyn::kernels
