#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sddtm/extraction.hpp"
#include "sddtm/grid.hpp"

namespace sddtm {

/// Base terrain surface of a synthetic scene.
struct BaseSurface {
    enum class Kind { kConstant, kRamp, kSinusoid };
    Kind kind = Kind::kConstant;
    double z = 0.0;          // constant level
    double zx = 0.0;         // ramp slope per cell along columns
    double zy = 0.0;         // ramp slope per cell along rows
    double amplitude = 0.0;  // sinusoid
    double period = 0.0;     // sinusoid period in cells
};

struct BoxFeature {
    int r0 = 0, c0 = 0;  // top-left cell
    int h = 0, w = 0;    // extent in cells
    double height = 0.0;
};

struct SpikeFeature {
    int r = 0, c = 0;
    double height = 0.0;
};

/// Declarative synthetic scene: a base terrain plus raised non-terrain
/// features and optional seeded Gaussian sensor noise on the DSM.
struct SceneSpec {
    int rows = 0;
    int cols = 0;
    double cell_size = 1.0;
    BaseSurface base;
    std::vector<BoxFeature> boxes;
    std::vector<SpikeFeature> spikes;
    double noise_sigma = 0.0;  // meters
    std::uint64_t seed = 0;
};

struct SceneData {
    Grid dsm;
    Grid truth_dtm;
    TerrainMap truth_mask;  // 0 exactly on feature footprints, 1 elsewhere
};

/// Builds the scene. The truth DTM is the base surface; the DSM adds feature
/// heights and noise drawn from mt19937_64(seed) through a Box-Muller
/// transform, one draw per cell in row-major order, so identical specs give
/// bit-identical output. Throws FeatureOutOfBounds for footprints leaving the
/// grid.
SceneData generate(const SceneSpec& spec);

/// Parses the line-oriented scene file format:
///   rows N / cols N / cell_size S (optional)
///   base constant Z | base ramp ZX ZY | base sinusoid AMP PERIOD
///   box R0 C0 H W HEIGHT   (repeatable)
///   spike R C HEIGHT       (repeatable)
///   noise_sigma S / seed N
/// '#' starts a comment. Throws SpecParseError on malformed lines.
SceneSpec parse_scene_spec(std::istream& in);

SceneSpec parse_scene_spec_file(const std::string& path);

}  // namespace sddtm
