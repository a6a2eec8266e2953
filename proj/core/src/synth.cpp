#include "sddtm/synth.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "sddtm/errors.hpp"

namespace sddtm {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Gaussian draws from mt19937_64 through the Box-Muller transform (cosine
// branch, one draw per call) so fixtures reproduce bit-identically from the
// seed alone.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : gen_(seed) {}

    double next(double sigma) {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();        // [0, 1)
        return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

private:
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 gen_;
};

double base_height(const BaseSurface& base, int r, int c) {
    switch (base.kind) {
        case BaseSurface::Kind::kConstant:
            return base.z;
        case BaseSurface::Kind::kRamp:
            return base.zx * c + base.zy * r;
        case BaseSurface::Kind::kSinusoid:
            return base.amplitude * std::sin(kTwoPi * c / base.period) *
                   std::sin(kTwoPi * r / base.period);
    }
    return 0.0;
}

}  // namespace

SceneData generate(const SceneSpec& spec) {
    if (spec.rows < 1 || spec.cols < 1)
        throw SpecParseError("scene needs rows >= 1 and cols >= 1");
    if (spec.noise_sigma < 0.0) throw SpecParseError("noise_sigma must be non-negative");
    if (spec.base.kind == BaseSurface::Kind::kSinusoid && !(spec.base.period > 0.0))
        throw SpecParseError("sinusoid base needs a positive period");

    for (const BoxFeature& b : spec.boxes) {
        if (b.h < 1 || b.w < 1 || b.r0 < 0 || b.c0 < 0 || b.r0 + b.h > spec.rows ||
            b.c0 + b.w > spec.cols)
            throw FeatureOutOfBounds("box [" + std::to_string(b.r0) + "," + std::to_string(b.c0) +
                                     " " + std::to_string(b.h) + "x" + std::to_string(b.w) +
                                     "] leaves the " + std::to_string(spec.rows) + "x" +
                                     std::to_string(spec.cols) + " grid");
    }
    for (const SpikeFeature& s : spec.spikes) {
        if (s.r < 0 || s.c < 0 || s.r >= spec.rows || s.c >= spec.cols)
            throw FeatureOutOfBounds("spike (" + std::to_string(s.r) + "," + std::to_string(s.c) +
                                     ") leaves the grid");
    }

    SceneData out;
    Grid& truth = out.truth_dtm;
    truth.rows = spec.rows;
    truth.cols = spec.cols;
    truth.cell_size = spec.cell_size;
    truth.values.resize(static_cast<std::size_t>(spec.rows) * spec.cols);
    for (int r = 0; r < spec.rows; ++r)
        for (int c = 0; c < spec.cols; ++c) truth.at(r, c) = base_height(spec.base, r, c);

    out.dsm = truth;
    out.truth_mask.assign(truth.values.size(), 1.0);

    for (const BoxFeature& b : spec.boxes) {
        for (int r = b.r0; r < b.r0 + b.h; ++r) {
            for (int c = b.c0; c < b.c0 + b.w; ++c) {
                out.dsm.at(r, c) += b.height;
                out.truth_mask[static_cast<std::size_t>(r) * spec.cols + c] = 0.0;
            }
        }
    }
    for (const SpikeFeature& s : spec.spikes) {
        out.dsm.at(s.r, s.c) += s.height;
        out.truth_mask[static_cast<std::size_t>(s.r) * spec.cols + s.c] = 0.0;
    }

    if (spec.noise_sigma > 0.0) {
        GaussianSource noise(spec.seed);
        for (double& v : out.dsm.values) v += noise.next(spec.noise_sigma);
    }
    return out;
}

SceneSpec parse_scene_spec(std::istream& in) {
    SceneSpec spec;
    std::set<std::string> seen;
    bool has_rows = false, has_cols = false;

    auto scalar_once = [&](const std::string& key) {
        if (!seen.insert(key).second) throw SpecParseError("duplicate key '" + key + "'");
    };

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;  // blank line

        auto fail = [&](const std::string& what) {
            throw SpecParseError("line " + std::to_string(line_no) + ": " + what);
        };
        auto read_double = [&](double& v) {
            if (!(ls >> v)) fail("expected a number after '" + key + "'");
        };
        auto read_int = [&](int& v) {
            if (!(ls >> v)) fail("expected an integer after '" + key + "'");
        };

        if (key == "rows") {
            scalar_once(key);
            read_int(spec.rows);
            has_rows = true;
        } else if (key == "cols") {
            scalar_once(key);
            read_int(spec.cols);
            has_cols = true;
        } else if (key == "cell_size") {
            scalar_once(key);
            read_double(spec.cell_size);
            if (!(spec.cell_size > 0.0)) fail("cell_size must be positive");
        } else if (key == "base") {
            scalar_once(key);
            std::string kind;
            if (!(ls >> kind)) fail("base needs a kind (constant|ramp|sinusoid)");
            if (kind == "constant") {
                spec.base.kind = BaseSurface::Kind::kConstant;
                read_double(spec.base.z);
            } else if (kind == "ramp") {
                spec.base.kind = BaseSurface::Kind::kRamp;
                read_double(spec.base.zx);
                read_double(spec.base.zy);
            } else if (kind == "sinusoid") {
                spec.base.kind = BaseSurface::Kind::kSinusoid;
                read_double(spec.base.amplitude);
                read_double(spec.base.period);
            } else {
                fail("unknown base kind '" + kind + "'");
            }
        } else if (key == "box") {
            BoxFeature b;
            read_int(b.r0);
            read_int(b.c0);
            read_int(b.h);
            read_int(b.w);
            read_double(b.height);
            spec.boxes.push_back(b);
        } else if (key == "spike") {
            SpikeFeature s;
            read_int(s.r);
            read_int(s.c);
            read_double(s.height);
            spec.spikes.push_back(s);
        } else if (key == "noise_sigma") {
            scalar_once(key);
            read_double(spec.noise_sigma);
            if (spec.noise_sigma < 0.0) fail("noise_sigma must be non-negative");
        } else if (key == "seed") {
            scalar_once(key);
            unsigned long long s = 0;
            if (!(ls >> s)) fail("expected an integer after 'seed'");
            spec.seed = s;
        } else {
            fail("unknown key '" + key + "'");
        }

        std::string extra;
        if (ls >> extra) fail("trailing token '" + extra + "'");
    }

    if (!has_rows || !has_cols) throw SpecParseError("scene spec needs 'rows' and 'cols'");
    return spec;
}

SceneSpec parse_scene_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open '" + path + "' for reading");
    return parse_scene_spec(in);
}

}  // namespace sddtm
