#pragma once

#include <cstdint>
#include <string>

#include "curvebound/bands.hpp"
#include "curvebound/classify.hpp"
#include "curvebound/curve.hpp"

namespace curvebound {

// A curve file couples the sample data with the space it claims to live in.
struct CurveFile {
    CurveSamples curve;
    SpaceSpec space;
};

// Strict JSON parsing: unknown fields are rejected, speeds must be positive,
// curvatures must lie strictly inside the open bounds, q0 (optional,
// row-major) must be a rotation.  Infinite bounds are the strings
// "-inf" / "+inf".
CurveFile parse_curve_file(const std::string& text);
std::string emit_curve_file(const CurveFile& file);

// Plot streams: LF line endings, 17-significant-digit reals.
std::string curve_csv(const FramedCurve& fc);              // t,x,y,z,v,kappa
std::string band_csv(const BandGrid& band);                // t,theta,x,y,z

std::string classification_json(const ClassificationResult& result);

// FNV-1a hash of a byte string, as fixed-width hex (for output manifests).
std::string content_hash(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace curvebound
