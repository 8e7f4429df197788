// imagefield.hpp -- mapping between grayscale images and grid fields, the
// thresholding post-process, and connected-component counting.
#pragma once

#include "grid.hpp"
#include "pgm.hpp"

namespace pfrss {

enum class FieldRange { symmetric, unit };  // [-1,1] or [0,1]

// affine map of the pixel range onto the target range; a constant image maps
// to the midpoint
GridField image_to_field(const RasterImage& image, FieldRange target);

// clamps to [-1,1] and quantizes linearly to 0..255
RasterImage field_to_image(const GridField& field);

// pointwise dominant-phase cut: value >= 0 -> 1, else 0
GridField threshold(const GridField& field);

// number of 4-connected components of the nonzero set (2D fields)
int count_components(const GridField& binary);

}  // namespace pfrss
