#pragma once

#include <string>

#include "signkit/refine.hpp"

namespace signkit {

// Binary PGM (P5, maxval 255) fixture I/O for gray patches.
GrayPatch read_pgm(const std::string& path);
void write_pgm(const std::string& path, const GrayPatch& patch);

}  // namespace signkit
