#include "signkit/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "signkit/errors.hpp"

namespace signkit {

namespace {

// Skips whitespace and '#' comment lines between header tokens.
int read_header_int(std::istream& in) {
  while (true) {
    const int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  int value = 0;
  if (!(in >> value)) throw DataError("malformed PGM header");
  return value;
}

}  // namespace

GrayPatch read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string magic(2, '\0');
  in.read(magic.data(), 2);
  if (magic != "P5") throw DataError(path + ": expected binary PGM (P5)");
  const int width = read_header_int(in);
  const int height = read_header_int(in);
  const int maxval = read_header_int(in);
  if (maxval != 255) throw DataError(path + ": expected maxval 255");
  in.get();  // single whitespace after maxval

  GrayPatch patch;
  patch.width = width;
  patch.height = height;
  patch.intensity.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  std::vector<unsigned char> raw(patch.intensity.size());
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw DataError(path + ": truncated pixel data");
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    patch.intensity[i] = raw[i] / 255.0;
  }
  return patch;
}

void write_pgm(const std::string& path, const GrayPatch& patch) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "P5\n" << patch.width << " " << patch.height << "\n255\n";
  std::vector<unsigned char> raw(patch.intensity.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double v = std::clamp(patch.intensity[i], 0.0, 1.0);
    raw[i] = static_cast<unsigned char>(std::lround(v * 255.0));
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
}

}  // namespace signkit
