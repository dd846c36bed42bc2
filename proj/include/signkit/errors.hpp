#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace signkit {

// Base class for all recoverable failures. `code` is a stable machine-readable
// identifier; the CLI maps it onto the JSON error channel.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

struct DegenerateConfiguration : Error {
  explicit DegenerateConfiguration(const std::string& m)
      : Error("degenerate_configuration", m) {}
};

struct PointAtInfinity : Error {
  explicit PointAtInfinity(const std::string& m) : Error("point_at_infinity", m) {}
};

struct DegenerateBaseline : Error {
  explicit DegenerateBaseline(const std::string& m) : Error("degenerate_baseline", m) {}
};

struct NoFiniteSolution : Error {
  explicit NoFiniteSolution(const std::string& m) : Error("no_finite_solution", m) {}
};

struct NoTemplate : Error {
  explicit NoTemplate(const std::string& m) : Error("no_template", m) {}
};

struct InvalidSpec : Error {
  explicit InvalidSpec(const std::string& m) : Error("invalid_spec", m) {}
};

struct MisalignedGrid : Error {
  explicit MisalignedGrid(const std::string& m) : Error("misaligned_grid", m) {}
};

struct InconsistentShapes : Error {
  explicit InconsistentShapes(const std::string& m) : Error("inconsistent_shapes", m) {}
};

struct OutOfPatch : Error {
  explicit OutOfPatch(const std::string& m) : Error("out_of_patch", m) {}
};

struct BehindCamera : Error {
  explicit BehindCamera(const std::string& m) : Error("behind_camera", m) {}
};

struct NoLargeSign : Error {
  explicit NoLargeSign(const std::string& m) : Error("no_large_sign", m) {}
};

struct RegenerationExhausted : Error {
  explicit RegenerationExhausted(const std::string& m)
      : Error("regeneration_exhausted", m) {}
};

struct InvalidWindow : Error {
  explicit InvalidWindow(const std::string& m) : Error("invalid_window", m) {}
};

struct PlacementExhausted : Error {
  explicit PlacementExhausted(const std::string& m)
      : Error("placement_exhausted", m) {}
};

struct DataError : Error {
  explicit DataError(const std::string& m) : Error("data_error", m) {}
};

struct IoError : Error {
  explicit IoError(const std::string& m) : Error("io_error", m) {}
};

}  // namespace signkit
