#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hmlam/lamination.hpp"
#include "hmlam/markov.hpp"

namespace hmlam {

struct MarkovBlock {
  std::vector<Rect4Gon> rects;
  CrossingTable table;
};

// A loaded scene. Either part may be absent: markov-only scenes carry no
// group, geometric scenes need no Markov block.
struct Scene {
  std::string name;
  std::string description;
  std::optional<SurfaceMap> map;
  // Generator matrices exactly as written in the file (row-major), kept so
  // that serialization reproduces the input rather than the normalized form.
  std::vector<std::array<double, 4>> generator_entries;
  std::optional<MarkovBlock> markov;
};

// Parses and validates scene JSON. Throws ValidationError naming the
// offending field path (e.g. "automorphism.inverse"), the non-hyperbolic
// generator, or the generator where the automorphism round trip fails.
Scene parse_scene(const std::string& text, const Tolerance& tol = {});

// Reads a scene file; a missing or unreadable file is a ValidationError.
Scene load_scene(const std::filesystem::path& path, const Tolerance& tol = {});

// Inverse of parse_scene on the validated fields. Numbers are written with
// round-trip precision.
std::string serialize_scene(const Scene& scene);

}  // namespace hmlam
