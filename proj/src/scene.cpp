#include "hmlam/scene.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "hmlam/error.hpp"
#include "json.hpp"

namespace hmlam {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError("scene field '" + path + "': " + what);
}

const Json& require(const Json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void expect_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(join(path, key), "unknown field");
  }
}

double finite_number(const Json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "number is not finite");
  return x;
}

std::string string_value(const Json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

std::int64_t integer_value(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<std::int64_t>();
}

Word word_value(const Json& v, const std::string& path, std::span<const std::string> names) {
  const std::string text = string_value(v, path);
  try {
    return parse_word(text, names);
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
}

// Rejects duplicate keys anywhere in the document; nlohmann would silently
// keep the last one.
Json parse_strict(const std::string& text) {
  std::vector<std::set<std::string>> open;
  const Json::parser_callback_t cb = [&open](int, Json::parse_event_t event, Json& parsed) {
    switch (event) {
      case Json::parse_event_t::object_start:
        open.emplace_back();
        break;
      case Json::parse_event_t::object_end:
        open.pop_back();
        break;
      case Json::parse_event_t::key: {
        const std::string key = parsed.get<std::string>();
        if (!open.back().insert(key).second) throw ValidationError("scene: duplicate key '" + key + "'");
        break;
      }
      default:
        break;
    }
    return true;
  };
  try {
    return Json::parse(text, cb);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("scene is not valid JSON: ") + e.what());
  }
}

struct GroupData {
  std::vector<std::string> names;
  std::vector<Isometry> generators;
  std::vector<std::array<double, 4>> entries;
};

GroupData parse_group(const Json& g) {
  if (!g.is_object() || g.empty()) fail("group", "expected a nonempty object of generator matrices");
  GroupData out;
  for (const auto& [name, value] : g.items()) {
    const std::string path = "group." + name;
    if (name.empty() || name == "1" || name.find_first_of(" \t\n^") != std::string::npos) {
      fail(path, "invalid generator name");
    }
    if (!value.is_array() || value.size() != 2 || !value[0].is_array() || !value[1].is_array() ||
        value[0].size() != 2 || value[1].size() != 2) {
      fail(path, "expected a 2x2 matrix [[a,b],[c,d]]");
    }
    std::array<double, 4> e{};
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 2; ++c)
        e[2 * r + c] = finite_number(value[r][c], index_path(index_path(path, r), c));
    try {
      out.generators.emplace_back(e[0], e[1], e[2], e[3]);
    } catch (const ValidationError& err) {
      fail(path, err.what());
    }
    out.names.push_back(name);
    out.entries.push_back(e);
  }
  return out;
}

std::vector<Word> parse_substitution(const Json& obj, const std::string& path, std::span<const std::string> names) {
  if (!obj.is_object()) fail(path, "expected an object mapping generators to words");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(names.begin(), names.end(), key) == names.end()) fail(join(path, key), "unknown generator");
  }
  std::vector<Word> out;
  for (const std::string& n : names) out.push_back(word_value(require(obj, n, path), join(path, n), names));
  return out;
}

FreeAutomorphism parse_automorphism(const Json& a, std::span<const std::string> names) {
  if (!a.is_object()) fail("automorphism", "expected an object with forward and inverse");
  expect_keys(a, "automorphism", {"forward", "inverse"});
  const auto fwd = parse_substitution(require(a, "forward", "automorphism"), "automorphism.forward", names);
  const auto inv = parse_substitution(require(a, "inverse", "automorphism"), "automorphism.inverse", names);
  FreeAutomorphism phi(fwd, inv);
  const AutomorphismReport rep = verify_automorphism(phi);
  if (!rep.ok) {
    const int g = !rep.failing_inverse_after_forward.empty() ? rep.failing_inverse_after_forward.front()
                                                             : rep.failing_forward_after_inverse.front();
    throw ValidationError("automorphism round trip fails at generator " + names[static_cast<std::size_t>(g)]);
  }
  return phi;
}

std::vector<JunctureSpec> parse_junctures(const Json& arr, const FuchsianGroup& group, const Tolerance& tol) {
  if (!arr.is_array()) fail("junctures", "expected an array");
  std::vector<JunctureSpec> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = index_path("junctures", i);
    const Json& j = arr[i];
    if (!j.is_object()) fail(path, "expected an object");
    expect_keys(j, path, {"end", "sign", "word", "period"});
    JunctureSpec spec;
    spec.end = string_value(require(j, "end", path), path + ".end");
    const std::string sign = string_value(require(j, "sign", path), path + ".sign");
    if (sign == "-") {
      spec.sign = Sign::negative;
    } else if (sign == "+") {
      spec.sign = Sign::positive;
    } else {
      fail(path + ".sign", "expected \"-\" or \"+\"");
    }
    spec.word = word_value(require(j, "word", path), path + ".word", group.names());
    if (spec.word.empty()) fail(path + ".word", "juncture word must be nonempty");
    const auto period = j.contains("period") ? integer_value(j["period"], path + ".period") : 1;
    if (period < 1 || period > 1'000'000) fail(path + ".period", "period must be a positive integer");
    spec.period = static_cast<int>(period);
    if (classify_isometry(evaluate_word(group, spec.word), tol) != IsometryClass::hyperbolic) {
      throw ValidationError("juncture " + std::to_string(i) + " word '" + spec.word.to_string(group.names()) +
                            "' is not hyperbolic");
    }
    out.push_back(std::move(spec));
  }
  return out;
}

MarkovBlock parse_markov(const Json& m) {
  if (!m.is_object()) fail("markov", "expected an object");
  expect_keys(m, "markov", {"rects", "crossings", "counts"});
  const Json& rects = require(m, "rects", "markov");
  if (!rects.is_array()) fail("markov.rects", "expected an array");
  MarkovBlock block;
  for (std::size_t i = 0; i < rects.size(); ++i) {
    const std::string path = index_path("markov.rects", i);
    const Json& r = rects[i];
    Rect4Gon rect;
    if (r.is_string()) {
      rect.id = r.get<std::string>();
    } else if (r.is_object()) {
      expect_keys(r, path, {"id", "degeneracy", "anchor"});
      rect.id = string_value(require(r, "id", path), path + ".id");
      if (r.contains("degeneracy")) {
        try {
          rect.degeneracy = parse_degeneracy(string_value(r["degeneracy"], path + ".degeneracy"));
        } catch (const ValidationError& e) {
          fail(path + ".degeneracy", e.what());
        }
      }
      if (r.contains("anchor")) {
        const Json& a = r["anchor"];
        if (!a.is_array() || a.size() != 4) fail(path + ".anchor", "expected four [x,y] disk points");
        std::array<std::complex<double>, 4> corners{};
        for (std::size_t k = 0; k < 4; ++k) {
          const std::string cp = index_path(path + ".anchor", k);
          if (!a[k].is_array() || a[k].size() != 2) fail(cp, "expected [x,y]");
          corners[k] = {finite_number(a[k][0], cp + "[0]"), finite_number(a[k][1], cp + "[1]")};
          if (std::abs(corners[k]) > 1.0) fail(cp, "anchor point lies outside the closed unit disk");
        }
        rect.anchor = corners;
      }
    } else {
      fail(path, "expected an id string or an object");
    }
    if (rect.id.empty()) fail(path, "empty 4-gon id");
    block.rects.push_back(std::move(rect));
  }
  const std::size_t n = block.rects.size();
  block.table = CrossingTable(n);
  const bool has_cross = m.contains("crossings");
  const bool has_counts = m.contains("counts");
  if (has_cross == has_counts) fail("markov", "exactly one of 'crossings' or 'counts' is required");
  if (has_cross) {
    const Json& cr = m["crossings"];
    if (!cr.is_array()) fail("markov.crossings", "expected an array of [i,j,count] triples");
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    for (std::size_t k = 0; k < cr.size(); ++k) {
      const std::string path = index_path("markov.crossings", k);
      const Json& t = cr[k];
      if (!t.is_array() || (t.size() != 3 && t.size() != 4)) fail(path, "expected [i,j,count] or [i,j,count,tag]");
      const auto i = integer_value(t[0], path + "[0]");
      const auto j = integer_value(t[1], path + "[1]");
      const auto c = integer_value(t[2], path + "[2]");
      if (i < 1 || j < 1 || static_cast<std::size_t>(i) > n || static_cast<std::size_t>(j) > n) {
        fail(path, "index out of range 1.." + std::to_string(n));
      }
      if (c < 0) fail(path + "[2]", "negative crossing count");
      if (!seen.insert({i, j}).second) fail(path, "duplicate entry for this pair");
      const auto ui = static_cast<std::size_t>(i - 1);
      const auto uj = static_cast<std::size_t>(j - 1);
      block.table.counts(ui, uj) = c;
      if (t.size() == 4) block.table.orientation[ui * n + uj] = string_value(t[3], path + "[3]");
    }
  } else {
    const Json& grid = m["counts"];
    if (!grid.is_array() || grid.size() != n) fail("markov.counts", "expected an " + std::to_string(n) + "x" +
                                                                     std::to_string(n) + " integer grid");
    for (std::size_t i = 0; i < n; ++i) {
      const std::string rp = index_path("markov.counts", i);
      if (!grid[i].is_array() || grid[i].size() != n) fail(rp, "expected a row of " + std::to_string(n));
      for (std::size_t j = 0; j < n; ++j) {
        const auto c = integer_value(grid[i][j], index_path(rp, j));
        if (c < 0) fail(index_path(rp, j), "negative crossing count");
        block.table.counts(i, j) = c;
      }
    }
  }
  std::set<std::string> ids;
  for (const Rect4Gon& r : block.rects) {
    if (!ids.insert(r.id).second) fail("markov.rects", "duplicate 4-gon id '" + r.id + "'");
  }
  return block;
}

}  // namespace

Scene parse_scene(const std::string& text, const Tolerance& tol) {
  const Json doc = parse_strict(text);
  if (!doc.is_object()) throw ValidationError("scene must be a JSON object");
  expect_keys(doc, "", {"name", "description", "group", "automorphism", "junctures", "markov"});
  Scene scene;
  if (doc.contains("name")) scene.name = string_value(doc["name"], "name");
  if (doc.contains("description")) scene.description = string_value(doc["description"], "description");
  if (!doc.contains("group") && !doc.contains("markov")) {
    throw ValidationError("scene needs a 'group' or a 'markov' block");
  }
  if (doc.contains("group")) {
    GroupData gd = parse_group(doc["group"]);
    FuchsianGroup group(gd.names, gd.generators, tol);
    FreeAutomorphism phi = doc.contains("automorphism") ? parse_automorphism(doc["automorphism"], gd.names)
                                                        : FreeAutomorphism::identity(group.rank());
    std::vector<JunctureSpec> junctures;
    if (doc.contains("junctures")) junctures = parse_junctures(doc["junctures"], group, tol);
    scene.map = SurfaceMap{std::move(group), std::move(phi), std::move(junctures)};
    scene.generator_entries = std::move(gd.entries);
  } else {
    if (doc.contains("automorphism")) fail("automorphism", "requires a 'group' block");
    if (doc.contains("junctures")) fail("junctures", "requires a 'group' block");
  }
  if (doc.contains("markov")) scene.markov = parse_markov(doc["markov"]);
  return scene;
}

Scene load_scene(const std::filesystem::path& path, const Tolerance& tol) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open scene file '" + path.string() + "': file not found or unreadable");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scene(buf.str(), tol);
}

std::string serialize_scene(const Scene& scene) {
  Json doc = Json::object();
  if (!scene.name.empty()) doc["name"] = scene.name;
  if (!scene.description.empty()) doc["description"] = scene.description;
  if (scene.map) {
    const SurfaceMap& map = *scene.map;
    const auto& names = map.group.names();
    Json group = Json::object();
    for (std::size_t i = 0; i < names.size(); ++i) {
      std::array<double, 4> e = map.group.generators()[i].entries();
      if (scene.generator_entries.size() == names.size()) e = scene.generator_entries[i];
      group[names[i]] = Json::array({Json::array({e[0], e[1]}), Json::array({e[2], e[3]})});
    }
    doc["group"] = std::move(group);
    Json fwd = Json::object();
    Json inv = Json::object();
    for (std::size_t i = 0; i < names.size(); ++i) {
      fwd[names[i]] = map.phi.forward()[i].to_string(names);
      inv[names[i]] = map.phi.inverse()[i].to_string(names);
    }
    doc["automorphism"] = Json{{"forward", std::move(fwd)}, {"inverse", std::move(inv)}};
    Json js = Json::array();
    for (const JunctureSpec& j : map.junctures) {
      js.push_back(Json{{"end", j.end}, {"sign", to_string(j.sign)}, {"word", j.word.to_string(names)},
                        {"period", j.period}});
    }
    doc["junctures"] = std::move(js);
  }
  if (scene.markov) {
    const MarkovBlock& mb = *scene.markov;
    Json rects = Json::array();
    for (const Rect4Gon& r : mb.rects) {
      Json o{{"id", r.id}, {"degeneracy", to_string(r.degeneracy)}};
      if (r.anchor) {
        Json a = Json::array();
        for (const auto& p : *r.anchor) a.push_back(Json::array({p.real(), p.imag()}));
        o["anchor"] = std::move(a);
      }
      rects.push_back(std::move(o));
    }
    Json cross = Json::array();
    const std::size_t n = mb.table.n;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const auto c = mb.table.counts(i, j);
        const std::string& tag = mb.table.orientation[i * n + j];
        if (c == 0 && tag.empty()) continue;
        Json t = Json::array({i + 1, j + 1, c});
        if (!tag.empty()) t.push_back(tag);
        cross.push_back(std::move(t));
      }
    }
    doc["markov"] = Json{{"rects", std::move(rects)}, {"crossings", std::move(cross)}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace hmlam
