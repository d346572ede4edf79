#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mondrian/cluster.hpp"
#include "mondrian/error.hpp"
#include "mondrian/fingerprint.hpp"
#include "mondrian/grid.hpp"
#include "mondrian/layout.hpp"
#include "mondrian/segment.hpp"
#include "mondrian/templates.hpp"

namespace mondrian {

using json = nlohmann::json;

/// Serializes with invalid UTF-8 replaced, so raw cell bytes never abort output.
inline std::string dump(const json& j, int indent = 2) {
  return j.dump(indent, ' ', false, json::error_handler_t::replace);
}

inline json to_json(const Rect& r) {
  return {{"x0", r.x0}, {"y0", r.y0}, {"x1", r.x1}, {"y1", r.y1}};
}

inline Rect rect_from_json(const json& j) {
  try {
    Rect r{j.at("x0").get<int>(), j.at("y0").get<int>(), j.at("x1").get<int>(),
           j.at("y1").get<int>()};
    if (!r.valid() || r.x0 < 0 || r.y0 < 0) {
      throw Error(ErrorCode::InvalidRegion, "rectangle needs 0 <= x0 <= x1 and 0 <= y0 <= y1");
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidRegion, std::string("malformed rectangle: ") + e.what());
  }
}

inline json to_json(const Element& e) {
  json j = to_json(e.box);
  j["component_id"] = e.component_id;
  return j;
}

inline json elements_to_json(const std::vector<Element>& elements) {
  json arr = json::array();
  for (const auto& e : elements) arr.push_back(to_json(e));
  return arr;
}

inline json to_json(const Fingerprint& fp) {
  return json(std::vector<double>(fp.bins.begin(), fp.bins.end()));
}

inline Fingerprint fingerprint_from_json(const json& j) {
  if (!j.is_array() || j.size() != kFingerprintBins) {
    throw Error(ErrorCode::InvalidArgument, "fingerprint must hold 192 numbers");
  }
  Fingerprint fp;
  for (std::size_t i = 0; i < kFingerprintBins; ++i) fp.bins[i] = j[i].get<double>();
  return fp;
}

inline json to_json(const Region& r, bool with_fingerprint) {
  json j = to_json(r.boundary);
  j["id"] = r.id;
  json elems = json::array();
  for (const auto& e : r.elements) elems.push_back(to_json(e.box));
  j["elements"] = std::move(elems);
  if (with_fingerprint) j["fingerprint"] = to_json(r.fingerprint);
  return j;
}

inline json to_json(const SpatialRelation& rel) {
  return {{"direction", to_string(rel.direction)},
          {"magnitude", rel.magnitude},
          {"distance", rel.distance}};
}

inline json to_json(const LayoutGraph& g) {
  json nodes = json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    json n = to_json(g.boundaries[i]);
    n["region"] = g.region_ids[i];
    nodes.push_back(std::move(n));
  }
  json edges = json::array();
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      json e = to_json(g.edges[i][j]);
      e["i"] = i;
      e["j"] = j;
      edges.push_back(std::move(e));
    }
  return {{"nodes", nodes}, {"edges", edges}};
}

inline json to_json(const ClusterParams& p) {
  return {{"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma}, {"radius", p.epsilon}};
}

/// Result document of region detection for one file.
inline json detection_to_json(const TypedGrid& grid, const std::vector<Region>& regions,
                              const ClusterParams& p, bool with_fingerprints) {
  json regs = json::array();
  for (const auto& r : regions) regs.push_back(to_json(r, with_fingerprints));
  return {{"file", grid.file_id}, {"sheet", grid.sheet_id}, {"rows", grid.rows()},
          {"cols", grid.cols()},  {"params", to_json(p)},   {"regions", regs}};
}

/// Region rectangles of a detection document or a bare array of rectangles.
inline std::vector<Rect> rects_from_json(const json& j) {
  const json& arr = j.is_object() ? j.at("regions") : j;
  if (!arr.is_array()) throw Error(ErrorCode::InvalidRegion, "regions must be an array");
  std::vector<Rect> out;
  for (const auto& r : arr) out.push_back(rect_from_json(r));
  return out;
}

inline json to_json(const PairSimilarity& s) {
  json pairs = json::array();
  for (const auto& [a, b] : s.region_pairs) pairs.push_back({a, b});
  return {{"a", s.a}, {"b", s.b}, {"similarity", s.score}, {"regions", pairs}};
}

inline json to_json(const TemplateSet& ts) {
  json arr = json::array();
  for (const auto& t : ts.templates) {
    json matches = json::array();
    for (const auto& m : t.region_matches) matches.push_back(to_json(m));
    arr.push_back({{"id", t.id}, {"files", t.files}, {"region_matches", matches}});
  }
  return {{"tau_f", ts.tau_f}, {"templates", arr}};
}

inline json grid_to_json(const TypedGrid& grid) {
  json types = json::array();
  json values = json::array();
  for (int y = 0; y < grid.rows(); ++y) {
    json trow = json::array();
    json vrow = json::array();
    for (int x = 0; x < grid.cols(); ++x) {
      trow.push_back(to_string(grid.type_at(x, y)));
      vrow.push_back(grid.value_at(x, y));
    }
    types.push_back(std::move(trow));
    values.push_back(std::move(vrow));
  }
  json palette = json::object();
  for (SyntacticType t : kAllTypes) {
    ColorRGB c = color_of(t);
    palette[to_string(t)] = {c.r, c.g, c.b};
  }
  return {{"file", grid.file_id}, {"rows", grid.rows()}, {"cols", grid.cols()},
          {"types", types},       {"values", values},    {"palette", palette}};
}

/// Gold regions (and optionally the gold template) of one file.
struct Annotation {
  std::string file;
  std::string sheet;
  std::vector<Rect> regions;
  std::vector<std::string> labels;  // parallel to regions; "" when absent
  std::optional<std::string> template_id;
};

inline Annotation annotation_from_json(const json& j) {
  Annotation a;
  try {
    a.file = j.at("file").get<std::string>();
    a.sheet = j.value("sheet", std::filesystem::path(a.file).stem().string());
    for (const auto& r : j.at("regions")) {
      a.regions.push_back(rect_from_json(r));
      a.labels.push_back(r.value("label", std::string{}));
    }
    if (j.contains("template") && !j["template"].is_null()) {
      const json& t = j["template"];
      a.template_id = t.is_string() ? t.get<std::string>() : t.dump();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed annotation: ") + e.what());
  }
  return a;
}

/// Reads a JSON array of annotations, or JSON lines with one annotation each.
inline std::vector<Annotation> load_annotations(const std::filesystem::path& path) {
  std::string text = read_file(path);
  std::vector<Annotation> out;
  try {
    json j = json::parse(text);
    if (j.is_array()) {
      for (const auto& a : j) out.push_back(annotation_from_json(a));
    } else {
      out.push_back(annotation_from_json(j));
    }
    return out;
  } catch (const json::parse_error&) {
  }
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (detail::trim(line).empty()) continue;
    try {
      out.push_back(annotation_from_json(json::parse(line)));
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::InvalidArgument, path.string() + ": " + e.what());
    }
  }
  return out;
}

/// Append-only persistence of a region index and its sidecars: the cache of
/// pairwise layout similarities (<path>.pairs.jsonl) and the stored layouts
/// of indexed files (<path>.layouts.jsonl).
class IndexStore {
 public:
  explicit IndexStore(std::filesystem::path path) : path_(std::move(path)) {}

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path pairs_path() const { return sidecar(".pairs.jsonl"); }
  std::filesystem::path layouts_path() const { return sidecar(".layouts.jsonl"); }

  void load(RegionIndex& index, PairCache& cache, std::vector<FileLayout>& layouts) const {
    for_each_line(path_, [&](const json& j) {
      std::optional<Fingerprint> fp;
      if (j.contains("fingerprint")) fp = fingerprint_from_json(j["fingerprint"]);
      for (const auto& f : j.at("files")) index.replay(j.at("entry").get<std::size_t>(), fp, f);
    });
    for_each_line(pairs_path(), [&](const json& j) {
      PairSimilarity s;
      s.a = j.at("a").get<std::string>();
      s.b = j.at("b").get<std::string>();
      s.score = j.at("similarity").get<double>();
      for (const auto& p : j.value("regions", json::array()))
        s.region_pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
      cache[ordered_pair(s.a, s.b)] = s;
    });
    for_each_line(layouts_path(), [&](const json& j) {
      std::vector<Rect> boxes;
      std::vector<Fingerprint> fps;
      std::vector<int> ids;
      for (const auto& r : j.at("regions")) {
        boxes.push_back(rect_from_json(r));
        fps.push_back(fingerprint_from_json(r.at("fingerprint")));
        ids.push_back(r.value("id", static_cast<int>(ids.size())));
      }
      std::string file = j.at("file").get<std::string>();
      if (boxes.empty()) {
        layouts.push_back({file, {}});
      } else {
        layouts.push_back({file, build_layout(std::move(boxes), std::move(fps), std::move(ids))});
      }
    });
  }

  void append_index(const RegionIndex& index, const std::vector<RegionIndex::Event>& events) const {
    std::ofstream out = open_append(path_);
    for (const auto& e : events) {
      json j = {{"entry", e.entry}, {"files", json::array({e.file})}};
      if (e.created) j["fingerprint"] = to_json(index.entries()[e.entry].fingerprint);
      out << j.dump() << '\n';
    }
  }

  void append_pairs(const std::vector<PairSimilarity>& pairs) const {
    std::ofstream out = open_append(pairs_path());
    for (const auto& p : pairs) out << to_json(p).dump() << '\n';
  }

  void append_layout(const std::string& file, const LayoutGraph& g) const {
    std::ofstream out = open_append(layouts_path());
    json regions = json::array();
    for (std::size_t i = 0; i < g.size(); ++i) {
      json r = to_json(g.boundaries[i]);
      r["id"] = g.region_ids[i];
      r["fingerprint"] = to_json(g.fingerprints[i]);
      regions.push_back(std::move(r));
    }
    out << dump(json{{"file", file}, {"regions", regions}}, -1) << '\n';
  }

 private:
  std::filesystem::path sidecar(const char* suffix) const {
    return std::filesystem::path(path_.string() + suffix);
  }

  static std::ofstream open_append(const std::filesystem::path& p) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::app);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + p.string());
    return out;
  }

  template <class Fn>
  static void for_each_line(const std::filesystem::path& p, Fn&& fn) {
    if (!std::filesystem::exists(p)) return;
    std::ifstream in(p);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
      ++number;
      if (detail::trim(line).empty()) continue;
      try {
        fn(json::parse(line));
      } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument,
                    p.string() + ":" + std::to_string(number) + ": " + e.what());
      }
    }
  }

  std::filesystem::path path_;
};

}  // namespace mondrian
