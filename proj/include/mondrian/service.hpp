#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mondrian/cluster.hpp"
#include "mondrian/config.hpp"
#include "mondrian/error.hpp"
#include "mondrian/fingerprint.hpp"
#include "mondrian/grid.hpp"
#include "mondrian/json_io.hpp"
#include "mondrian/layout.hpp"
#include "mondrian/split.hpp"
#include "mondrian/templates.hpp"

namespace mondrian {

struct Response {
  int status = 200;
  json body;
};

inline Response error_response(int status, const std::string& code, const std::string& message) {
  return {status, {{"code", code}, {"message", message}}};
}

/// Maps library errors onto HTTP statuses.
inline Response error_response(const Error& e) {
  int status = 400;
  switch (e.code()) {
    case ErrorCode::NotFound: status = 404; break;
    case ErrorCode::VersionConflict: status = 409; break;
    case ErrorCode::InvalidRegion:
    case ErrorCode::EmptyFile:
    case ErrorCode::IllegalOverlap:
    case ErrorCode::EmptyLayout: status = 422; break;
    case ErrorCode::Io: status = 500; break;
    default: status = 400;
  }
  return error_response(status, to_string(e.code()), e.what());
}

/// In-memory state behind the HTTP API: uploaded grids and their current,
/// user-editable region rectangles. Region edits use optimistic concurrency
/// through a per-file version counter.
class Workspace {
 public:
  explicit Workspace(Config config = {}) : config_(std::move(config)) {}

  Response upload(const std::string& name, const std::string& content) {
    TypedGrid grid;
    try {
      grid = parse_csv(content, config_.dialect, name);
    } catch (const Error& e) {
      return error_response(e);
    }
    std::lock_guard lock(mutex_);
    std::string id = "f" + std::to_string(++counter_);
    if (grid.file_id.empty()) grid.file_id = id;
    auto state = std::make_shared<FileState>();
    state->grid = std::make_shared<const TypedGrid>(std::move(grid));
    files_.emplace(id, state);
    return {200,
            {{"id", id},
             {"name", state->grid->file_id},
             {"rows", state->grid->rows()},
             {"cols", state->grid->cols()}}};
  }

  Response grid(const std::string& id) const {
    auto state = find(id);
    if (!state) return not_found(id);
    json j = grid_to_json(*state->grid);
    j["id"] = id;
    return {200, std::move(j)};
  }

  /// Runs detection with the workspace defaults overridden by `params`.
  Response detect(const std::string& id, const json& params) {
    auto state = find(id);
    if (!state) return not_found(id);
    Config cfg = config_;
    try {
      if (params.is_object() && !params.empty()) apply_json(cfg, params);
    } catch (const Error& e) {
      return error_response(422, to_string(e.code()), e.what());
    }
    auto regions = detect_file(*state->grid, cfg.cluster);
    std::lock_guard lock(state->mutex);
    state->rects = boundaries(regions);
    ++state->version;
    json j = detection_to_json(*state->grid, regions, cfg.cluster, false);
    j["id"] = id;
    j["version"] = state->version;
    return {200, std::move(j)};
  }

  Response regions(const std::string& id) const {
    auto state = find(id);
    if (!state) return not_found(id);
    std::lock_guard lock(state->mutex);
    return {200, regions_body(id, *state)};
  }

  /// Replaces the rectangles of a file. A stale version is a conflict unless
  /// the submitted rectangles already equal the current ones.
  Response put_regions(const std::string& id, const json& body) {
    auto state = find(id);
    if (!state) return not_found(id);
    std::vector<Rect> rects;
    std::uint64_t version = 0;
    try {
      if (!body.is_object() || !body.contains("version") || !body.contains("regions")) {
        return error_response(422, "invalid_region", "body needs version and regions");
      }
      version = body.at("version").get<std::uint64_t>();
      rects = rects_from_json(body.at("regions"));
      for (const auto& r : rects) check_within(*state->grid, r);
    } catch (const Error& e) {
      return error_response(422, to_string(e.code()), e.what());
    } catch (const json::exception& e) {
      return error_response(422, "invalid_region", e.what());
    }
    std::lock_guard lock(state->mutex);
    if (rects == state->rects) return {200, regions_body(id, *state)};
    if (version != state->version) {
      return error_response(409, "version_conflict",
                            "regions changed since version " + std::to_string(version) +
                                "; current is " + std::to_string(state->version));
    }
    state->rects = std::move(rects);
    ++state->version;
    return {200, regions_body(id, *state)};
  }

  /// Returns one CSV document per current region.
  Response split(const std::string& id) const {
    auto state = find(id);
    if (!state) return not_found(id);
    std::lock_guard lock(state->mutex);
    std::string stem = std::filesystem::path(state->grid->file_id).stem().string();
    json files = json::array();
    try {
      for (std::size_t k = 0; k < state->rects.size(); ++k) {
        files.push_back({{"name", stem + "_r" + std::to_string(k) + ".csv"},
                         {"region", k},
                         {"content", region_csv(*state->grid, state->rects[k], config_.dialect)}});
      }
    } catch (const Error& e) {
      return error_response(422, to_string(e.code()), e.what());
    }
    return {200, {{"id", id}, {"version", state->version}, {"files", files}}};
  }

  Response templates() const {
    std::lock_guard lock(mutex_);
    if (!templates_) return {200, to_json(TemplateSet{config_.thresholds.tau_f, {}})};
    return {200, to_json(*templates_)};
  }

  /// Template inference over every uploaded file using its current regions.
  Response infer(const json& params) {
    Config cfg = config_;
    try {
      if (params.is_object() && !params.empty()) apply_json(cfg, params);
    } catch (const Error& e) {
      return error_response(422, to_string(e.code()), e.what());
    }
    std::vector<FileLayout> layouts;
    {
      std::lock_guard lock(mutex_);
      for (const auto& [id, state] : files_) {
        std::lock_guard file_lock(state->mutex);
        layouts.push_back({id, layout_of(*state->grid, state->rects)});
      }
    }
    TemplateSet ts = infer_templates(layouts, cfg.thresholds, cfg.flood);
    std::lock_guard lock(mutex_);
    templates_ = ts;
    return {200, to_json(ts)};
  }

  const Config& config() const noexcept { return config_; }

 private:
  struct FileState {
    std::shared_ptr<const TypedGrid> grid;
    std::vector<Rect> rects;
    std::uint64_t version = 0;
    mutable std::mutex mutex;
  };

  static LayoutGraph layout_of(const TypedGrid& grid, const std::vector<Rect>& rects) {
    if (rects.empty()) return {};
    std::vector<Fingerprint> fps;
    for (const auto& r : rects) fps.push_back(fingerprint(grid, r));
    return build_layout(rects, std::move(fps));
  }

  static json regions_body(const std::string& id, const FileState& s) {
    json regs = json::array();
    for (std::size_t k = 0; k < s.rects.size(); ++k) {
      json r = to_json(s.rects[k]);
      r["id"] = k;
      regs.push_back(std::move(r));
    }
    return {{"id", id}, {"version", s.version}, {"regions", regs}};
  }

  static Response not_found(const std::string& id) {
    return error_response(404, "not_found", "unknown file id: " + id);
  }

  std::shared_ptr<FileState> find(const std::string& id) const {
    std::lock_guard lock(mutex_);
    auto it = files_.find(id);
    return it == files_.end() ? nullptr : it->second;
  }

  Config config_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<FileState>> files_;
  std::optional<TemplateSet> templates_;
  std::uint64_t counter_ = 0;
};

}  // namespace mondrian
