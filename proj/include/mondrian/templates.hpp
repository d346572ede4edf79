#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mondrian/cluster.hpp"
#include "mondrian/error.hpp"
#include "mondrian/fingerprint.hpp"
#include "mondrian/layout.hpp"
#include "mondrian/metrics.hpp"

namespace mondrian {

struct Thresholds {
  double tau_r = 0.75;  // region similarity
  double tau_f = 0.99;  // layout similarity
};

/// Node-count bound below which candidate pairs are never flooded.
inline constexpr double kPruneBound = 0.7;

/// Detected layout of one file.
struct FileLayout {
  std::string id;
  LayoutGraph graph;
};

using FilePair = std::pair<std::string, std::string>;

inline FilePair ordered_pair(const std::string& a, const std::string& b) {
  return a < b ? FilePair{a, b} : FilePair{b, a};
}

/// Global index of distinct region fingerprints and the files they occur in.
/// A file's regions are compared against every indexed fingerprint; each hit
/// at or above tau_r makes the owning files layout candidates for it.
class RegionIndex {
 public:
  struct Entry {
    Fingerprint fingerprint;
    std::set<std::string> files;
  };

  /// Journal record for append-only persistence.
  struct Event {
    std::size_t entry = 0;
    bool created = false;
    std::string file;
  };

  /// Indexes the regions of a new file and returns its candidate partners
  /// (ordered pairs, sorted).
  std::vector<FilePair> ingest(const std::string& file_id,
                               std::span<const Fingerprint> regions, double tau_r) {
    if (!files_.insert(file_id).second) {
      throw Error(ErrorCode::DuplicateFile, "file already indexed: " + file_id);
    }
    std::set<FilePair> candidates;
    for (const auto& fp : regions) {
      for (const auto& entry : entries_) {
        if (region_similarity(fp, entry.fingerprint) < tau_r) continue;
        for (const auto& owner : entry.files)
          if (owner != file_id) candidates.insert(ordered_pair(file_id, owner));
      }
    }
    for (const auto& fp : regions) add_owner(fp, file_id);
    return {candidates.begin(), candidates.end()};
  }

  /// Replays a journal record (used when loading a persisted index).
  void replay(std::size_t entry, const std::optional<Fingerprint>& fp, const std::string& file) {
    if (entry == entries_.size()) {
      if (!fp) throw Error(ErrorCode::InvalidArgument, "new index entry without fingerprint");
      by_bins_.emplace(fp->bins, entries_.size());
      entries_.push_back({*fp, {}});
    } else if (entry > entries_.size()) {
      throw Error(ErrorCode::InvalidArgument, "index journal is out of order");
    }
    entries_[entry].files.insert(file);
    files_.insert(file);
  }

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  const std::set<std::string>& files() const noexcept { return files_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool contains_file(const std::string& id) const { return files_.count(id) > 0; }

  std::vector<Event> take_journal() { return std::exchange(journal_, {}); }

 private:
  void add_owner(const Fingerprint& fp, const std::string& file_id) {
    auto it = by_bins_.find(fp.bins);
    if (it == by_bins_.end()) {
      std::size_t k = entries_.size();
      by_bins_.emplace(fp.bins, k);
      entries_.push_back({fp, {file_id}});
      journal_.push_back({k, true, file_id});
    } else if (entries_[it->second].files.insert(file_id).second) {
      journal_.push_back({it->second, false, file_id});
    }
  }

  std::vector<Entry> entries_;
  std::map<std::array<double, kFingerprintBins>, std::size_t> by_bins_;
  std::set<std::string> files_;
  std::vector<Event> journal_;
};

/// Layout similarity of one candidate pair.
struct PairSimilarity {
  std::string a;
  std::string b;
  double score = 0.0;
  bool pruned = false;  // skipped by the node-count bound; score stays 0
  std::vector<std::pair<int, int>> region_pairs;
};

/// Optional store of already computed pair similarities.
using PairCache = std::map<FilePair, PairSimilarity>;

struct Template {
  int id = 0;
  std::vector<std::string> files;
  std::vector<PairSimilarity> region_matches;  // accepted pairs inside the template
};

struct TemplateSet {
  double tau_f = 0.0;
  std::vector<Template> templates;

  /// file id -> template id
  std::map<std::string, int> assignment() const {
    std::map<std::string, int> out;
    for (const auto& t : templates)
      for (const auto& f : t.files) out[f] = t.id;
    return out;
  }
};

/// Candidate generation over a corpus through a fresh index.
inline std::vector<FilePair> candidate_pairs(std::span<const FileLayout> files, double tau_r,
                                             RegionIndex* index = nullptr) {
  RegionIndex local;
  RegionIndex& idx = index ? *index : local;
  std::set<FilePair> all;
  for (const auto& f : files) {
    auto c = idx.ingest(f.id, f.graph.fingerprints, tau_r);
    all.insert(c.begin(), c.end());
  }
  return {all.begin(), all.end()};
}

/// Layout similarities of candidate pairs. Pairs whose node-count bound is
/// below prune_below are marked pruned instead of flooded.
inline std::vector<PairSimilarity> pair_similarities(std::span<const FileLayout> files,
                                                     std::span<const FilePair> candidates,
                                                     double prune_below,
                                                     const FloodParams& flood = {},
                                                     PairCache* cache = nullptr) {
  std::map<std::string, const FileLayout*> by_id;
  for (const auto& f : files) by_id[f.id] = &f;
  std::vector<PairSimilarity> out;
  out.reserve(candidates.size());
  for (const auto& [a, b] : candidates) {
    if (cache) {
      auto hit = cache->find({a, b});
      if (hit != cache->end()) {
        out.push_back(hit->second);
        continue;
      }
    }
    auto ia = by_id.find(a);
    auto ib = by_id.find(b);
    if (ia == by_id.end() || ib == by_id.end()) {
      throw Error(ErrorCode::NotFound, "candidate refers to an unknown file");
    }
    const LayoutGraph& ga = ia->second->graph;
    const LayoutGraph& gb = ib->second->graph;
    PairSimilarity ps{a, b, 0.0, false, {}};
    if (node_count_bound(ga.size(), gb.size()) < prune_below) {
      ps.pruned = true;
    } else {
      LayoutMatch m = layout_similarity(ga, gb, flood);
      ps.score = m.score;
      ps.region_pairs = std::move(m.region_pairs);
    }
    if (cache && !ps.pruned) cache->emplace(FilePair{a, b}, ps);
    out.push_back(std::move(ps));
  }
  return out;
}

/// Templates as connected components of the graph of pairs scoring at least
/// tau_f. Files are sorted inside templates and templates by first file.
inline TemplateSet templates_from_similarities(std::span<const std::string> file_ids,
                                               std::span<const PairSimilarity> similarities,
                                               double tau_f) {
  std::vector<std::string> ids(file_ids.begin(), file_ids.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < ids.size(); ++i) pos[ids[i]] = i;

  DisjointSets sets(ids.size());
  std::vector<const PairSimilarity*> accepted;
  for (const auto& s : similarities) {
    if (s.pruned || s.score < tau_f) continue;
    auto ia = pos.find(s.a);
    auto ib = pos.find(s.b);
    if (ia == pos.end() || ib == pos.end()) continue;
    sets.unite(ia->second, ib->second);
    accepted.push_back(&s);
  }
  std::map<std::size_t, std::vector<std::string>> groups;
  for (std::size_t i = 0; i < ids.size(); ++i) groups[sets.find(i)].push_back(ids[i]);

  TemplateSet out;
  out.tau_f = tau_f;
  for (auto& [root, members] : groups) out.templates.push_back({0, std::move(members), {}});
  std::sort(out.templates.begin(), out.templates.end(),
            [](const Template& x, const Template& y) { return x.files.front() < y.files.front(); });
  std::map<std::string, std::size_t> owner;
  for (std::size_t t = 0; t < out.templates.size(); ++t) {
    out.templates[t].id = static_cast<int>(t);
    for (const auto& f : out.templates[t].files) owner[f] = t;
  }
  for (const PairSimilarity* s : accepted) out.templates[owner[s->a]].region_matches.push_back(*s);
  for (auto& t : out.templates) {
    std::sort(t.region_matches.begin(), t.region_matches.end(),
              [](const PairSimilarity& x, const PairSimilarity& y) {
                return std::tie(x.a, x.b) < std::tie(y.a, y.b);
              });
  }
  return out;
}

inline std::vector<std::string> file_ids(std::span<const FileLayout> files) {
  std::vector<std::string> ids;
  for (const auto& f : files) ids.push_back(f.id);
  return ids;
}

inline void check_unique_ids(std::span<const FileLayout> files) {
  std::set<std::string> seen;
  for (const auto& f : files)
    if (!seen.insert(f.id).second) throw Error(ErrorCode::DuplicateFile, "duplicate file id: " + f.id);
}

/// Template inference over a corpus: index regions, flood candidate pairs,
/// close transitively.
inline TemplateSet infer_templates(std::span<const FileLayout> files, const Thresholds& th,
                                   const FloodParams& flood = {}, PairCache* cache = nullptr) {
  check_unique_ids(files);
  auto candidates = candidate_pairs(files, th.tau_r);
  double prune = th.tau_f >= kPruneBound ? kPruneBound : 0.0;
  auto sims = pair_similarities(files, candidates, prune, flood, cache);
  auto ids = file_ids(files);
  return templates_from_similarities(ids, sims, th.tau_f);
}

/// Inclusive threshold grid from..to by step.
inline std::vector<double> threshold_grid(double from, double to, double step) {
  if (!(step > 0) || to < from) throw Error(ErrorCode::InvalidArgument, "bad threshold grid");
  std::vector<double> out;
  auto count = static_cast<long>((to - from) / step + 1e-9);
  for (long i = 0; i <= count; ++i) {
    double t = from + static_cast<double>(i) * step;
    out.push_back(std::round(t * 1e9) / 1e9);
  }
  return out;
}

struct SweepStep {
  double tau_f = 0.0;
  TemplateSet templates;
  std::optional<VMeasure> scores;  // present when gold templates are given
};

/// Templates at every layout threshold, reusing one set of pair similarities.
inline std::vector<SweepStep> sweep_tau_f(std::span<const FileLayout> files,
                                          std::span<const double> thresholds, double tau_r,
                                          const std::map<std::string, std::string>* gold = nullptr,
                                          const FloodParams& flood = {},
                                          PairCache* cache = nullptr) {
  std::vector<SweepStep> out;
  if (files.empty() || thresholds.empty()) return out;
  check_unique_ids(files);
  auto candidates = candidate_pairs(files, tau_r);
  double lowest = *std::min_element(thresholds.begin(), thresholds.end());
  double prune = lowest >= kPruneBound ? kPruneBound : 0.0;
  auto sims = pair_similarities(files, candidates, prune, flood, cache);
  auto ids = file_ids(files);
  for (double t : thresholds) {
    SweepStep step{t, templates_from_similarities(ids, sims, t), std::nullopt};
    if (gold) {
      auto assigned = step.templates.assignment();
      std::vector<int> pred;
      std::vector<std::string> truth;
      for (const auto& [file, tmpl] : assigned) {
        auto g = gold->find(file);
        if (g == gold->end()) continue;
        pred.push_back(tmpl);
        truth.push_back(g->second);
      }
      step.scores = vmeasure(pred, truth);
    }
    out.push_back(std::move(step));
  }
  return out;
}

}  // namespace mondrian
