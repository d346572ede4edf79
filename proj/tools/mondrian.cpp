// mondrian: detect regions in multiregion CSV files, split them, infer layout
// templates across a corpus, evaluate against annotations, and serve the
// JSON API used by the region editor.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mondrian/http.hpp"
#include "mondrian/mondrian.hpp"
#include "mondrian/png.hpp"

namespace fs = std::filesystem;
using namespace mondrian;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitRegion = 3;

struct CommonOptions {
  std::string config_path;
  std::string delimiter;
  std::string quote;
  std::optional<double> alpha, beta, gamma, radius, tau_r, tau_f;

  void add_to(CLI::App* app, bool clustering, bool thresholds) {
    app->add_option("--config", config_path, "JSON config file with default parameters");
    app->add_option("--delimiter", delimiter, "Field delimiter (default ',')");
    app->add_option("--quote", quote, "Quote character (default '\"')");
    if (clustering) {
      app->add_option("--alpha", alpha, "Weight of the geometric distance term");
      app->add_option("--beta", beta, "Weight of the size-difference term");
      app->add_option("--gamma", gamma, "Weight of the misalignment term");
      app->add_option("--radius", radius, "Clustering radius in cells");
    }
    if (thresholds) {
      app->add_option("--tau-r", tau_r, "Region similarity threshold");
      app->add_option("--tau-f", tau_f, "Layout similarity threshold");
    }
  }

  Config resolve() const {
    Config c = config_path.empty() ? Config{} : load_config(config_path);
    json overrides = json::object();
    if (!delimiter.empty()) overrides["delimiter"] = delimiter == "\\t" ? "\t" : delimiter;
    if (!quote.empty()) overrides["quote"] = quote;
    if (alpha) overrides["alpha"] = *alpha;
    if (beta) overrides["beta"] = *beta;
    if (gamma) overrides["gamma"] = *gamma;
    if (radius) overrides["radius"] = *radius;
    if (tau_r) overrides["tau_r"] = *tau_r;
    if (tau_f) overrides["tau_f"] = *tau_f;
    apply_json(c, overrides);
    return c;
  }
};

/// "a:b:s" inclusive range, or a comma-separated list.
std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    double a = 0, b = 0, s = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(spec);
    if (!(in >> a >> c1 >> b >> c2 >> s) || c1 != ':' || c2 != ':') {
      throw Error(ErrorCode::InvalidArgument, "grid must look like from:to:step");
    }
    return threshold_grid(a, b, s);
  }
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty grid");
  return out;
}

void emit(const json& j, const std::string& out_path) {
  std::string text = dump(j) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  if (fs::path(out_path).has_parent_path()) fs::create_directories(fs::path(out_path).parent_path());
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + out_path);
  out << text;
}

std::vector<fs::path> csv_files(const fs::path& dir) {
  std::vector<fs::path> files;
  if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, dir.string() + " is not a directory");
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == ".csv" || ext == ".tsv" || ext == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

FileLayout layout_for(const std::string& id, const TypedGrid& grid, const ClusterParams& p) {
  auto regions = detect_file(grid, p);
  if (regions.empty()) return {id, {}};
  return {id, build_layout(regions)};
}

// --- detect ---------------------------------------------------------------

struct DetectCmd {
  CommonOptions common;
  std::string path, out, dump_image, dump_elements;
  bool fingerprints = false;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("detect", "Detect regions in one file");
    cmd->add_option("path", path, "CSV file")->required();
    common.add_to(cmd, true, false);
    cmd->add_option("--out", out, "Write the regions JSON here instead of stdout");
    cmd->add_option("--dump-image", dump_image, "Write the type-colored grid as PNG");
    cmd->add_option("--dump-elements", dump_elements, "Write the segmented elements as JSON");
    cmd->add_flag("--fingerprints", fingerprints, "Include region fingerprints");
    cmd->callback([this] { run(); });
  }

  void run() {
    Config cfg = common.resolve();
    TypedGrid grid = load_csv(path, cfg.dialect);
    auto elements = segment_file(grid);
    auto regions = detect_regions(elements, cfg.cluster);
    attach_fingerprints(regions, grid);
    if (!dump_image.empty()) write_png(render(grid), dump_image);
    if (!dump_elements.empty()) emit(elements_to_json(elements), dump_elements);
    emit(detection_to_json(grid, regions, cfg.cluster, fingerprints), out);
  }
};

// --- split ----------------------------------------------------------------

struct SplitCmd {
  CommonOptions common;
  std::string path, regions_path, outdir;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("split", "Write one CSV per region");
    cmd->add_option("path", path, "CSV file")->required();
    cmd->add_option("--regions", regions_path,
                    "Regions JSON (detect output or array of rectangles); detects when omitted");
    cmd->add_option("--outdir", outdir, "Output directory")->required();
    common.add_to(cmd, true, false);
    cmd->callback([this] { run(); });
  }

  void run() {
    Config cfg = common.resolve();
    TypedGrid grid = load_csv(path, cfg.dialect);
    std::vector<Rect> rects;
    if (regions_path.empty()) {
      rects = boundaries(detect_file(grid, cfg.cluster));
    } else {
      try {
        rects = rects_from_json(json::parse(read_file(regions_path)));
      } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidRegion, regions_path + ": " + e.what());
      }
    }
    auto result = split_file(grid, rects, outdir, fs::path(path).stem().string(), cfg.dialect,
                             path);
    json files = json::array();
    for (const auto& p : result.outputs) files.push_back(p.string());
    emit({{"file", grid.file_id}, {"outputs", files}}, "");
  }
};

// --- templates ------------------------------------------------------------

struct TemplatesCmd {
  CommonOptions common;
  std::string dir, sweep, index_path, gold_path, out;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("templates", "Infer layout templates over a directory");
    cmd->add_option("dir", dir, "Directory of CSV files")->required();
    common.add_to(cmd, true, true);
    cmd->add_option("--sweep", sweep, "Layout thresholds to sweep, e.g. 0.7:1.0:0.01");
    cmd->add_option("--index", index_path, "Persistent region index (default $MONDRIAN_INDEX)");
    cmd->add_option("--gold", gold_path, "Annotations with template ids, scored per threshold");
    cmd->add_option("--out", out, "Write JSON here instead of stdout");
    cmd->callback([this] { run(); });
  }

  void run() {
    Config cfg = common.resolve();
    if (index_path.empty()) {
      if (const char* env = std::getenv("MONDRIAN_INDEX")) index_path = env;
    }

    std::vector<FileLayout> layouts;
    RegionIndex index;
    PairCache cache;
    std::optional<IndexStore> store;
    if (!index_path.empty()) {
      store.emplace(index_path);
      store->load(index, cache, layouts);
    }
    std::map<std::string, std::size_t> known;
    for (std::size_t i = 0; i < layouts.size(); ++i) known[layouts[i].id] = i;

    fs::path root(dir);
    for (const auto& file : csv_files(root)) {
      std::string id = fs::relative(file, root).generic_string();
      if (known.count(id)) continue;
      TypedGrid grid;
      try {
        grid = load_csv(file, cfg.dialect);
      } catch (const Error& e) {
        std::cerr << "skipping " << file.string() << ": " << e.what() << "\n";
        continue;
      }
      layouts.push_back(layout_for(id, grid, cfg.cluster));
      known[id] = layouts.size() - 1;
      if (store) {
        index.ingest(id, layouts.back().graph.fingerprints, cfg.thresholds.tau_r);
        store->append_layout(id, layouts.back().graph);
      }
    }
    if (store) store->append_index(index, index.take_journal());
    std::size_t cached_before = cache.size();

    std::map<std::string, std::string> gold;
    if (!gold_path.empty()) {
      for (const auto& a : load_annotations(gold_path))
        if (a.template_id) gold[a.file] = *a.template_id;
    }

    json result;
    if (!sweep.empty()) {
      auto grid = parse_grid(sweep);
      auto steps = sweep_tau_f(layouts, grid, cfg.thresholds.tau_r, gold.empty() ? nullptr : &gold,
                               cfg.flood, &cache);
      json arr = json::array();
      for (const auto& s : steps) {
        json j = to_json(s.templates);
        j["count"] = s.templates.templates.size();
        if (s.scores) {
          j["homogeneity"] = s.scores->homogeneity;
          j["completeness"] = s.scores->completeness;
          j["v_measure"] = s.scores->v_measure;
        }
        arr.push_back(std::move(j));
      }
      result = {{"sweep", arr}};
    } else {
      TemplateSet ts = infer_templates(layouts, cfg.thresholds, cfg.flood, &cache);
      result = to_json(ts);
      if (!gold.empty()) {
        auto assigned = ts.assignment();
        std::vector<int> pred;
        std::vector<std::string> truth;
        for (const auto& [f, t] : assigned)
          if (gold.count(f)) {
            pred.push_back(t);
            truth.push_back(gold[f]);
          }
        VMeasure v = vmeasure(pred, truth);
        result["homogeneity"] = v.homogeneity;
        result["completeness"] = v.completeness;
        result["v_measure"] = v.v_measure;
      }
    }
    if (store && cache.size() > cached_before) {
      // the cache is keyed in order; the freshly computed pairs are unknown here,
      // so rewrite only what is missing from the sidecar
      PairCache persisted;
      RegionIndex scratch;
      std::vector<FileLayout> ignored;
      store->load(scratch, persisted, ignored);
      std::vector<PairSimilarity> fresh;
      for (const auto& [key, value] : cache)
        if (!persisted.count(key)) fresh.push_back(value);
      store->append_pairs(fresh);
    }
    emit(result, out);
  }
};

// --- eval -----------------------------------------------------------------

struct EvalCmd {
  CommonOptions common;
  std::string pred_dir, gold_path, curve = "0:1:0.01", curve_csv, templates_path, out;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("eval", "Score predicted regions against annotations");
    cmd->add_option("--pred", pred_dir, "Directory of detect outputs named <stem>.json")->required();
    cmd->add_option("--gold", gold_path, "Annotation file (JSON array or JSON lines)")->required();
    cmd->add_option("--curve", curve, "IoU thresholds for the detection curve");
    cmd->add_option("--curve-csv", curve_csv, "Also write the detection curve as CSV");
    cmd->add_option("--templates", templates_path, "Predicted templates JSON to score");
    cmd->add_option("--out", out, "Write the report here instead of stdout");
    common.add_to(cmd, false, false);
    cmd->callback([this] { run(); });
  }

  void run() {
    Config cfg = common.resolve();
    auto annotations = load_annotations(gold_path);
    fs::path gold_dir = fs::path(gold_path).parent_path();
    auto thresholds = parse_grid(curve);

    json files = json::array();
    std::vector<double> all_iou, table_iou, all_eob;
    std::vector<int> pred_counts, gold_counts;
    long total_edits = 0;
    for (const auto& a : annotations) {
      fs::path csv = fs::path(a.file).is_absolute() ? fs::path(a.file) : gold_dir / a.file;
      TypedGrid grid = load_csv(csv, cfg.dialect);
      fs::path pred_file = fs::path(pred_dir) / (fs::path(a.file).stem().string() + ".json");
      std::vector<Rect> predicted;
      if (fs::exists(pred_file)) predicted = rects_from_json(json::parse(read_file(pred_file)));

      auto scores = region_score(predicted, a.regions, grid);
      EditReport edits = edit_distance(predicted, a.regions, &grid);
      json regions = json::array();
      for (std::size_t i = 0; i < a.regions.size(); ++i) {
        json r = to_json(a.regions[i]);
        r["label"] = a.labels[i];
        r["iou"] = scores[i].iou;
        r["eob"] = scores[i].eob;
        r["density"] = region_density(grid, a.regions[i]);
        r["type_entropy"] = region_type_entropy(grid, a.regions[i]);
        regions.push_back(std::move(r));
        all_iou.push_back(scores[i].iou);
        all_eob.push_back(scores[i].eob);
        if (a.labels[i] == "table") table_iou.push_back(scores[i].iou);
      }
      pred_counts.push_back(static_cast<int>(predicted.size()));
      gold_counts.push_back(static_cast<int>(a.regions.size()));
      total_edits += edits.distance;
      files.push_back({{"file", a.file},
                       {"predicted", predicted.size()},
                       {"gold", a.regions.size()},
                       {"regions", regions},
                       {"edit_distance", edits.distance},
                       {"edits",
                        {{"resize", edits.resizes},
                         {"add", edits.additions},
                         {"delete", edits.deletions}}}});
    }

    auto region_curve = detection_curve(all_iou, thresholds);
    auto table_curve = detection_curve(table_iou, thresholds);
    BinaryReport cls = multiregion_classification(pred_counts, gold_counts);
    auto mean = [](const std::vector<double>& v) {
      double s = 0;
      for (double x : v) s += x;
      return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    };
    json report = {
        {"files", files},
        {"summary",
         {{"regions", all_iou.size()},
          {"mean_iou", mean(all_iou)},
          {"mean_eob", mean(all_eob)},
          {"mean_edit_distance",
           annotations.empty() ? 0.0 : static_cast<double>(total_edits) / annotations.size()}}},
        {"curve", {{"thresholds", thresholds}, {"regions", region_curve}, {"tables", table_curve}}},
        {"multiregion",
         {{"accuracy", cls.accuracy},
          {"precision", cls.precision},
          {"recall", cls.recall},
          {"precision_defined", cls.precision_defined}}},
    };

    if (!templates_path.empty()) {
      json tj = json::parse(read_file(templates_path));
      std::map<std::string, int> predicted;
      for (const auto& t : tj.at("templates"))
        for (const auto& f : t.at("files")) predicted[f.get<std::string>()] = t.at("id").get<int>();
      std::vector<int> pred;
      std::vector<std::string> truth;
      for (const auto& a : annotations) {
        auto it = predicted.find(a.file);
        if (!a.template_id || it == predicted.end()) continue;
        pred.push_back(it->second);
        truth.push_back(*a.template_id);
      }
      VMeasure v = vmeasure(pred, truth);
      report["templates"] = {{"homogeneity", v.homogeneity},
                             {"completeness", v.completeness},
                             {"v_measure", v.v_measure}};
    }

    if (!curve_csv.empty()) {
      std::ofstream csv(curve_csv);
      if (!csv) throw Error(ErrorCode::Io, "cannot write " + curve_csv);
      csv << "threshold,regions,tables\n";
      for (std::size_t i = 0; i < thresholds.size(); ++i)
        csv << thresholds[i] << ',' << region_curve[i] << ',' << table_curve[i] << '\n';
    }
    emit(report, out);
  }
};

// --- sweep ----------------------------------------------------------------

struct SweepCmd {
  CommonOptions common;
  std::string path, radius_grid, gold_path, out;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("sweep", "Cluster one file over a grid of radii");
    cmd->add_option("path", path, "CSV file")->required();
    common.add_to(cmd, true, false);
    cmd->add_option("--radius-grid", radius_grid,
                    "Radii as from:to:step or a list (default 0.1..2 by 0.1, ..10 by 1, ..100 by 10)");
    cmd->add_option("--gold", gold_path, "Annotations; picks the radius with the best mean IoU");
    cmd->add_option("--out", out, "Write JSON here instead of stdout");
    cmd->callback([this] { run(); });
  }

  void run() {
    Config cfg = common.resolve();
    TypedGrid grid = load_csv(path, cfg.dialect);
    auto radii = radius_grid.empty() ? default_radius_grid() : parse_grid(radius_grid);
    auto elements = segment_file(grid);
    auto steps = sweep_radius(elements, cfg.cluster, radii);

    std::optional<std::vector<Rect>> gold;
    if (!gold_path.empty()) {
      for (const auto& a : load_annotations(gold_path))
        if (fs::path(a.file).filename() == fs::path(path).filename()) gold = a.regions;
      if (!gold) throw Error(ErrorCode::NotFound, "no annotation for " + path);
    }
    RadiusChoice choice =
        gold ? select_radius(steps, grid, std::span<const Rect>(*gold), cfg.cluster.epsilon)
             : select_radius(steps, grid, std::nullopt, cfg.cluster.epsilon);

    json arr = json::array();
    for (const auto& s : steps) {
      json regs = json::array();
      for (const auto& r : s.regions) regs.push_back(to_json(r.boundary));
      arr.push_back({{"radius", s.epsilon}, {"count", s.regions.size()}, {"regions", regs}});
    }
    json result = {{"file", grid.file_id}, {"steps", arr}, {"selected_radius", choice.epsilon}};
    if (gold) result["selected_mean_iou"] = choice.mean_iou;
    emit(result, out);
  }
};

// --- serve ----------------------------------------------------------------

struct ServeCmd {
  CommonOptions common;
  std::string host = "127.0.0.1";
  int port = 8080;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("serve", "Run the JSON API for the region editor");
    cmd->add_option("--host", host, "Bind address");
    cmd->add_option("--port", port, "Port");
    common.add_to(cmd, true, true);
    cmd->callback([this] { run(); });
  }

  void run() {
    Workspace ws(common.resolve());
    httplib::Server server;
    mount(server, ws);
    std::cerr << "listening on http://" << host << ":" << port << "\n";
    if (!server.listen(host, port)) throw Error(ErrorCode::Io, "cannot bind " + host);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Region detection and layout template inference for multiregion CSV files"};
  app.require_subcommand(1);
  DetectCmd detect;
  SplitCmd split;
  TemplatesCmd templates;
  EvalCmd eval;
  SweepCmd sweep;
  ServeCmd serve;
  detect.add(app);
  split.add(app);
  templates.add(app);
  eval.add(app);
  sweep.add(app);
  serve.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == ErrorCode::InvalidRegion) return kExitRegion;
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return 0;
}
