#include "cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "vlmkit/anyres.hpp"
#include "vlmkit/budget.hpp"
#include "vlmkit/doc_json.hpp"
#include "vlmkit/error.hpp"
#include "vlmkit/eval_io.hpp"
#include "vlmkit/grammar.hpp"
#include "vlmkit/layout.hpp"
#include "vlmkit/merge.hpp"
#include "vlmkit/tensor_map.hpp"
#include "vlmkit/version.hpp"

namespace vlmkit::cli {
namespace {

using Json = nlohmann::ordered_json;

std::string read_all(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string read_text(const std::string& path, std::istream& in) {
  if (path == "-") return read_all(in);
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(Errc::IoError, "cannot open " + path);
  return read_all(file);
}

void write_text(const std::string& path, std::ostream& out, const std::string& text) {
  if (path == "-") {
    out << text;
    out.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(Errc::IoError, "cannot open " + path + " for writing");
  file << text;
  if (!file) throw Error(Errc::IoError, "cannot write " + path);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(Errc::IoError, "cannot open " + path);
  return file;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

struct ParseArgs {
  std::string input = "-";
  std::string output = "-";
  bool lenient = false;
};

struct OrderArgs {
  std::string input = "-";
  std::string output = "-";
  std::string format = "json";
  int digits = 3;
  double overlap = 0.5;
};

struct PlanArgs {
  int width = 0;
  int height = 0;
  std::string stage = "3";
  int patch = 16;
  bool ocr_upscale = false;
};

struct EvalArgs {
  std::string gt;
  std::string pred;
  std::string output = "-";
  double threshold = kDefaultIouThreshold;
  bool no_case_fold = false;
  bool lenient = false;
  unsigned jobs = 1;
};

struct MergeArgs {
  std::string out;
  std::vector<std::string> inputs;
  std::vector<double> weights;
  unsigned jobs = 0;
};

struct CosineArgs {
  std::string base;
  std::vector<std::string> inputs;
};

struct BudgetArgs {
  std::uint64_t batch = 1;
  std::uint64_t vocab = kDefaultVocab;
  std::uint64_t bytes = kDefaultBytesPerElement;
  std::uint64_t chunk = 0;
  bool reference_resident = false;
};

void add_parse(CLI::App& app, const char* name, const char* about, ParseArgs& a) {
  auto* sub = app.add_subcommand(name, about);
  sub->add_option("-i,--input", a.input, "Response text file, '-' for stdin")->capture_default_str();
  sub->add_option("-o,--output", a.output, "Output JSON file, '-' for stdout")->capture_default_str();
  sub->add_flag("--lenient", a.lenient, "Clamp and repair instead of rejecting");
}

void cmd_parse(const ParseArgs& a, bool ocr, std::istream& in, std::ostream& out, std::ostream& err) {
  ParseOptions opts;
  opts.strict = !a.lenient;
  const auto text = read_text(a.input, in);
  const auto doc = ocr ? parse_ocr(text, opts) : parse_grounding(text, opts);
  for (const auto& w : doc.warnings) err << "warning: byte " << w.offset << ": " << w.message << "\n";
  write_text(a.output, out, doc_to_json(doc, 2) + "\n");
}

void cmd_order(const OrderArgs& a, std::istream& in, std::ostream& out) {
  const auto doc = doc_from_json(read_text(a.input, in));
  LayoutOptions layout;
  layout.min_overlap_ratio = a.overlap;
  const auto ordered = reading_order(doc, layout);
  if (a.format == "text") {
    ParseOptions opts;
    opts.max_fraction_digits = a.digits;
    write_text(a.output, out, serialize(ordered, opts) + "\n");
  } else {
    write_text(a.output, out, doc_to_json(ordered, 2) + "\n");
  }
}

void cmd_plan(const PlanArgs& a, std::ostream& out) {
  const auto profile = profiles::by_name(a.stage);
  PatchConfig cfg;
  cfg.patch_size = a.patch;
  auto [w, h] = a.ocr_upscale ? ocr_upscale(a.width, a.height) : std::pair{a.width, a.height};
  const auto plan = select_grid(w, h, *profile, cfg);
  Json j;
  j["rows"] = plan.rows;
  j["cols"] = plan.cols;
  j["total_tokens"] = plan.total_tokens;
  j["tokens_per_tile"] = plan.tokens_per_tile;
  j["tile_px"] = {plan.canvas_width, plan.canvas_height};
  j["image_px"] = {w, h};
  j["covered_area"] = plan.covered_area;
  j["stage"] = profile->name;
  j["max_grid_dim"] = profile->max_grid_dim;
  j["max_total_tokens"] = profile->max_total_tokens;
  j["context_length"] = profile->context_length;
  out << dump(j);
}

CorpusOptions corpus_options(const EvalArgs& a) {
  CorpusOptions opts;
  opts.threshold = a.threshold;
  opts.normalize.case_fold = !a.no_case_fold;
  opts.parse.strict = !a.lenient;
  opts.jobs = a.jobs;
  return opts;
}

void cmd_eval_ocr(const EvalArgs& a, std::ostream& out) {
  auto gt_in = open_input(a.gt);
  auto pred_in = open_input(a.pred);
  const auto gt = read_ocr_ground_truth(gt_in);
  const auto pred = read_predictions(pred_in);
  write_text(a.output, out, report_to_json(evaluate_ocr_corpus(gt, pred, corpus_options(a))) + "\n");
}

void cmd_eval_grounding(const EvalArgs& a, std::ostream& out) {
  auto gt_in = open_input(a.gt);
  auto pred_in = open_input(a.pred);
  const auto gt = read_grounding_ground_truth(gt_in);
  const auto pred = read_predictions(pred_in);
  write_text(a.output, out, report_to_json(evaluate_grounding_corpus(gt, pred, corpus_options(a))) + "\n");
}

std::vector<TensorMap> load_all(const std::vector<std::string>& paths) {
  std::vector<TensorMap> maps;
  maps.reserve(paths.size());
  for (const auto& p : paths) maps.push_back(read_container(p));
  return maps;
}

void cmd_merge(const MergeArgs& a, std::ostream& out) {
  const auto maps = load_all(a.inputs);
  const auto merged = a.weights.empty() ? average(maps, a.jobs) : weighted_average(maps, a.weights, a.jobs);
  write_container(a.out, merged);
  std::uint64_t elements = 0;
  for (const auto& [_, t] : merged) elements += t.data.size();
  Json j;
  j["out"] = a.out;
  j["inputs"] = a.inputs;
  j["weights"] = a.weights.empty() ? Json("uniform") : Json(a.weights);
  j["tensors"] = merged.size();
  j["elements"] = elements;
  out << dump(j);
}

void cmd_cosine(const CosineArgs& a, std::ostream& out) {
  const auto base = read_container(a.base);
  const auto maps = load_all(a.inputs);
  const auto report = cosine_matrix(maps, base);
  Json j;
  j["base"] = a.base;
  j["checkpoints"] = a.inputs;
  j["norms"] = report.norms;
  j["pairwise"] = report.pairwise;
  out << dump(j);
}

void cmd_budget(const BudgetArgs& a, std::ostream& out) {
  Json rows = Json::array();
  for (const auto& r : budget_table(a.batch, a.vocab, a.bytes, a.chunk, a.reference_resident)) {
    Json row;
    row["stage"] = r.stage;
    row["seq_len"] = r.seq_len;
    row["chunk_len"] = r.chunk_len;
    row["unchunked_bytes"] = r.unchunked_bytes;
    row["chunked_bytes"] = r.chunked_bytes;
    row["reduction"] = r.reduction;
    row["dpo_factor"] = r.dpo_factor;
    row["dpo_peak_bytes"] = r.dpo_peak_bytes;
    rows.push_back(std::move(row));
  }
  Json j;
  j["batch"] = a.batch;
  j["vocab"] = a.vocab;
  j["bytes_per_element"] = a.bytes;
  j["chunk_len"] = a.chunk;
  j["reference_resident"] = a.reference_resident;
  j["stages"] = std::move(rows);
  out << dump(j);
}

void add_eval(CLI::App& app, const char* name, const char* about, EvalArgs& a) {
  auto* sub = app.add_subcommand(name, about);
  sub->add_option("--gt", a.gt, "Ground-truth JSON Lines")->required();
  sub->add_option("--pred", a.pred, "Predictions JSON Lines")->required();
  sub->add_option("-o,--output", a.output, "Report file, '-' for stdout")->capture_default_str();
  sub->add_option("--threshold", a.threshold, "IoU threshold in (0, 1]")->capture_default_str();
  sub->add_flag("--no-case-fold", a.no_case_fold, "Compare texts case-sensitively");
  sub->add_flag("--lenient", a.lenient, "Parse predictions leniently");
  sub->add_option("-j,--jobs", a.jobs, "Worker threads, 0 = all cores")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"vlmkit: grammar, layout, tiling, evaluation and checkpoint tools for VLM outputs"};
  app.name("vlmkit");
  app.require_subcommand(1);
  app.set_version_flag("--version", "vlmkit " + std::string(kVersion) + " (container format v" +
                                        std::to_string(kContainerVersion) + ")");

  ParseArgs parse_ocr_args;
  ParseArgs parse_grounding_args;
  add_parse(app, "parse-ocr", "Parse an OCR response into JSON", parse_ocr_args);
  add_parse(app, "parse-grounding", "Parse a grounding response into JSON", parse_grounding_args);

  OrderArgs order_args;
  auto* order = app.add_subcommand("order", "Put the words of an OCR JSON document in reading order");
  order->add_option("-i,--input", order_args.input, "OCR JSON document, '-' for stdin")->capture_default_str();
  order->add_option("-o,--output", order_args.output, "Output file, '-' for stdout")->capture_default_str();
  order->add_option("--format", order_args.format, "Output as JSON or as response text")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  order->add_option("--digits", order_args.digits, "Coordinate digits for --format text")->capture_default_str();
  order->add_option("--overlap-ratio", order_args.overlap, "Line-joining overlap ratio")->capture_default_str();

  PlanArgs plan_args;
  auto* plan = app.add_subcommand("plan", "Choose a tiling grid and visual token budget");
  plan->add_option("--width", plan_args.width, "Image width in pixels")->required()->check(CLI::PositiveNumber);
  plan->add_option("--height", plan_args.height, "Image height in pixels")->required()->check(CLI::PositiveNumber);
  plan->add_option("--stage", plan_args.stage, "Stage profile")
      ->check(CLI::IsMember({"1", "2", "3", "4", "extrapolate"}))
      ->capture_default_str();
  plan->add_option("--patch", plan_args.patch, "Patch size")->check(CLI::IsMember({14, 16}))->capture_default_str();
  plan->add_flag("--ocr-upscale", plan_args.ocr_upscale, "Upscale small images to a 2304 px longer side first");

  EvalArgs eval_ocr_args;
  EvalArgs eval_grounding_args;
  add_eval(app, "eval-ocr", "Score OCR predictions against ground truth", eval_ocr_args);
  add_eval(app, "eval-grounding", "Score grounding predictions against ground truth", eval_grounding_args);

  MergeArgs merge_args;
  auto* merge = app.add_subcommand("merge", "Average checkpoints stored as .vvtm containers");
  merge->add_option("--out", merge_args.out, "Output container")->required();
  merge->add_option("inputs", merge_args.inputs, "Input containers")->required();
  merge->add_option("--weights", merge_args.weights, "Comma-separated weights, default uniform")
      ->delimiter(',')
      ->allow_extra_args(false);
  merge->add_option("-j,--jobs", merge_args.jobs, "Worker threads, 0 = all cores")->capture_default_str();

  CosineArgs cosine_args;
  auto* cosine = app.add_subcommand("cosine", "Cosine similarity of checkpoint deltas from a base");
  cosine->add_option("--base", cosine_args.base, "Base container")->required();
  cosine->add_option("inputs", cosine_args.inputs, "Checkpoint containers")->required();

  BudgetArgs budget_args;
  auto* budget = app.add_subcommand("budget", "Logit memory per training stage");
  budget->add_option("--batch", budget_args.batch, "Sequences per step")->capture_default_str();
  budget->add_option("--vocab", budget_args.vocab, "Vocabulary size")->capture_default_str();
  budget->add_option("--bytes", budget_args.bytes, "Bytes per logit element")->capture_default_str();
  budget->add_option("--chunk", budget_args.chunk, "Chunk length in tokens, 0 = unchunked")->capture_default_str();
  budget->add_flag("--reference-resident", budget_args.reference_resident,
                   "Reference model logits resident during preference optimization");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n";
    const auto* shown = &app;
    for (const auto* sub : app.get_subcommands()) shown = sub;
    err << shown->help();
    return kExitUsage;
  }

  try {
    if (app.got_subcommand("parse-ocr")) {
      cmd_parse(parse_ocr_args, true, in, out, err);
    } else if (app.got_subcommand("parse-grounding")) {
      cmd_parse(parse_grounding_args, false, in, out, err);
    } else if (app.got_subcommand(order)) {
      cmd_order(order_args, in, out);
    } else if (app.got_subcommand(plan)) {
      cmd_plan(plan_args, out);
    } else if (app.got_subcommand("eval-ocr")) {
      cmd_eval_ocr(eval_ocr_args, out);
    } else if (app.got_subcommand("eval-grounding")) {
      cmd_eval_grounding(eval_grounding_args, out);
    } else if (app.got_subcommand(merge)) {
      cmd_merge(merge_args, out);
    } else if (app.got_subcommand(cosine)) {
      cmd_cosine(cosine_args, out);
    } else if (app.got_subcommand(budget)) {
      cmd_budget(budget_args, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.code_name() << ": " << e.what() << "\n";
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "error: " << errc_name(Errc::InvalidInput) << ": " << e.what() << "\n";
    return kExitDomainError;
  }
  return kExitOk;
}

}  // namespace vlmkit::cli
