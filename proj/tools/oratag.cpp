// Copyright 2026 The Oratag Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "oratag/annotation.hpp"
#include "oratag/convert.hpp"
#include "oratag/crf.hpp"
#include "oratag/evaluation.hpp"
#include "oratag/lexicon.hpp"
#include "oratag/pipeline.hpp"
#include "oratag/tagset.hpp"
#include "oratag/text_util.hpp"
#include "oratag/textgrid.hpp"
#include "oratag/tokenizer.hpp"
#include "oratag/tsv.hpp"

// oratag: annotate speech transcriptions on six tiers, train the taggers,
// and run cross-validated evaluation.
//
// Exit codes: 0 success, 1 data or I/O error, 2 usage error.

namespace fs = std::filesystem;
using namespace oratag;

namespace {

constexpr const char* kResourceEnv = "ORATAG_RESOURCES";

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::runtime_error("read failed on " + path.string());
  return std::move(buf).str();
}

void write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot create " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed on " + path.string());
}

enum class Format { TextGrid, Tsv };

std::optional<Format> format_of(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".textgrid") return Format::TextGrid;
  if (ext == ".tsv") return Format::Tsv;
  return std::nullopt;
}

Format parse_format_flag(const std::string& flag) {
  if (flag == "textgrid") return Format::TextGrid;
  if (flag == "tsv") return Format::Tsv;
  throw CLI::ValidationError("--format", "must be 'textgrid' or 'tsv'");
}

// Files given directly are taken as-is; directories are scanned one level
// for .tsv/.TextGrid entries, sorted by name for reproducible ordering.
std::vector<fs::path> expand_inputs(const std::vector<std::string>& args) {
  std::vector<fs::path> files;
  for (const std::string& a : args) {
    const fs::path p(a);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && format_of(entry.path())) found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::exists(p)) {
      files.push_back(p);
    } else {
      throw std::runtime_error("input not found: " + a);
    }
  }
  if (files.empty()) throw std::runtime_error("no input files");
  return files;
}

// Resource file lookup: explicit flag wins; otherwise the conventional name
// under the resource directory when that exists.
struct ResourceOptions {
  std::string resource_dir;
  std::vector<std::string> lexicon_paths;
  std::string tokenizer_config_path;
  std::string rules_path;
  std::string post_rules_path;
  std::string registry_path;
  std::string models_dir;
};

void add_resource_options(CLI::App* cmd, ResourceOptions* opt) {
  const char* env = std::getenv(kResourceEnv);
  opt->resource_dir = env != nullptr ? env : "";
  cmd->add_option("--resources", opt->resource_dir,
                  "Resource directory (default: $" + std::string(kResourceEnv) + ")");
  cmd->add_option("--lexicon", opt->lexicon_paths, "Lexicon file(s), merged in order");
  cmd->add_option("--tokenizer-config", opt->tokenizer_config_path, "Tokenizer key=value config");
  cmd->add_option("--rules", opt->rules_path, "Token split rules (pattern<TAB>parts)");
  cmd->add_option("--post-rules", opt->post_rules_path, "Post-annotation rewrite rules");
  cmd->add_option("--registry", opt->registry_path, "POS tag registry (TAG<TAB>gloss)");
  cmd->add_option("--models", opt->models_dir, "Model directory");
}

std::string locate(const ResourceOptions& opt, const std::string& explicit_path,
                   const char* conventional) {
  if (!explicit_path.empty()) return explicit_path;
  if (!opt.resource_dir.empty()) {
    const fs::path p = fs::path(opt.resource_dir) / conventional;
    if (fs::exists(p)) return p.string();
  }
  return "";
}

tagset::TagRegistry load_registry(const ResourceOptions& opt) {
  const std::string path = locate(opt, opt.registry_path, "pos-registry.tsv");
  if (path.empty()) return tagset::TagRegistry::builtin();
  return tagset::TagRegistry::from_text(read_file(path));
}

tok::TokenizerConfig load_tokenizer_config(const ResourceOptions& opt) {
  tok::TokenizerConfig cfg;
  const std::string conf = locate(opt, opt.tokenizer_config_path, "tokenizer.conf");
  if (!conf.empty()) cfg = tok::parse_tokenizer_config(read_file(conf));
  const std::string rules = locate(opt, opt.rules_path, "tokenizer-rules.tsv");
  if (!rules.empty()) cfg.rules = tok::parse_rules(read_file(rules));
  return cfg;
}

lex::Lexicon load_lexicon_files(const ResourceOptions& opt, const tagset::TagRegistry& registry,
                                const tok::TokenizerConfig& tok_cfg) {
  std::vector<std::string> paths = opt.lexicon_paths;
  if (paths.empty()) {
    const std::string fallback = locate(opt, "", "lexicon.tsv");
    if (!fallback.empty()) paths.push_back(fallback);
  }
  lex::Lexicon lexicon = lex::load_lexicon(paths, registry);
  // The transcription convention's filled-pause forms always count as such,
  // whether or not a lexicon file lists them.
  for (const std::string& form : tok_cfg.filled_pause_forms) {
    lexicon.add(form, {}, true, false);
  }
  return lexicon;
}

std::string models_dir_of(const ResourceOptions& opt) {
  if (!opt.models_dir.empty()) return opt.models_dir;
  if (!opt.resource_dir.empty()) {
    const fs::path sub = fs::path(opt.resource_dir) / "models";
    if (fs::is_directory(sub)) return sub.string();
    return opt.resource_dir;
  }
  return "";
}

pipe::PipelineResources load_pipeline_resources(const ResourceOptions& opt, bool need_models) {
  pipe::PipelineResources res;
  res.registry = load_registry(opt);
  res.tokenizer_config = load_tokenizer_config(opt);
  res.lexicon = load_lexicon_files(opt, res.registry, res.tokenizer_config);

  const std::string post = locate(opt, opt.post_rules_path, "post-rules.txt");
  if (!post.empty()) res.post_rules = pipe::parse_post_rules(read_file(post));

  if (need_models) {
    const std::string dir = models_dir_of(opt);
    if (dir.empty()) throw std::runtime_error("no model directory (use --models or --resources)");
    res.prelim_pos_model = crf::load_model(read_file(fs::path(dir) / "prelim-pos.crf"));
    res.final_pos_model = crf::load_model(read_file(fs::path(dir) / "final-pos.crf"));
    const fs::path disf = fs::path(dir) / "disfluency.crf";
    if (fs::exists(disf)) res.disfluency_model = crf::load_model(read_file(disf));
  }
  return res;
}

// Reads one corpus file into a document. TextGrids holding a tok-min tier
// are taken as annotated documents; otherwise the named transcription tier
// is tokenized from scratch.
annot::Document read_document(const fs::path& path, Format format,
                              const tok::TokenizerConfig& tok_cfg,
                              const std::string& transcription_tier,
                              const std::string& speaker_tier) {
  const std::string bytes = read_file(path);
  annot::Document doc;
  if (format == Format::Tsv) {
    doc = io::read_tsv(bytes);
  } else {
    const io::TextGrid grid = io::read_textgrid(bytes);
    bool has_tok_min = false;
    for (const auto& tier : grid.tiers) has_tok_min = has_tok_min || tier.name == "tok-min";
    if (has_tok_min) {
      doc = io::textgrid_to_document(grid, "tok-min", speaker_tier, tok_cfg.pause_symbol);
    } else {
      const io::IntervalTier* source = nullptr;
      for (const auto& tier : grid.tiers) {
        if (tier.name == transcription_tier) source = &tier;
      }
      if (source == nullptr) {
        throw std::runtime_error(path.string() + ": no tier named '" + transcription_tier + "'");
      }
      std::vector<tok::TimedText> intervals;
      for (const io::Interval& iv : source->intervals) {
        intervals.push_back(tok::TimedText{iv.xmin, iv.xmax, iv.text});
      }
      std::vector<annot::Token> tokens = tok::tokenize(intervals, tok_cfg);
      if (!speaker_tier.empty()) {
        const io::IntervalTier* spk = nullptr;
        for (const auto& tier : grid.tiers) {
          if (tier.name == speaker_tier) spk = &tier;
        }
        if (spk != nullptr) {
          for (annot::Token& t : tokens) {
            const double mid = (t.t_min + t.t_max) / 2.0;
            for (const io::Interval& iv : spk->intervals) {
              if (mid >= iv.xmin && mid < iv.xmax) {
                t.speaker = iv.text;
                break;
              }
            }
          }
        }
      }
      doc = annot::new_document(std::move(tokens));
      doc.pause_symbol = tok_cfg.pause_symbol;
    }
  }
  if (doc.meta.sample_id.empty()) doc.meta.sample_id = path.stem().string();
  tok::classify_pauses(doc.tokens, tok_cfg);
  return doc;
}

std::string serialize_document(const annot::Document& doc, Format format) {
  if (format == Format::Tsv) return io::write_tsv(doc);
  return io::write_textgrid(io::document_to_textgrid(doc));
}

const char* extension_of(Format format) {
  return format == Format::TextGrid ? ".TextGrid" : ".tsv";
}

// Runs fn(i) for i in [0, count) on up to `jobs` threads. Errors surface in
// index order after all workers finish.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  const int threads = std::clamp<int>(jobs, 1, static_cast<int>(std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = static_cast<std::size_t>(t); i < count;
           i += static_cast<std::size_t>(threads)) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct CommonIo {
  std::vector<std::string> inputs;
  std::string out_dir;
  std::string format_flag;  // empty = infer per file
  std::string transcription_tier = "transcription";
  std::string speaker_tier;
  int jobs = 1;
};

void add_io_options(CLI::App* cmd, CommonIo* io, const char* input_help) {
  cmd->add_option("--in,-i,in", io->inputs, input_help)->required();
  cmd->add_option("--out,-o", io->out_dir, "Output directory")->required();
  cmd->add_option("--format", io->format_flag, "Force input format: textgrid|tsv");
  cmd->add_option("--transcription-tier", io->transcription_tier,
                  "TextGrid tier holding the transcription");
  cmd->add_option("--speaker-tier", io->speaker_tier, "TextGrid tier holding speaker labels");
  cmd->add_option("--jobs", io->jobs, "Files processed concurrently")->check(CLI::PositiveNumber);
}

Format input_format(const CommonIo& io, const fs::path& path) {
  if (!io.format_flag.empty()) return parse_format_flag(io.format_flag);
  if (auto f = format_of(path)) return *f;
  throw std::runtime_error(path.string() + ": cannot infer format, pass --format");
}

int run_annotate(const CommonIo& io, const ResourceOptions& res_opt) {
  const pipe::PipelineResources res = load_pipeline_resources(res_opt, true);
  const std::vector<fs::path> files = expand_inputs(io.inputs);

  parallel_for(files.size(), io.jobs, [&](std::size_t idx) {
    const fs::path& path = files[idx];
    const Format fmt = input_format(io, path);
    const annot::Document doc = read_document(path, fmt, res.tokenizer_config,
                                              io.transcription_tier, io.speaker_tier);
    const annot::Document tagged = pipe::annotate(doc, res);
    const fs::path out = fs::path(io.out_dir) / (path.stem().string() + extension_of(fmt));
    write_file(out, serialize_document(tagged, fmt));
  });
  return 0;
}

int run_convert(const CommonIo& io, const std::string& to_flag) {
  const Format target = parse_format_flag(to_flag);
  const std::vector<fs::path> files = expand_inputs(io.inputs);
  const tok::TokenizerConfig tok_cfg;  // conversion never re-tokenizes

  parallel_for(files.size(), io.jobs, [&](std::size_t idx) {
    const fs::path& path = files[idx];
    const Format fmt = input_format(io, path);
    const annot::Document doc =
        read_document(path, fmt, tok_cfg, io.transcription_tier, io.speaker_tier);
    const fs::path out = fs::path(io.out_dir) / (path.stem().string() + extension_of(target));
    write_file(out, serialize_document(doc, target));
  });
  return 0;
}

int run_validate(const std::vector<std::string>& inputs, const std::string& format_flag,
                 const std::string& transcription_tier) {
  CommonIo io;
  io.format_flag = format_flag;
  io.transcription_tier = transcription_tier;
  const std::vector<fs::path> files = expand_inputs(inputs);
  const tok::TokenizerConfig tok_cfg;

  std::size_t total = 0;
  for (const fs::path& path : files) {
    const Format fmt = input_format(io, path);
    const annot::Document doc = read_document(path, fmt, tok_cfg, transcription_tier, "");
    for (const annot::Violation& v : annot::validate(doc)) {
      std::cout << path.string() << ": " << v.tier << "[" << v.index << "]: " << v.rule << '\n';
      ++total;
    }
  }
  if (total == 0) {
    std::cout << "ok: " << files.size() << " file(s), no violations\n";
    return 0;
  }
  std::cout << total << " violation(s)\n";
  return 1;
}

std::vector<annot::Document> read_gold_corpus(const std::vector<std::string>& inputs,
                                              const CommonIo& io,
                                              const tok::TokenizerConfig& tok_cfg) {
  std::vector<annot::Document> corpus;
  for (const fs::path& path : expand_inputs(inputs)) {
    corpus.push_back(read_document(path, input_format(io, path), tok_cfg, io.transcription_tier,
                                   io.speaker_tier));
  }
  return corpus;
}

int run_train(const std::vector<std::string>& gold, const CommonIo& io,
              const ResourceOptions& res_opt, const crf::TrainingConfig& tcfg,
              int psu_threshold_ms, bool with_disfluency) {
  const pipe::PipelineResources res = load_pipeline_resources(res_opt, false);
  CommonIo gio = io;
  const std::vector<annot::Document> corpus = read_gold_corpus(gold, gio, res.tokenizer_config);

  const int threshold =
      psu_threshold_ms > 0 ? psu_threshold_ms : res.tokenizer_config.psu_threshold_ms;
  std::vector<crf::LabeledSequence> prelim, final_, disf;
  for (const annot::Document& doc : corpus) {
    for (auto& s :
         pipe::training_sequences(doc, res.lexicon, threshold, pipe::TrainingTarget::PrelimPos)) {
      prelim.push_back(std::move(s));
    }
    for (auto& s :
         pipe::training_sequences(doc, res.lexicon, threshold, pipe::TrainingTarget::FinalPos)) {
      final_.push_back(std::move(s));
    }
    if (with_disfluency) {
      for (auto& s : pipe::training_sequences(doc, res.lexicon, threshold,
                                              pipe::TrainingTarget::Disfluency)) {
        disf.push_back(std::move(s));
      }
    }
  }

  const auto templates = crf::default_templates();
  std::string log;
  const auto train_one = [&](const char* name, const std::vector<crf::LabeledSequence>& data,
                             const char* file) {
    crf::TrainingConfig cfg_one = tcfg;
    cfg_one.on_iteration = [&log, name](int iter, double obj) {
      log += std::string(name) + ".iteration." + std::to_string(iter) +
             ".objective=" + text::format_double_fixed(obj, 6) + "\n";
    };
    const crf::CrfModel model = crf::train(data, templates, cfg_one);
    const double objective = crf::objective_and_gradient(model, data, nullptr, tcfg.l2_sigma);
    write_file(fs::path(io.out_dir) / file, crf::save_model(model));
    log += std::string(name) + ": sequences=" + std::to_string(data.size()) +
           " labels=" + std::to_string(model.labels.size()) +
           " features=" + std::to_string(model.feature_blocks.size()) +
           " weights=" + std::to_string(model.weights.size()) +
           " objective=" + text::format_double_fixed(objective, 6) + "\n";
  };
  train_one("prelim-pos", prelim, "prelim-pos.crf");
  train_one("final-pos", final_, "final-pos.crf");
  if (with_disfluency) train_one("disfluency", disf, "disfluency.crf");

  write_file(fs::path(io.out_dir) / "training.log", log);
  std::cout << log;
  return 0;
}

int run_evaluate(const std::vector<std::string>& gold, const CommonIo& io,
                 const ResourceOptions& res_opt, eval::CrossValidationConfig cfg,
                 const std::string& report_path) {
  const pipe::PipelineResources res = load_pipeline_resources(res_opt, false);
  const std::vector<annot::Document> corpus = read_gold_corpus(gold, io, res.tokenizer_config);
  if (cfg.psu_threshold_ms <= 0) cfg.psu_threshold_ms = res.tokenizer_config.psu_threshold_ms;
  cfg.jobs = io.jobs;

  const eval::CrossValidationResult result = eval::cross_validate(corpus, res, cfg);
  const std::string report = eval::format_metrics_report(result);
  std::cout << report;
  if (!report_path.empty()) write_file(report_path, report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Six-tier annotation of time-aligned speech transcriptions"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Config file with the same keys as the flags");
  app.get_config_formatter_base()->section("");

  // annotate
  CommonIo an_io;
  ResourceOptions an_res;
  CLI::App* annotate = app.add_subcommand("annotate", "Annotate transcription files");
  add_io_options(annotate, &an_io, "Input files or directories (.TextGrid/.tsv)");
  add_resource_options(annotate, &an_res);

  // train
  CommonIo tr_io;
  ResourceOptions tr_res;
  std::vector<std::string> tr_gold;
  crf::TrainingConfig tr_cfg;
  int tr_threshold = 0;
  bool tr_disf = false;
  CLI::App* train = app.add_subcommand("train", "Train tagger models from gold documents");
  train->add_option("--gold,gold", tr_gold, "Gold annotated files or directories")->required();
  train->add_option("--out,-o", tr_io.out_dir, "Output directory for models")->required();
  train->add_option("--format", tr_io.format_flag, "Force input format: textgrid|tsv");
  train->add_option("--psu-threshold", tr_threshold, "Pause unit threshold in ms");
  train->add_option("--sigma", tr_cfg.l2_sigma, "L2 regularization sigma");
  train->add_option("--max-iterations", tr_cfg.max_iterations, "Optimizer iteration cap");
  train->add_option("--tol", tr_cfg.convergence_tol, "Relative objective convergence tolerance");
  train->add_flag("--with-disfluency-model", tr_disf, "Also train the disfluency model");
  add_resource_options(train, &tr_res);

  // evaluate
  CommonIo ev_io;
  ResourceOptions ev_res;
  std::vector<std::string> ev_gold;
  eval::CrossValidationConfig ev_cfg;
  std::string ev_report;
  bool ev_disf = false;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Cross-validated tagging metrics");
  evaluate->add_option("--gold,gold", ev_gold, "Gold annotated files or directories")->required();
  evaluate->add_option("--format", ev_io.format_flag, "Force input format: textgrid|tsv");
  evaluate->add_option("--k", ev_cfg.k, "Fold count")->check(CLI::PositiveNumber);
  evaluate->add_option("--seed", ev_cfg.seed, "Fold shuffle seed");
  evaluate->add_option("--psu-threshold", ev_cfg.psu_threshold_ms, "Pause unit threshold in ms");
  evaluate->add_option("--sigma", ev_cfg.training.l2_sigma, "L2 regularization sigma");
  evaluate->add_option("--max-iterations", ev_cfg.training.max_iterations,
                       "Optimizer iteration cap");
  evaluate->add_option("--jobs", ev_io.jobs, "Folds processed concurrently")
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--report", ev_report, "Also write the report to this file");
  evaluate->add_flag("--with-disfluency-model", ev_disf, "Train the disfluency model per fold");
  add_resource_options(evaluate, &ev_res);

  // convert
  CommonIo cv_io;
  std::string cv_to;
  CLI::App* convert = app.add_subcommand("convert", "Transcode between TextGrid and TSV");
  add_io_options(convert, &cv_io, "Input files or directories");
  convert->add_option("--to", cv_to, "Target format: textgrid|tsv")->required();

  // validate
  std::vector<std::string> va_in;
  std::string va_format;
  std::string va_tier = "transcription";
  CLI::App* validate = app.add_subcommand("validate", "Check tier congruence invariants");
  validate->add_option("--in,-i,in", va_in, "Input files or directories")->required();
  validate->add_option("--format", va_format, "Force input format: textgrid|tsv");
  validate->add_option("--transcription-tier", va_tier, "TextGrid transcription tier");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  }

  try {
    if (*annotate) return run_annotate(an_io, an_res);
    if (*train) {
      return run_train(tr_gold, tr_io, tr_res, tr_cfg, tr_threshold, tr_disf);
    }
    if (*evaluate) {
      ev_cfg.train_disfluency_model = ev_disf;
      return run_evaluate(ev_gold, ev_io, ev_res, ev_cfg, ev_report);
    }
    if (*convert) return run_convert(cv_io, cv_to);
    if (*validate) return run_validate(va_in, va_format, va_tier);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
