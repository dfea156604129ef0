#pragma once

// Command-line front end: stats, train, evaluate, predict, grid.
//
// Exit codes: 0 success, 1 usage error, 2 data / file error, 3 numeric failure.

#include <fstream>
#include <iostream>
#include <span>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corpus.hpp"
#include "eval.hpp"
#include "model_io.hpp"
#include "pipeline.hpp"
#include "preprocess.hpp"
#include "report.hpp"

namespace hkbc {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitNumeric = 3 };

struct RunConfig {
    std::vector<std::string> data;
    std::string delimiter = "tab";
    bool has_header = false;
    std::uint64_t seed = 42;

    // preprocessing
    bool keep_stopwords = false;
    std::string stopword_file;
    bool keep_markers = false;
    bool no_lowercase = false;

    // pipeline
    std::string analyzer = "union";
    std::vector<int> word_ngrams{1, 2};
    std::vector<int> char_ngrams{1, 5};
    bool joint_norm = false;
    std::string model = "mnb";
    double alpha = 1.0;
    double C = 1.0;
    int max_iter = 1000;
    double tol = 1e-4;
    int n_estimators = 100;
    int max_depth = 16;
    std::size_t embed_dim = 200;
    int epochs = 10;
    std::size_t batch_size = 32;
    double learning_rate = 0.001;

    // evaluation
    std::string eval_mode = "both";
    std::size_t folds = 5;
    double test_fraction = 0.30;
    std::string report_path;

    // stats
    bool after_clean = false;
    bool feature_counts = false;

    // train / predict
    std::string model_out;
    std::string model_file;
    std::string output;
};

namespace cli_detail {

inline LoadOptions load_options(const RunConfig& rc, bool labeled) {
    LoadOptions o;
    o.delimiter = rc.delimiter == "comma" ? ',' : '\t';
    o.has_header = rc.has_header;
    o.labeled = labeled;
    return o;
}

/// All --data files, concatenated in order.
inline Dataset load_all(const RunConfig& rc, bool labeled = true) {
    if (rc.data.empty()) throw UsageError("at least one --data file is required");
    Dataset ds = load_dataset(rc.data.front(), load_options(rc, labeled));
    for (std::size_t i = 1; i < rc.data.size(); ++i) ds = concat(ds, load_dataset(rc.data[i], load_options(rc, labeled)));
    return ds;
}

inline PreprocessConfig preprocess_config(const RunConfig& rc) {
    PreprocessConfig p;
    p.remove_stopwords = !rc.keep_stopwords;
    if (!rc.stopword_file.empty()) p.stopwords = load_stopwords(rc.stopword_file);
    p.strip_social_markers = !rc.keep_markers;
    p.lowercase = !rc.no_lowercase;
    p.validate();
    return p;
}

inline NgramSpec ngram_spec(NgramMode mode, const std::vector<int>& range) {
    NgramSpec s{mode, range.at(0), range.at(1)};
    s.validate();
    return s;
}

inline PipelineSpec pipeline_spec(const RunConfig& rc, ModelKind kind, Analyzer analyzer) {
    PipelineSpec spec;
    spec.analyzer = analyzer;
    spec.word = ngram_spec(NgramMode::word, rc.word_ngrams);
    spec.chars = ngram_spec(NgramMode::character, rc.char_ngrams);
    spec.norm = rc.joint_norm ? BlockNorm::joint : BlockNorm::per_block;
    spec.model = kind;
    spec.mnb.alpha = rc.alpha;
    spec.mnb.validate();
    for (auto* lc : {&spec.svc, &spec.lr}) {
        lc->C = rc.C;
        lc->max_iter = rc.max_iter;
        lc->tol = rc.tol;
        lc->seed = rc.seed;
        lc->validate();
    }
    spec.forest.n_estimators = rc.n_estimators;
    spec.forest.max_depth = rc.max_depth;
    spec.forest.seed = rc.seed;
    spec.forest.validate();
    spec.nn.embed_dim = rc.embed_dim;
    spec.nn.epochs = rc.epochs;
    spec.nn.batch_size = rc.batch_size;
    spec.nn.learning_rate = rc.learning_rate;
    spec.nn.seed = rc.seed;
    spec.nn.validate();
    spec.preprocess = preprocess_config(rc);
    return spec;
}

inline PipelineSpec pipeline_spec(const RunConfig& rc) {
    return pipeline_spec(rc, *parse_model_kind(rc.model), *parse_analyzer(rc.analyzer));
}

inline std::string features_label(const PipelineSpec& spec) {
    const auto range = [](const NgramSpec& s) { return "(" + std::to_string(s.lo) + "," + std::to_string(s.hi) + ")"; };
    if (spec.model == ModelKind::nn) return "Custom Word Embedding";
    switch (spec.analyzer) {
        case Analyzer::word: return "Word n-gram " + range(spec.word);
        case Analyzer::character: return "Char n-gram " + range(spec.chars);
        case Analyzer::word_char_union: return "Word " + range(spec.word) + " + Char " + range(spec.chars);
    }
    return {};
}

inline std::string classifier_label(ModelKind k) {
    switch (k) {
        case ModelKind::svc: return "SVC";
        case ModelKind::mnb: return "MNB";
        case ModelKind::lr: return "LR";
        case ModelKind::rfc: return "RFC";
        case ModelKind::ensemble: return "Ensemble";
        case ModelKind::nn: return "NN Model";
    }
    return {};
}

inline Json spec_json(const PipelineSpec& spec) {
    Json j{{"model", to_string(spec.model)}, {"features", features_label(spec)}};
    if (spec.model != ModelKind::nn) {
        j["analyzer"] = to_string(spec.analyzer);
        if (spec.analyzer != Analyzer::character) j["word_ngrams"] = {spec.word.lo, spec.word.hi};
        if (spec.analyzer != Analyzer::word) j["char_ngrams"] = {spec.chars.lo, spec.chars.hi};
        j["normalization"] = spec.norm == BlockNorm::joint ? "joint" : "per_block";
    }
    return j;
}

inline EvalConfig eval_config(const RunConfig& rc) {
    EvalConfig e;
    e.folds = rc.folds;
    e.test_fraction = rc.test_fraction;
    e.seed = rc.seed;
    e.validate();
    return e;
}

inline void write_report(const RunConfig& rc, const Json& report) {
    if (rc.report_path.empty()) return;
    if (std::filesystem::is_directory(rc.report_path)) throw IoError("'" + rc.report_path + "' is a directory");
    std::ofstream out(rc.report_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write report '" + rc.report_path + "'");
    out << report.dump(2) << '\n';
    if (!out) throw IoError("write to '" + rc.report_path + "' failed");
}

inline Dataset cleaned_dataset(const RunConfig& rc, const PreprocessConfig& pre) {
    const Dataset raw = load_all(rc);
    Dataset ds = preprocess_dataset(raw, pre);
    if (ds.empty()) throw DataError("no records left after cleaning");
    return ds;
}

struct EvalOutcome {
    std::optional<HoldoutReport> holdout;
    std::optional<CvReport> cv;
};

inline EvalOutcome evaluate_spec(const Dataset& ds, const PipelineSpec& spec, const EvalConfig& ecfg,
                                 const std::string& mode) {
    EvalOutcome o;
    if (mode == "holdout" || mode == "both") o.holdout = holdout_evaluate(ds, ecfg, pipeline_trainer(spec));
    if (mode == "cv" || mode == "both") o.cv = cross_validate(ds, ecfg, pipeline_trainer(spec));
    return o;
}

inline int cmd_stats(const RunConfig& rc, std::ostream& out) {
    const PreprocessConfig pre = preprocess_config(rc);
    Json report{{"command", "stats"}, {"datasets", Json::array()}};
    std::vector<Dataset> sets;
    for (const auto& path : rc.data) sets.push_back(load_dataset(path, load_options(rc, true)));
    if (sets.size() > 1) {
        Dataset all = sets.front();
        for (std::size_t i = 1; i < sets.size(); ++i) all = concat(all, sets[i]);
        sets.push_back(std::move(all));
    }
    for (auto& ds : sets) {
        if (rc.after_clean) ds = preprocess_dataset(ds, pre);
        const StatsReport s = dataset_stats(ds);
        print_stats(out, s);
        Json entry = to_json(s);
        if (rc.feature_counts) {
            const Dataset clean = rc.after_clean ? ds : preprocess_dataset(ds, pre);
            if (clean.empty()) throw DataError("no records left after cleaning '" + ds.name + "'");
            const auto texts = clean.texts();
            const NgramSpec word = ngram_spec(NgramMode::word, rc.word_ngrams);
            const NgramSpec chars = ngram_spec(NgramMode::character, rc.char_ngrams);
            const std::vector<NgramSpec> both{word, chars};
            const auto wd = fit_tfidf(texts, std::span(&word, 1)).dimension();
            const auto cd = fit_tfidf(texts, std::span(&chars, 1)).dimension();
            const auto ud = fit_tfidf(texts, both).dimension();
            const WordIndex index = build_word_index(texts);
            out << "  word n-gram (" << word.lo << "," << word.hi << ") features: " << wd << "\n";
            out << "  char n-gram (" << chars.lo << "," << chars.hi << ") features: " << cd << "\n";
            out << "  combined features: " << ud << "\n";
            out << "  unique words: " << index.size() << " (embedding rows " << index.capacity() << ")\n";
            out << "  longest sentence: " << longest_sentence(texts) << " words\n";
            entry["features"] = Json{{"word", wd}, {"char", cd}, {"union", ud}, {"unique_words", index.size()},
                                     {"word_index_capacity", index.capacity()},
                                     {"longest_sentence", longest_sentence(texts)}};
        }
        report["datasets"].push_back(std::move(entry));
    }
    write_report(rc, report);
    return kExitOk;
}

inline int cmd_train(const RunConfig& rc, std::ostream& out) {
    const PipelineSpec spec = pipeline_spec(rc);
    const Dataset ds = cleaned_dataset(rc, spec.preprocess);
    const Pipeline p = fit_pipeline(ds, spec);
    save_model(p, rc.model_out);
    out << "trained " << classifier_label(spec.model) << " on " << ds.size() << " records ("
        << features_label(spec) << ")";
    if (const auto* v = p.vectorizer()) out << ", " << v->dimension() << " features";
    out << "\nmodel written to " << rc.model_out << "\n";
    return kExitOk;
}

inline int cmd_evaluate(const RunConfig& rc, std::ostream& out) {
    const PipelineSpec spec = pipeline_spec(rc);
    const EvalConfig ecfg = eval_config(rc);
    const Dataset ds = cleaned_dataset(rc, spec.preprocess);
    const EvalOutcome o = evaluate_spec(ds, spec, ecfg, rc.eval_mode);

    Json report{{"command", "evaluate"}, {"dataset", Json{{"name", ds.name}, {"records", ds.size()}}},
                {"pipeline", spec_json(spec)}, {"seed", rc.seed}};
    const ResultRow row_base{classifier_label(spec.model), features_label(spec), {}};
    if (o.holdout) {
        auto row = row_base;
        row.metrics = o.holdout->metrics;
        print_results(out,
                      "Holdout (" + std::to_string(o.holdout->train_size) + " train / " +
                          std::to_string(o.holdout->test_size) + " test)",
                      {row});
        print_confusion(out, o.holdout->confusion);
        report["holdout"] = to_json(*o.holdout);
    }
    if (o.cv) {
        std::vector<ResultRow> rows;
        for (std::size_t f = 0; f < o.cv->folds.size(); ++f) {
            rows.push_back({"fold " + std::to_string(f + 1), row_base.features, o.cv->folds[f]});
        }
        rows.push_back({"mean", row_base.features, o.cv->mean});
        rows.push_back({"std", row_base.features, o.cv->stddev});
        print_results(out, std::to_string(ecfg.folds) + "-fold cross-validation (" + row_base.classifier + ")", rows);
        print_confusion(out, o.cv->pooled);
        report["cv"] = to_json(*o.cv);
    }
    write_report(rc, report);
    return kExitOk;
}

inline int cmd_predict(const RunConfig& rc, std::ostream& out) {
    const Pipeline p = load_model(rc.model_file);
    const Dataset ds = load_all(rc, false);
    std::ofstream file;
    std::ostream* sink = &out;
    if (!rc.output.empty()) {
        if (std::filesystem::is_directory(rc.output)) throw IoError("'" + rc.output + "' is a directory");
        file.open(rc.output, std::ios::binary | std::ios::trunc);
        if (!file) throw IoError("cannot write '" + rc.output + "'");
        sink = &file;
    }
    for (const auto& r : ds.records) *sink << r.id << '\t' << to_string(p.predict(r.text)) << '\n';
    if (!*sink) throw IoError("writing predictions failed");
    return kExitOk;
}

inline int cmd_grid(const RunConfig& rc, std::ostream& out) {
    const EvalConfig ecfg = eval_config(rc);
    const PipelineSpec base = pipeline_spec(rc);
    const Dataset ds = cleaned_dataset(rc, base.preprocess);

    std::vector<PipelineSpec> specs;
    for (const auto kind : kModelKinds) {
        if (kind == ModelKind::nn) continue;
        for (const auto a : kAnalyzers) specs.push_back(pipeline_spec(rc, kind, a));
    }
    specs.push_back(pipeline_spec(rc, ModelKind::nn, Analyzer::word));

    std::vector<ResultRow> holdout_rows, cv_rows;
    Json rows = Json::array();
    for (const auto& spec : specs) {
        const EvalOutcome o = evaluate_spec(ds, spec, ecfg, rc.eval_mode);
        Json row{{"pipeline", spec_json(spec)}};
        if (o.holdout) {
            holdout_rows.push_back({classifier_label(spec.model), features_label(spec), o.holdout->metrics});
            row["holdout"] = to_json(*o.holdout);
        }
        if (o.cv) {
            cv_rows.push_back({classifier_label(spec.model), features_label(spec), o.cv->mean});
            row["cv"] = to_json(*o.cv);
        }
        rows.push_back(std::move(row));
    }
    if (!holdout_rows.empty()) print_results(out, "Holdout results", holdout_rows);
    if (!cv_rows.empty()) print_results(out, std::to_string(ecfg.folds) + "-fold cross-validation means", cv_rows);
    write_report(rc, Json{{"command", "grid"},
                          {"dataset", Json{{"name", ds.name}, {"records", ds.size()}}},
                          {"seed", rc.seed},
                          {"rows", rows}});
    return kExitOk;
}

inline void add_data_options(CLI::App& cmd, RunConfig& rc) {
    cmd.add_option("--data", rc.data, "Dataset file (repeat to concatenate)")->required();
    cmd.add_option("--delimiter", rc.delimiter, "Field delimiter")->check(CLI::IsMember({"tab", "comma"}));
    cmd.add_flag("--header", rc.has_header, "Skip the first line of each file");
}

inline void add_preprocess_options(CLI::App& cmd, RunConfig& rc) {
    cmd.add_flag("--keep-stopwords", rc.keep_stopwords, "Do not remove English stopwords");
    cmd.add_option("--stopwords", rc.stopword_file, "Stopword list (one word per line)");
    cmd.add_flag("--keep-markers", rc.keep_markers, "Keep @user / #tag tokens");
    cmd.add_flag("--no-lowercase", rc.no_lowercase, "Preserve letter case");
}

inline void add_seed_option(CLI::App& cmd, RunConfig& rc) {
    cmd.add_option("--seed", rc.seed, "Random seed")->envname("HKBC_SEED");
}

inline void add_ngram_options(CLI::App& cmd, RunConfig& rc) {
    cmd.add_option("--word-ngrams", rc.word_ngrams, "Word n-gram range LO HI")->expected(2);
    cmd.add_option("--char-ngrams", rc.char_ngrams, "Character n-gram range LO HI")->expected(2);
}

inline void add_pipeline_options(CLI::App& cmd, RunConfig& rc, bool with_model) {
    if (with_model) {
        cmd.add_option("--model", rc.model, "Classifier")
            ->check(CLI::IsMember({"svc", "mnb", "lr", "rfc", "ensemble", "nn"}));
        cmd.add_option("--analyzer", rc.analyzer, "Feature set")->check(CLI::IsMember({"word", "char", "union"}));
    }
    add_ngram_options(cmd, rc);
    cmd.add_flag("--joint-norm", rc.joint_norm, "Normalise the word+char union jointly instead of per block");
    cmd.add_option("--alpha", rc.alpha, "MNB smoothing");
    cmd.add_option("--C", rc.C, "Inverse regularisation strength for SVC / LR");
    cmd.add_option("--max-iter", rc.max_iter, "Optimizer iteration cap for SVC / LR");
    cmd.add_option("--tol", rc.tol, "Relative objective tolerance for SVC / LR");
    cmd.add_option("--n-estimators", rc.n_estimators, "Trees in the random forest");
    cmd.add_option("--max-depth", rc.max_depth, "Maximum tree depth");
    cmd.add_option("--embed-dim", rc.embed_dim, "Embedding width for the NN model");
    cmd.add_option("--epochs", rc.epochs, "NN training epochs");
    cmd.add_option("--batch-size", rc.batch_size, "NN mini-batch size");
    cmd.add_option("--learning-rate", rc.learning_rate, "NN Adam learning rate");
    add_preprocess_options(cmd, rc);
    add_seed_option(cmd, rc);
}

inline void add_eval_options(CLI::App& cmd, RunConfig& rc) {
    cmd.add_option("--eval", rc.eval_mode, "Evaluation protocol")->check(CLI::IsMember({"cv", "holdout", "both"}));
    cmd.add_option("--folds", rc.folds, "Cross-validation folds");
    cmd.add_option("--test-fraction", rc.test_fraction, "Holdout test fraction");
    cmd.add_option("--report", rc.report_path, "Write a JSON report here");
}

}  // namespace cli_detail

/// Runs one CLI invocation. args excludes the program name.
inline int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    RunConfig rc;
    CLI::App app{"Offensive-language classification toolkit for code-mixed text", "hkbc"};
    app.require_subcommand(1, 1);

    auto* stats = app.add_subcommand("stats", "Label statistics (and optional feature counts) per dataset");
    cli_detail::add_data_options(*stats, rc);
    cli_detail::add_preprocess_options(*stats, rc);
    cli_detail::add_ngram_options(*stats, rc);
    stats->add_flag("--after-clean", rc.after_clean, "Count records after cleaning");
    stats->add_flag("--features", rc.feature_counts, "Report n-gram vocabulary sizes and word counts");
    stats->add_option("--report", rc.report_path, "Write a JSON report here");

    auto* train = app.add_subcommand("train", "Fit a pipeline and write a model file");
    cli_detail::add_data_options(*train, rc);
    cli_detail::add_pipeline_options(*train, rc, true);
    train->add_option("--out", rc.model_out, "Model file to write")->required();

    auto* evaluate = app.add_subcommand("evaluate", "Holdout and/or cross-validated evaluation");
    cli_detail::add_data_options(*evaluate, rc);
    cli_detail::add_pipeline_options(*evaluate, rc, true);
    cli_detail::add_eval_options(*evaluate, rc);

    auto* predict_cmd = app.add_subcommand("predict", "Label an unlabeled id/text file");
    cli_detail::add_data_options(*predict_cmd, rc);
    predict_cmd->add_option("--model-file", rc.model_file, "Model written by 'train'")->required();
    predict_cmd->add_option("--output", rc.output, "Write id<TAB>label lines here instead of stdout");

    auto* grid = app.add_subcommand("grid", "Every classifier on every feature set");
    cli_detail::add_data_options(*grid, rc);
    cli_detail::add_pipeline_options(*grid, rc, false);
    cli_detail::add_eval_options(*grid, rc);
    rc.eval_mode = "holdout";
    grid->preparse_callback([&](std::size_t) { rc.eval_mode = "holdout"; });
    evaluate->preparse_callback([&](std::size_t) { rc.eval_mode = "both"; });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (stats->parsed()) return cli_detail::cmd_stats(rc, out);
        if (train->parsed()) return cli_detail::cmd_train(rc, out);
        if (evaluate->parsed()) return cli_detail::cmd_evaluate(rc, out);
        if (predict_cmd->parsed()) return cli_detail::cmd_predict(rc, out);
        if (grid->parsed()) return cli_detail::cmd_grid(rc, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::out_of_range& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace hkbc
