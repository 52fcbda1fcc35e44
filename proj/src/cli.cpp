#include "sketchsearch/cli.hpp"

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <memory>
#include <pthread.h>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "sketchsearch/bench.hpp"
#include "sketchsearch/category_mapping.hpp"
#include "sketchsearch/corpus.hpp"
#include "sketchsearch/doodle_io.hpp"
#include "sketchsearch/doodle_synth.hpp"
#include "sketchsearch/error.hpp"
#include "sketchsearch/neural_model.hpp"
#include "sketchsearch/query.hpp"
#include "sketchsearch/search.hpp"
#include "sketchsearch/service.hpp"
#include "sketchsearch/stroke_report.hpp"
#include "sketchsearch/synthetic_corpus.hpp"
#include "sketchsearch/template_recognizer.hpp"
#include "sketchsearch/wireframe.hpp"

namespace sketchsearch {

namespace {

struct RecognizerOptions {
    std::string backend = "template";
    std::string templates = std::string(SKETCHSEARCH_DATA_DIR) + "/templates.ndjson";
    std::string manifest = std::string(SKETCHSEARCH_DATA_DIR) + "/templates_manifest.json";
    std::string model;
    double temperature = kDefaultTemperature;

    void attach(CLI::App* cmd) {
        cmd->add_option("--backend", backend, "Recognizer: template or neural")
            ->check(CLI::IsMember({"template", "neural"}))
            ->envname("SKETCHSEARCH_BACKEND");
        cmd->add_option("--templates", templates, "Template doodle file")->envname("SKETCHSEARCH_TEMPLATES");
        cmd->add_option("--manifest", manifest, "Template manifest")->envname("SKETCHSEARCH_TEMPLATE_MANIFEST");
        cmd->add_option("--model", model, "Neural weights file (PSDW1)")->envname("SKETCHSEARCH_MODEL");
        cmd->add_option("--temperature", temperature, "Template softmax temperature")->check(CLI::PositiveNumber);
    }

    std::shared_ptr<const Recognizer> build() const {
        if (backend == "neural") {
            if (model.empty()) throw Error(ErrorCode::InvalidInput, "--model is required for the neural backend");
            return std::make_shared<NeuralRecognizer>(load_model(model));
        }
        return std::make_shared<TemplateRecognizer>(TemplateLibrary::load(templates, manifest), temperature);
    }
};

CategoryMapping load_mapping(const std::string& path) {
    return path.empty() ? CategoryMapping::defaults() : CategoryMapping::load(path);
}

std::vector<std::size_t> parse_k_list(const std::string& text) {
    std::vector<std::size_t> ks;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos || std::stoul(item) == 0) {
            throw CLI::ValidationError("--k", "expected a comma-separated list of positive integers");
        }
        ks.push_back(std::stoul(item));
    }
    if (ks.empty()) throw CLI::ValidationError("--k", "list is empty");
    return ks;
}

std::string fixed(double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
}

int cmd_index_build(const std::string& dir, const std::string& output, const std::string& mapping_path,
                    std::ostream& out) {
    const CorpusIndex index = ingest(dir, load_mapping(mapping_path));
    save_index(index, output);
    const auto& st = index.stats();
    out << "screens\t" << index.screen_count() << '\n'
        << "elements\t" << index.element_count() << '\n'
        << "unmapped\t" << st.unmapped_elements << '\n'
        << "invisible\t" << st.invisible_elements << '\n'
        << "malformed\t" << st.malformed_files << '\n';
    return kExitOk;
}

int cmd_classify(const std::string& path, const RecognizerOptions& ro, bool as_json, std::ostream& out) {
    const auto records = read_doodle_file(path);
    if (records.empty()) throw Error(ErrorCode::InvalidInput, path + " holds no sketches");
    const auto recognizer = ro.build();
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto p = recognizer->classify(records[i].strokes);
        if (as_json) {
            nlohmann::ordered_json j;
            j["record"] = i + 1;
            if (records[i].label) j["label"] = *records[i].label;
            j["top3"] = nlohmann::ordered_json::array();
            for (const auto& r : p.top) j["top3"].push_back({{"category", name(r.category)}, {"confidence", r.confidence}});
            out << j.dump() << '\n';
        } else {
            out << i + 1;
            for (const auto& r : p.top) out << '\t' << name(r.category) << '\t' << fixed(r.confidence, 4);
            out << '\n';
        }
    }
    return kExitOk;
}

int cmd_eval_topk(const std::string& sessions_path, const std::string& index_path, const std::string& k_text,
                  const std::string& report_path, unsigned threads, std::ostream& out, std::ostream& err) {
    const auto ks = parse_k_list(k_text);
    const auto sessions = read_snapshot_file(sessions_path);
    if (sessions.empty()) throw Error(ErrorCode::InvalidInput, sessions_path + " holds no sessions");
    const CorpusIndex index = load_index(index_path);
    SearchOptions options;
    options.threads = threads;

    std::vector<std::ptrdiff_t> ranks;
    std::size_t missing = 0;
    for (std::size_t i = 0; i < sessions.size(); ++i) {
        const auto& s = sessions[i];
        if (!s.target) throw Error(ErrorCode::InvalidInput, "session " + std::to_string(i + 1) + " has no target");
        const auto target = index.find(*s.target);
        if (target < 0) {
            err << "warning: session " << i + 1 << " targets unknown screen " << *s.target << "; counted as a miss\n";
            ++missing;
            ranks.push_back(-1);
            continue;
        }
        const auto ranking = rank_screens(build_query(s.elements, s.canvas), index, options);
        ranks.push_back(ranking.rank_of(static_cast<std::uint32_t>(target)));
    }

    nlohmann::ordered_json report;
    report["sessions"] = sessions.size();
    report["missing_targets"] = missing;
    report["topk"] = nlohmann::ordered_json::array();
    out << "sessions\t" << sessions.size() << '\n' << "k\thits\taccuracy\n";
    for (auto k : ks) {
        std::size_t hits = 0;
        for (auto r : ranks) hits += (r >= 0 && static_cast<std::size_t>(r) < k);
        const double acc = static_cast<double>(hits) / static_cast<double>(sessions.size());
        out << k << '\t' << hits << '\t' << fixed(acc, 4) << '\n';
        report["topk"].push_back({{"k", k}, {"hits", hits}, {"accuracy", acc}});
    }
    report["ranks"] = nlohmann::ordered_json::array();
    for (auto r : ranks) report["ranks"].push_back(r >= 0 ? nlohmann::ordered_json(r + 1) : nlohmann::ordered_json(nullptr));
    if (!report_path.empty()) write_text(report_path, report.dump(2) + "\n");
    return kExitOk;
}

int cmd_eval_strokes(const std::string& path, const std::string& format, const RecognizerOptions& ro,
                     std::ostream& out) {
    const auto records = read_doodle_file(path);
    if (records.empty()) throw Error(ErrorCode::InvalidInput, path + " holds no sketches");
    const auto report = stroke_count_report(records, *ro.build());
    out << (format == "json" ? format_report_json(report) : format_report_table(report));
    return kExitOk;
}

int cmd_templates(std::size_t per_category, std::size_t squiggles, std::uint64_t seed, const std::string& output,
                  const std::string& manifest, std::ostream& out) {
    std::array<std::size_t, kCategoryCount> counts;
    counts.fill(per_category);
    if (squiggles > 0) counts[index_of(Category::Squiggle)] = squiggles;
    const auto records = synthesize_library_records(counts, seed);
    write_doodle_file(output, records);
    write_template_manifest(manifest, manifest_from_labels(records));
    out << "templates\t" << records.size() << '\n';
    return kExitOk;
}

int cmd_synth_sketches(std::size_t per_category, std::uint64_t seed, double jitter, const std::string& output,
                       std::ostream& out) {
    Rng rng(seed);
    std::vector<DoodleRecord> records;
    for (auto c : kAllCategories) {
        for (std::size_t i = 0; i < per_category; ++i) {
            records.push_back({std::string(name(c)), perturb_doodle(synthesize_doodle(c, seed + 100000 + i), jitter, rng)});
        }
    }
    write_doodle_file(output, records);
    out << "sketches\t" << records.size() << '\n';
    return kExitOk;
}

int cmd_synth_corpus(const std::string& dir, std::size_t count, std::uint64_t seed, bool images,
                     const std::string& sessions_path, std::size_t queries, std::uint64_t query_seed,
                     std::ostream& out) {
    if (count == 0) throw Error(ErrorCode::InvalidInput, "--screens must be positive");
    const auto screens = synthesize_screens(count, seed);
    write_hierarchies(screens, dir);
    if (images) {
        for (const char* kind : {"thumb", "full"}) std::filesystem::create_directories(std::filesystem::path(dir) / kind);
        for (const auto& s : screens) {
            write_text((std::filesystem::path(dir) / "thumb" / (s.id + ".png")).string(),
                       encode_png(render_wireframe(s, 90, 160)));
            write_text((std::filesystem::path(dir) / "full" / (s.id + ".png")).string(),
                       encode_png(render_wireframe(s, 360, 640)));
        }
    }
    out << "screens\t" << screens.size() << '\n';
    if (!sessions_path.empty()) {
        const auto mapping = CategoryMapping::defaults();
        Rng rng(query_seed);
        std::ofstream f(sessions_path, std::ios::binary);
        for (std::size_t i = 0; i < queries; ++i) {
            const auto& s = screens[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(count) - 1))];
            f << format_snapshot(derive_session(to_document(s), mapping, {}, rng)) << '\n';
        }
        if (!f) throw Error(ErrorCode::Io, "cannot write " + sessions_path);
        out << "sessions\t" << queries << '\n';
    }
    return kExitOk;
}

int cmd_model_random(const std::string& output, std::uint64_t seed, bool zeros, float scale, std::ostream& out) {
    const NeuralModel model = zeros ? NeuralModel::zeros() : NeuralModel::random(seed, {}, scale);
    save_model(model, output);
    out << "layers\t" << model.layers().size() << '\n';
    return kExitOk;
}

int cmd_bench(const BenchOptions& bo, const RecognizerOptions& ro, std::ostream& out) {
    const auto recognizer = ro.build();
    const auto r = run_benchmark(bo, *recognizer);
    out << "screens\t" << r.screens << '\n'
        << "elements\t" << r.elements << '\n'
        << "build_seconds\t" << fixed(r.build_seconds, 3) << '\n'
        << "query_elements\t" << r.query_elements << '\n'
        << "metric\tmean_ms\tp95_ms\tmax_ms\n"
        << "search\t" << fixed(r.search.mean_ms, 3) << '\t' << fixed(r.search.p95_ms, 3) << '\t'
        << fixed(r.search.max_ms, 3) << '\n'
        << "classify\t" << fixed(r.classify.mean_ms, 3) << '\t' << fixed(r.classify.p95_ms, 3) << '\t'
        << fixed(r.classify.max_ms, 3) << '\n';
    return kExitOk;
}

struct ServeOptions {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string index;
    std::string screens;
    std::string feedback_log = "feedback.ndjson";
    long ttl = 3600;
    double w_pos = 0.7;
    double w_shape = 0.3;
    unsigned threads = 0;
};

int cmd_serve(const ServeOptions& so, const RecognizerOptions& ro, std::ostream& out) {
    auto index = std::make_shared<const CorpusIndex>(load_index(so.index));
    ServiceConfig config;
    config.session_ttl = std::chrono::seconds(so.ttl);
    config.screens_dir = so.screens;
    config.feedback_log = so.feedback_log;
    config.search.weights = {so.w_pos, so.w_shape};
    config.search.threads = so.threads;
    SearchService service(index, ro.build(), config);
    HttpServer server(service);

    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    const int port = server.bind(so.host, so.port);
    if (port < 0) throw Error(ErrorCode::Io, "cannot listen on " + so.host + ":" + std::to_string(so.port));
    out << "serving " << index->screen_count() << " screens on http://" << so.host << ':' << port << std::endl;

    std::jthread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        server.stop();
    });
    server.listen();
    if (waiter.joinable()) {
        pthread_kill(waiter.native_handle(), SIGTERM);
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sketch-based search over mobile app screens", "sketchsearch"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    // index build
    auto* index_cmd = app.add_subcommand("index", "Corpus index tools")->require_subcommand(1);
    auto* build = index_cmd->add_subcommand("build", "Ingest a directory of hierarchy files into an index");
    std::string corpus_dir, index_out, mapping_path;
    build->add_option("corpus_dir", corpus_dir, "Directory of *.json hierarchy files")->required();
    build->add_option("-o,--output", index_out, "Index file to write")->required();
    build->add_option("--mapping", mapping_path, "Category mapping JSON (default: built-in table)");

    // classify
    auto* classify = app.add_subcommand("classify", "Top-3 prediction for each sketch in a doodle file");
    std::string sketch_file;
    bool classify_json = false;
    RecognizerOptions ro;
    classify->add_option("sketch_file", sketch_file, "Doodle file, one JSON record per line")->required();
    classify->add_flag("--json", classify_json, "One JSON object per record");
    ro.attach(classify);

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluation harnesses")->require_subcommand(1);
    auto* topk = eval->add_subcommand("topk", "Top-k retrieval accuracy over session snapshots");
    std::string sessions_file, topk_index, k_text = "1,3,10", report_path;
    unsigned threads = 0;
    topk->add_option("sessions_file", sessions_file, "Session snapshots, one JSON object per line")->required();
    topk->add_option("index_file", topk_index, "Index built by `index build`")->required();
    topk->add_option("--k", k_text, "Comma-separated cut-offs")->capture_default_str();
    topk->add_option("--report", report_path, "Also write a JSON report here");
    topk->add_option("--threads", threads, "Scoring threads (0: all cores)");

    auto* strokes = eval->add_subcommand("strokes", "Mean true-class confidence by category and stroke count");
    std::string labeled_file, out_format = "table";
    strokes->add_option("labeled_sketches", labeled_file, "Labelled doodle file")->required();
    strokes->add_option("--out", out_format, "table or json")->check(CLI::IsMember({"table", "json"}))->capture_default_str();
    ro.attach(strokes);

    // serve
    auto* serve = app.add_subcommand("serve", "Run the HTTP back end");
    ServeOptions so;
    serve->add_option("--host", so.host, "Listen address")->envname("SKETCHSEARCH_HOST")->capture_default_str();
    serve->add_option("--port", so.port, "Listen port (0: any)")->envname("SKETCHSEARCH_PORT")->capture_default_str();
    serve->add_option("--index", so.index, "Index file")->envname("SKETCHSEARCH_INDEX")->required();
    serve->add_option("--screens", so.screens, "Directory with thumb/ and full/ screen images")
        ->envname("SKETCHSEARCH_SCREENS");
    serve->add_option("--feedback-log", so.feedback_log, "Append-only feedback log")
        ->envname("SKETCHSEARCH_FEEDBACK_LOG")->capture_default_str();
    serve->add_option("--session-ttl", so.ttl, "Idle session lifetime in seconds")
        ->envname("SKETCHSEARCH_SESSION_TTL")->check(CLI::PositiveNumber)->capture_default_str();
    serve->add_option("--w-position", so.w_pos, "Position weight")->envname("SKETCHSEARCH_W_POSITION")->capture_default_str();
    serve->add_option("--w-shape", so.w_shape, "Shape weight")->envname("SKETCHSEARCH_W_SHAPE")->capture_default_str();
    serve->add_option("--threads", so.threads, "Scoring threads (0: all cores)");
    ro.attach(serve);

    // generators
    auto* templates = app.add_subcommand("templates", "Template library tools")->require_subcommand(1);
    auto* generate = templates->add_subcommand("generate", "Write a procedural template library");
    std::size_t per_category = 16, squiggles = 40;
    std::uint64_t seed = 0;
    std::string tpl_out, tpl_manifest;
    generate->add_option("-o,--output", tpl_out, "Doodle file to write")->required();
    generate->add_option("--manifest", tpl_manifest, "Manifest file to write")->required();
    generate->add_option("--per-category", per_category, "Templates per category")->capture_default_str();
    generate->add_option("--squiggles", squiggles, "Squiggle templates (0: same as others)")->capture_default_str();
    generate->add_option("--seed", seed, "First variant seed")->capture_default_str();

    auto* synth = app.add_subcommand("synth", "Synthetic data generators")->require_subcommand(1);
    auto* corpus = synth->add_subcommand("corpus", "Generate hierarchy files (and optionally images and sessions)");
    std::string synth_dir, synth_sessions;
    std::size_t synth_count = 100, synth_queries = 100;
    std::uint64_t synth_seed = 1, query_seed = 7;
    bool synth_images = false;
    corpus->add_option("dir", synth_dir, "Output directory")->required();
    corpus->add_option("--screens", synth_count, "Number of screens")->capture_default_str();
    corpus->add_option("--seed", synth_seed, "Seed")->capture_default_str();
    corpus->add_flag("--images", synth_images, "Also write thumb/ and full/ PNG wireframes");
    corpus->add_option("--sessions", synth_sessions, "Write derived query sessions here");
    corpus->add_option("--queries", synth_queries, "Number of derived sessions")->capture_default_str();
    corpus->add_option("--query-seed", query_seed, "Seed for session derivation")->capture_default_str();

    auto* sketches = synth->add_subcommand("sketches", "Generate labelled, perturbed doodles");
    std::string sketch_out;
    std::size_t sketch_count = 10;
    double jitter = 0.03;
    std::uint64_t sketch_seed = 1;
    sketches->add_option("-o,--output", sketch_out, "Doodle file to write")->required();
    sketches->add_option("--per-category", sketch_count, "Sketches per category")->capture_default_str();
    sketches->add_option("--jitter", jitter, "Point jitter in unit-box units")->capture_default_str();
    sketches->add_option("--seed", sketch_seed, "Seed")->capture_default_str();

    auto* model = app.add_subcommand("model", "Neural weights tools")->require_subcommand(1);
    auto* random_model = model->add_subcommand("random", "Write an untrained weights file");
    std::string model_out;
    std::uint64_t model_seed = 1;
    bool zeros = false;
    float scale = 0.2f;
    random_model->add_option("-o,--output", model_out, "Weights file to write")->required();
    random_model->add_option("--seed", model_seed, "Seed")->capture_default_str();
    random_model->add_flag("--zeros", zeros, "All-zero weights");
    random_model->add_option("--scale", scale, "Uniform weight range")->capture_default_str();

    // bench
    auto* bench = app.add_subcommand("bench", "Time search and classification on a synthetic corpus");
    BenchOptions bo;
    RecognizerOptions bench_ro;
    bench_ro.attach(bench);
    bench->add_option("--screens", bo.screens, "Synthetic screens to index")->capture_default_str();
    bench->add_option("--seed", bo.seed, "Corpus and query seed")->capture_default_str();
    bench->add_option("--queries", bo.queries, "Timed searches")->capture_default_str();
    bench->add_option("--elements", bo.elements, "Elements per query")->capture_default_str();
    bench->add_option("--sketches", bo.sketches, "Timed classifications")->capture_default_str();
    bench->add_option("--threads", bo.threads, "Scoring threads (0: all cores)");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*build) return cmd_index_build(corpus_dir, index_out, mapping_path, out);
        if (*classify) return cmd_classify(sketch_file, ro, classify_json, out);
        if (*topk) return cmd_eval_topk(sessions_file, topk_index, k_text, report_path, threads, out, err);
        if (*strokes) return cmd_eval_strokes(labeled_file, out_format, ro, out);
        if (*serve) return cmd_serve(so, ro, out);
        if (*generate) return cmd_templates(per_category, squiggles, seed, tpl_out, tpl_manifest, out);
        if (*corpus) {
            return cmd_synth_corpus(synth_dir, synth_count, synth_seed, synth_images, synth_sessions, synth_queries,
                                    query_seed, out);
        }
        if (*sketches) return cmd_synth_sketches(sketch_count, sketch_seed, jitter, sketch_out, out);
        if (*bench) return cmd_bench(bo, bench_ro, out);
        if (*random_model) return cmd_model_random(model_out, model_seed, zeros, scale, out);
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace sketchsearch
