// sepselect: feature selection by the spatially-aware separability
// criterion, with a built-in evaluation harness (kNN / k-means NMI curves)
// and Friedman/Nemenyi statistics over score tables.

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sepselect/dataset.hpp"
#include "sepselect/evaluation.hpp"
#include "sepselect/parallel.hpp"
#include "sepselect/selector.hpp"
#include "sepselect/stats.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace sepselect;

namespace {

const std::vector<double> kParamGrid = {0.0100, 0.0178, 0.0316, 0.0562, 0.1000,
                                        0.1778, 0.3162, 0.5623, 1.0000};

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) return "0";
    return std::string(buf, ptr);
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void ensure_out_dir(const std::string& out) {
    if (out.empty()) throw std::invalid_argument("--out directory is required");
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out);
}

// Options shared by the subcommands. Field names double as the
// config.echo.json keys.
struct Options {
    std::string config;
    std::string input;
    std::string label;
    bool has_header = true;
    bool normalize = true;
    double alpha = 1.0;
    double beta = 1.0;
    std::string variant = "full";
    int k = 0;
    std::string ranking;
    std::vector<std::string> metrics = {"knn"};
    int knn_k = 5;
    int folds = 10;
    std::uint64_t seed = 0;
    int max_top = 150;
    bool grid = false;
    std::string scores;
    double stat_alpha = 0.05;
    double q_alpha = 0.0;  // 0 = look up from the built-in table
    bool lower_is_better = false;
    double critical_value = 0.0;  // 0 = not supplied
    std::string out;
};

json echo_select(const Options& o) {
    json j;
    j["command"] = "select";
    j["input"] = o.input;
    j["label"] = o.label;
    j["has_header"] = o.has_header;
    j["normalize"] = o.normalize;
    j["alpha"] = o.alpha;
    j["beta"] = o.beta;
    j["variant"] = o.variant;
    j["k"] = o.k;
    j["out"] = o.out;
    return j;
}

json echo_curve(const Options& o) {
    json j;
    j["command"] = "curve";
    j["input"] = o.input;
    j["label"] = o.label;
    j["has_header"] = o.has_header;
    j["normalize"] = o.normalize;
    j["ranking"] = o.ranking;
    j["metrics"] = o.metrics;
    j["knn_k"] = o.knn_k;
    j["folds"] = o.folds;
    j["seed"] = o.seed;
    j["max_top"] = o.max_top;
    j["grid"] = o.grid;
    if (o.grid) {
        j["variant"] = o.variant;
        j["k"] = o.k;
    }
    j["out"] = o.out;
    return j;
}

json echo_stats(const Options& o) {
    json j;
    j["command"] = "stats";
    j["scores"] = o.scores;
    j["stat_alpha"] = o.stat_alpha;
    j["q_alpha"] = o.q_alpha;
    j["lower_is_better"] = o.lower_is_better;
    j["critical_value"] = o.critical_value;
    j["out"] = o.out;
    return j;
}

// Pre-scan argv for --config and load defaults from a previous echo file;
// flags given on the command line still override them.
void apply_config_file(int argc, char** argv, Options& o) {
    std::string path;
    for (int i = 1; i < argc - 1; ++i)
        if (std::string(argv[i]) == "--config") path = argv[i + 1];
    if (path.empty()) return;

    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j = json::parse(in);

    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
    };
    get("input", o.input);
    get("label", o.label);
    get("has_header", o.has_header);
    get("normalize", o.normalize);
    get("alpha", o.alpha);
    get("beta", o.beta);
    get("variant", o.variant);
    get("k", o.k);
    get("ranking", o.ranking);
    get("metrics", o.metrics);
    get("knn_k", o.knn_k);
    get("folds", o.folds);
    get("seed", o.seed);
    get("max_top", o.max_top);
    get("grid", o.grid);
    get("scores", o.scores);
    get("stat_alpha", o.stat_alpha);
    get("q_alpha", o.q_alpha);
    get("lower_is_better", o.lower_is_better);
    get("critical_value", o.critical_value);
    get("out", o.out);
}

Dataset load_input(const Options& o) {
    if (o.input.empty()) throw std::invalid_argument("--input is required");
    if (o.label.empty()) throw std::invalid_argument("--label is required");
    Dataset d = load_csv(o.input, o.label, o.has_header);
    if (o.normalize) return minmax_normalize(d);
    return d;
}

SeparabilityParams make_params(const Options& o) {
    SeparabilityParams params;
    params.alpha = o.alpha;
    params.beta = o.beta;
    params.variant = variant_from_string(o.variant);
    params.validate();
    return params;
}

json score_json(const SeparabilityScore& s) {
    json j;
    j["theta_dis"] = s.theta_dis;
    j["theta_dir"] = s.theta_dir;
    j["lambda_dis"] = s.lambda_dis;
    j["lambda_dir"] = s.lambda_dir;
    j["sep"] = s.sep;
    return j;
}

void write_trace_outputs(const Dataset& d, const SelectionTrace& trace, const Options& o) {
    json tj;
    tj["k"] = trace.k;
    tj["params"] = {{"alpha", trace.params.alpha},
                    {"beta", trace.params.beta},
                    {"variant", to_string(trace.params.variant)},
                    {"eps_norm", trace.params.eps_norm},
                    {"eps_div", trace.params.eps_div}};
    tj["candidate_evaluations"] = trace.candidate_evaluations;
    tj["steps"] = json::array();
    for (std::size_t t = 0; t < trace.steps.size(); ++t) {
        const auto& step = trace.steps[t];
        json sj;
        sj["rank"] = t + 1;
        sj["feature_index"] = step.feature_index;
        sj["feature_name"] = d.feature_names()[step.feature_index];
        sj["gain"] = step.gain;
        sj["score"] = score_json(step.score_after);
        tj["steps"].push_back(sj);
    }
    write_file(fs::path(o.out) / "trace.json", tj.dump(2) + "\n");

    std::ostringstream ranking;
    ranking << "rank,feature_index,feature_name,gain\n";
    for (std::size_t t = 0; t < trace.steps.size(); ++t) {
        const auto& step = trace.steps[t];
        ranking << (t + 1) << ',' << step.feature_index << ','
                << d.feature_names()[step.feature_index] << ',' << format_double(step.gain)
                << '\n';
    }
    write_file(fs::path(o.out) / "ranking.csv", ranking.str());

    // ascending index mask for external rendering of image features
    std::vector<int> mask;
    for (const auto& step : trace.steps) mask.push_back(step.feature_index);
    std::sort(mask.begin(), mask.end());
    std::ostringstream mask_csv;
    mask_csv << "feature_index\n";
    for (int idx : mask) mask_csv << idx << '\n';
    write_file(fs::path(o.out) / "mask.csv", mask_csv.str());
}

int cmd_select(const Options& o) {
    ensure_out_dir(o.out);
    Dataset d = load_input(o);
    auto part = partition_by_class(d);
    SeparabilityParams params = make_params(o);
    if (o.k < 1) throw std::invalid_argument("--k must be at least 1");

    int workers = resolve_workers(0);
    SelectionTrace trace = select(d, part, o.k, params, workers);
    write_trace_outputs(d, trace, o);
    write_file(fs::path(o.out) / "config.echo.json", echo_select(o).dump(2) + "\n");
    return 0;
}

std::vector<int> read_ranking(const std::string& path, std::size_t m) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open ranking file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty ranking file: " + path);

    int col = -1;
    {
        std::stringstream header(line);
        std::string cell;
        int idx = 0;
        while (std::getline(header, cell, ',')) {
            if (cell == "feature_index") col = idx;
            ++idx;
        }
    }
    if (col < 0) throw std::invalid_argument("ranking file lacks a feature_index column");

    std::vector<int> features;
    std::vector<char> seen(m, 0);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        for (int c = 0; c <= col; ++c)
            if (!std::getline(row, cell, ','))
                throw std::invalid_argument("short row in ranking file");
        int f = -1;
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), f);
        if (ec != std::errc{} || ptr != cell.data() + cell.size())
            throw std::invalid_argument("bad feature_index '" + cell + "' in ranking file");
        if (f < 0 || static_cast<std::size_t>(f) >= m)
            throw std::invalid_argument("feature_index " + std::to_string(f) +
                                        " out of range for this dataset");
        if (seen[f]) throw std::invalid_argument("duplicate feature_index " + std::to_string(f));
        seen[f] = 1;
        features.push_back(f);
    }
    if (features.empty()) throw std::invalid_argument("ranking file has no rows");
    return features;
}

SelectionTrace trace_from_features(const std::vector<int>& features) {
    SelectionTrace trace;
    trace.k = static_cast<int>(features.size());
    for (int f : features) trace.steps.push_back({f, 0.0, {}});
    return trace;
}

EvalConfig make_eval_config(const Options& o) {
    EvalConfig cfg;
    cfg.knn_k = o.knn_k;
    cfg.folds = o.folds;
    cfg.seed = o.seed;
    cfg.max_top = o.max_top;
    cfg.validate();
    return cfg;
}

std::string curve_csv(const EvaluationCurve& curve) {
    std::ostringstream out;
    out << "t,value\n";
    for (std::size_t t = 0; t < curve.values.size(); ++t)
        out << (t + 1) << ',' << format_double(curve.values[t]) << '\n';
    return out.str();
}

// per-point variance of the per-fold accuracies (diagnostic sidecar)
void write_curve_files(const fs::path& out_dir, const EvaluationCurve& curve) {
    std::string name = to_string(curve.metric);
    write_file(out_dir / ("curve_" + name + ".csv"), curve_csv(curve));
    if (!curve.fold_variance.empty()) {
        std::ostringstream diag;
        diag << "t,fold_variance\n";
        for (std::size_t t = 0; t < curve.fold_variance.size(); ++t)
            diag << (t + 1) << ',' << format_double(curve.fold_variance[t]) << '\n';
        write_file(out_dir / ("curve_" + name + "_folds.csv"), diag.str());
    }
}

int cmd_curve(const Options& o) {
    ensure_out_dir(o.out);
    Dataset d = load_input(o);
    EvalConfig cfg = make_eval_config(o);
    int workers = resolve_workers(0);

    std::vector<Metric> metrics;
    for (const auto& name : o.metrics) metrics.push_back(metric_from_string(name));
    if (metrics.empty()) throw std::invalid_argument("at least one --metric is required");

    std::vector<std::string> warnings;
    json summary = json::array();

    if (o.grid) {
        if (o.k < 1) throw std::invalid_argument("--grid needs --k");
        auto part = partition_by_class(d);
        Variant variant = variant_from_string(o.variant);

        struct Cell {
            double alpha, beta;
            std::vector<EvaluationCurve> curves;  // one per metric
        };
        std::vector<Cell> cells;
        for (double a : kParamGrid)
            for (double b : kParamGrid) cells.push_back({a, b, {}});

        parallel_chunks(cells.size(), workers, [&](std::size_t begin, std::size_t end) {
            for (std::size_t c = begin; c < end; ++c) {
                SeparabilityParams params;
                params.alpha = cells[c].alpha;
                params.beta = cells[c].beta;
                params.variant = variant;
                SelectionTrace trace = select(d, part, o.k, params, 1);
                for (Metric metric : metrics)
                    cells[c].curves.push_back(
                        performance_curve(d, trace, metric, cfg, 1, nullptr));
            }
        });

        std::ostringstream grid_csv;
        grid_csv << "alpha,beta,metric,max,ave\n";
        for (const auto& cell : cells)
            for (std::size_t mi = 0; mi < metrics.size(); ++mi)
                grid_csv << format_double(cell.alpha) << ',' << format_double(cell.beta) << ','
                         << to_string(metrics[mi]) << ','
                         << format_double(cell.curves[mi].max_value) << ','
                         << format_double(cell.curves[mi].ave_value) << '\n';
        write_file(fs::path(o.out) / "grid.csv", grid_csv.str());

        for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
            std::size_t best = 0;
            for (std::size_t c = 1; c < cells.size(); ++c)
                if (cells[c].curves[mi].max_value > cells[best].curves[mi].max_value) best = c;
            json entry;
            entry["metric"] = to_string(metrics[mi]);
            entry["alpha"] = cells[best].alpha;
            entry["beta"] = cells[best].beta;
            entry["max"] = cells[best].curves[mi].max_value;
            entry["ave"] = cells[best].curves[mi].ave_value;
            summary.push_back(entry);
            write_curve_files(fs::path(o.out), cells[best].curves[mi]);
        }
    } else {
        if (o.ranking.empty()) throw std::invalid_argument("--ranking is required (or --grid)");
        auto features = read_ranking(o.ranking, d.m());
        SelectionTrace trace = trace_from_features(features);

        for (Metric metric : metrics) {
            EvaluationCurve curve = performance_curve(d, trace, metric, cfg, workers, &warnings);
            json entry;
            entry["metric"] = to_string(metric);
            entry["max"] = curve.max_value;
            entry["ave"] = curve.ave_value;
            summary.push_back(entry);
            write_curve_files(fs::path(o.out), curve);
        }
    }

    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    write_file(fs::path(o.out) / "summary.json", summary.dump(2) + "\n");
    write_file(fs::path(o.out) / "config.echo.json", echo_curve(o).dump(2) + "\n");
    return 0;
}

// Score table: header row of algorithm names, one row per dataset. A
// leading non-numeric column is treated as dataset names.
struct ScoreTable {
    std::vector<std::string> algorithms;
    std::vector<std::vector<double>> scores;
};

ScoreTable read_scores(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scores file: " + path);

    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    if (rows.size() < 2) throw std::invalid_argument("scores file needs a header and data rows");

    auto parses = [](const std::string& s, double& v) {
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        return ec == std::errc{} && ptr == s.data() + s.size();
    };

    bool name_column = false;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        double v;
        if (rows[r].empty()) throw std::invalid_argument("empty row in scores file");
        if (!parses(rows[r][0], v)) name_column = true;
    }

    ScoreTable table;
    std::size_t first = name_column ? 1 : 0;
    if (rows[0].size() <= first)
        throw std::invalid_argument("scores file has no algorithm columns");
    for (std::size_t c = first; c < rows[0].size(); ++c) table.algorithms.push_back(rows[0][c]);

    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size())
            throw std::invalid_argument("row " + std::to_string(r) +
                                        " of scores file has the wrong width");
        std::vector<double> row;
        for (std::size_t c = first; c < rows[r].size(); ++c) {
            double v;
            if (!parses(rows[r][c], v))
                throw std::invalid_argument("bad score '" + rows[r][c] + "' in row " +
                                            std::to_string(r));
            row.push_back(v);
        }
        table.scores.push_back(row);
    }
    return table;
}

int cmd_stats(const Options& o) {
    ensure_out_dir(o.out);
    if (o.scores.empty()) throw std::invalid_argument("--scores is required");
    ScoreTable table = read_scores(o.scores);

    auto ranked = rank_rows(table.scores, !o.lower_is_better);
    int s = static_cast<int>(ranked.algorithms());
    int N = static_cast<int>(ranked.datasets());

    double q = o.q_alpha > 0.0 ? o.q_alpha : nemenyi_q_alpha(o.stat_alpha, s);

    json report;
    report["algorithms"] = table.algorithms;
    report["datasets"] = N;
    report["avg_ranks"] = ranked.avg_ranks;
    try {
        auto fr = friedman(ranked);
        report["chi2"] = fr.chi2;
        report["f_stat"] = fr.f_stat;
        report["dof"] = {fr.dof1, fr.dof2};
        if (o.critical_value > 0.0) {
            report["critical_value"] = o.critical_value;
            report["significant"] = fr.significant(o.critical_value);
        }
    } catch (const FriedmanDegenerate& e) {
        report["error"] = e.what();
    }
    report["q_alpha"] = q;
    report["cd"] = nemenyi_cd(s, N, q);

    std::string text = report.dump(2) + "\n";
    write_file(fs::path(o.out) / "stats.json", text);
    write_file(fs::path(o.out) / "config.echo.json", echo_stats(o).dump(2) + "\n");
    std::cout << text;
    return 0;
}

void add_dataset_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--input", o.input, "input CSV file");
    cmd->add_option("--label", o.label, "label column: header name or #<index>");
    cmd->add_flag(
        "--no-header", [&o](std::int64_t) { o.has_header = false; },
        "input CSV has no header row");
    cmd->add_flag("--normalize,!--no-normalize", o.normalize,
                  "min-max normalize features to [0,1] (default on)");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--config", o.config, "load option defaults from a config.echo.json");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"feature selection by spatially-aware class separability"};
    app.require_subcommand(1);

    Options o;
    try {
        apply_config_file(argc, argv, o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    auto* sel = app.add_subcommand("select", "rank features by greedy separability gain");
    add_dataset_flags(sel, o);
    sel->add_option("--alpha", o.alpha, "within-class direction weight");
    sel->add_option("--beta", o.beta, "between-class direction weight");
    sel->add_option("--variant", o.variant,
                    "criterion variant: full, no-dir-within, no-dir-between, distance-only");
    sel->add_option("--k", o.k, "number of features to select");
    sel->add_option("--seed", o.seed, "recorded for downstream evaluation runs");

    auto* cur = app.add_subcommand("curve", "evaluate top-k prefixes of a ranking");
    add_dataset_flags(cur, o);
    cur->add_option("--ranking", o.ranking, "ranking.csv from the select step");
    cur->add_option("--metric", o.metrics, "metric: knn and/or nmi")->delimiter(',');
    cur->add_option("--knn-k", o.knn_k, "neighbours for kNN (default 5)");
    cur->add_option("--folds", o.folds, "cross-validation folds (default 10)");
    cur->add_option("--seed", o.seed, "fold shuffling seed");
    cur->add_option("--max-top", o.max_top, "curve length cap (default 150)");
    cur->add_flag("--grid", o.grid, "sweep the 9x9 (alpha, beta) grid");
    cur->add_option("--alpha", o.alpha, "(unused without --grid)");
    cur->add_option("--beta", o.beta, "(unused without --grid)");
    cur->add_option("--variant", o.variant, "criterion variant for --grid");
    cur->add_option("--k", o.k, "features to select per --grid cell");

    auto* sta = app.add_subcommand("stats", "Friedman test and Nemenyi critical difference");
    sta->add_option("--scores", o.scores, "CSV of datasets x algorithms scores");
    sta->add_option("--alpha", o.stat_alpha, "significance level (default 0.05)");
    sta->add_option("--q-alpha", o.q_alpha, "explicit Nemenyi q constant");
    sta->add_flag("--lower-is-better", o.lower_is_better, "rank smaller scores first");
    sta->add_option("--critical-value", o.critical_value,
                    "F critical value for the significance flag");
    sta->add_option("--out", o.out, "output directory");
    sta->add_option("--config", o.config, "load option defaults from a config.echo.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sel->parsed()) return cmd_select(o);
        if (cur->parsed()) return cmd_curve(o);
        if (sta->parsed()) return cmd_stats(o);
        throw std::invalid_argument("no subcommand given");
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
