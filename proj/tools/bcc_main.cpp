#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bcc/affinity.hpp"
#include "bcc/assign.hpp"
#include "bcc/bench.hpp"
#include "bcc/io.hpp"
#include "bcc/solver.hpp"
#include "bcc/tune.hpp"
#include "json.hpp"

using json = nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct DataOpts {
    std::string path;
    bool header = false;
    std::optional<int> label_col;
    bool standardize = false;
};

struct AssignOpts {
    std::string cut = "gap";         // gap | height=H | k=K
    int min_size = 0;                // 0: pick from n
    std::string metric = "weighted";  // weighted | euclidean
};

struct FitOpts {
    bcc::Hyperparameters params;
    bool update_affinities = false;
    int update_every = 0;
    std::string w_init_path;
    bool freeze_weights = false;
    int threads = 0;
};

void add_data_flags(CLI::App* cmd, DataOpts& d) {
    cmd->add_option("--data", d.path, "Input CSV of samples by features")->required();
    cmd->add_flag("--header", d.header, "First row is a header");
    cmd->add_option("--label-col", d.label_col,
                    "Column holding labels, dropped from the features (negative counts from the end)");
    cmd->add_flag("--standardize", d.standardize,
                  "Center and scale every column before fitting");
}

void add_fit_flags(CLI::App* cmd, FitOpts& f) {
    cmd->add_option("--gamma", f.params.gamma, "Fusion strength")->capture_default_str();
    cmd->add_option("--lambda", f.params.lambda, "Weight regularization")->capture_default_str();
    cmd->add_option("--knn", f.params.k_neighbors, "Neighbors per row in the affinity graph")
        ->capture_default_str();
    cmd->add_option("--tau", f.params.tau, "Kernel scale of the initial affinities")
        ->capture_default_str();
    cmd->add_option("--max-iter", f.params.max_iter, "Iteration cap")->capture_default_str();
    cmd->add_option("--tol", f.params.tol_objective, "Relative objective change for convergence")
        ->capture_default_str();
    cmd->add_option("--inner-sweeps", f.params.inner_sweeps,
                    "Centroid sweeps per weight update")
        ->capture_default_str();
    cmd->add_flag("--update-affinities", f.update_affinities,
                  "Rebuild the neighbor graph in the learned metric every iteration");
    cmd->add_option("--update-every", f.update_every,
                    "Rebuild the neighbor graph every M iterations")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--w-init", f.w_init_path, "Start from the weights in this file");
    cmd->add_flag("--freeze-weights", f.freeze_weights, "Keep the weights at their start value");
    cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)")
        ->envname("BCC_THREADS")
        ->capture_default_str();
}

void add_assign_flags(CLI::App* cmd, AssignOpts& a) {
    cmd->add_option("--cut", a.cut, "Cluster extraction: gap, height=H, or k=K")
        ->capture_default_str();
    cmd->add_option("--min-size", a.min_size,
                    "Smallest cluster the gap cut may keep (0 = max(2, n/50))");
    cmd->add_option("--dendro-metric", a.metric,
                    "Distance for the dendrogram: weighted or euclidean")
        ->check(CLI::IsMember({"weighted", "euclidean"}))
        ->capture_default_str();
}

double parse_number(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw std::runtime_error(what + ": not a number: '" + text + "'");
    }
    if (used != text.size()) throw std::runtime_error(what + ": not a number: '" + text + "'");
    return v;
}

bcc::CutStrategy parse_cut(const AssignOpts& a, int n) {
    if (a.cut == "gap") {
        const int m = a.min_size > 0 ? a.min_size : bcc::default_min_size(n);
        return bcc::CutStrategy::largest_gap(m);
    }
    if (a.cut.rfind("height=", 0) == 0)
        return bcc::CutStrategy::at_height(parse_number(a.cut.substr(7), "--cut height"));
    if (a.cut.rfind("k=", 0) == 0) {
        const double k = parse_number(a.cut.substr(2), "--cut k");
        if (k != static_cast<int>(k)) throw std::runtime_error("--cut k: not an integer");
        return bcc::CutStrategy::fixed_k(static_cast<int>(k));
    }
    throw std::runtime_error("--cut: expected gap, height=H, or k=K, got '" + a.cut + "'");
}

bcc::Hyperparameters resolve_params(const FitOpts& f) {
    bcc::Hyperparameters p = f.params;
    if (f.update_every > 0) {
        p.affinity_update = bcc::AffinityUpdate::every_m_iterations;
        p.affinity_every_m = f.update_every;
    } else if (f.update_affinities) {
        p.affinity_update = bcc::AffinityUpdate::every_iteration;
    }
    p.validate();
    return p;
}

json params_json(const bcc::Hyperparameters& p) {
    json j;
    j["gamma"] = p.gamma;
    j["lambda"] = p.lambda;
    j["knn"] = p.k_neighbors;
    j["tau"] = p.tau;
    j["max_iter"] = p.max_iter;
    j["tol"] = p.tol_objective;
    j["inner_sweeps"] = p.inner_sweeps;
    switch (p.affinity_update) {
        case bcc::AffinityUpdate::never: j["affinity_update"] = "never"; break;
        case bcc::AffinityUpdate::every_iteration: j["affinity_update"] = "every_iteration"; break;
        case bcc::AffinityUpdate::every_m_iterations:
            j["affinity_update"] = "every_" + std::to_string(p.affinity_every_m) + "_iterations";
            break;
    }
    return j;
}

json input_json(const std::string& path) {
    json j;
    j["path"] = path;
    j["digest"] = bcc::file_digest_hex(path);
    return j;
}

std::string out_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void write_manifest(const std::string& dir, const json& manifest) {
    std::ofstream out(out_path(dir, "manifest.json"), std::ios::binary);
    if (!out) throw std::runtime_error(dir + ": cannot write manifest.json");
    out << manifest.dump(2) << "\n";
}

void ensure_dir(const std::string& dir) {
    if (!dir.empty() && dir != ".") std::filesystem::create_directories(dir);
}

struct LoadedData {
    bcc::DataMatrix x;
    json meta;
};

LoadedData load_data(const DataOpts& d) {
    LoadedData out{{}, input_json(d.path)};
    const bcc::LoadedCsv csv = bcc::load_csv(d.path, d.header, d.label_col);
    out.meta["rows"] = csv.values.rows;
    out.meta["cols"] = csv.values.cols;
    out.meta["label_column_dropped"] = csv.has_labels;
    out.x = bcc::DataMatrix(csv.values);
    if (d.standardize) out.x = bcc::standardize(out.x);
    return out;
}

struct FitArtifacts {
    bcc::FitResult result;
    bcc::Dendrogram dendro;
    bcc::LabelVector labels;
};

FitArtifacts fit_and_assign(const bcc::DataMatrix& x, const bcc::Hyperparameters& params,
                            const FitOpts& f, const AssignOpts& a) {
    bcc::FitControls controls;
    controls.threads = f.threads;
    controls.freeze_weights = f.freeze_weights;
    bcc::WeightVector w_init;
    if (!f.w_init_path.empty()) {
        w_init = bcc::WeightVector::from(bcc::load_weights(f.w_init_path));
        controls.w_init = &w_init;
    }

    FitArtifacts art;
    art.result = bcc::fit(x, params, nullptr, controls);
    const bcc::Matrix dist =
        a.metric == "euclidean"
            ? bcc::euclidean_distance_matrix(art.result.mu, f.threads)
            : bcc::centroid_distance_matrix(art.result.mu, art.result.w, params.lambda, f.threads);
    art.dendro = bcc::average_linkage(dist);
    art.labels = bcc::cut_dendrogram(art.dendro, parse_cut(a, x.n()), &dist);
    return art;
}

json write_fit_outputs(const std::string& dir, const FitArtifacts& art, bool write_affinities) {
    bcc::write_weights_csv(out_path(dir, "weights.csv"), art.result.w);
    bcc::write_matrix_csv(out_path(dir, "centroids.csv"), art.result.mu, "mu");
    bcc::write_labels_csv(out_path(dir, "labels.csv"), art.labels);
    bcc::write_dendrogram_csv(out_path(dir, "dendrogram.csv"), art.dendro);
    bcc::write_trace_csv(out_path(dir, "trace.csv"), art.result.objective_trace);
    json files = {"weights.csv", "centroids.csv", "labels.csv", "dendrogram.csv", "trace.csv"};
    if (write_affinities) {
        bcc::write_affinities_csv(out_path(dir, "affinities.csv"), art.result.phi);
        files.push_back("affinities.csv");
    }
    return files;
}

json result_json(const FitArtifacts& art) {
    json j;
    j["iterations"] = art.result.iterations;
    j["converged"] = art.result.converged;
    j["objective"] = art.result.objective_trace.back();
    j["affinity_updates"] = art.result.affinity_updates;
    j["degenerate_cells"] = art.result.degenerate_cells;
    j["clusters"] = bcc::n_clusters(art.labels);
    int active = 0;
    for (int l = 0; l < art.result.w.size(); ++l)
        if (art.result.w[l] > 0.0) ++active;
    j["active_features"] = active;
    return j;
}

void print_result(const FitArtifacts& art) {
    const json r = result_json(art);
    std::printf("converged %s\n", art.result.converged ? "true" : "false");
    std::printf("iterations %d\n", art.result.iterations);
    std::printf("objective %s\n", bcc::format_double(art.result.objective_trace.back()).c_str());
    std::printf("clusters %d\n", static_cast<int>(r["clusters"]));
    std::printf("active_features %d\n", static_cast<int>(r["active_features"]));
}

int run_fit(const DataOpts& d, const FitOpts& f, const AssignOpts& a, const std::string& dir,
            bool write_affinities) {
    ensure_dir(dir);
    const bcc::Hyperparameters params = resolve_params(f);
    const LoadedData data = load_data(d);
    const FitArtifacts art = fit_and_assign(data.x, params, f, a);

    json manifest;
    manifest["command"] = "fit";
    manifest["version"] = kVersion;
    manifest["inputs"]["data"] = data.meta;
    if (!f.w_init_path.empty()) manifest["inputs"]["w_init"] = input_json(f.w_init_path);
    manifest["config"] = params_json(params);
    manifest["config"]["standardize"] = d.standardize;
    manifest["config"]["cut"] = a.cut;
    manifest["config"]["min_size"] = a.min_size > 0 ? a.min_size : bcc::default_min_size(data.x.n());
    manifest["config"]["dendro_metric"] = a.metric;
    manifest["config"]["freeze_weights"] = f.freeze_weights;
    manifest["config"]["threads"] = f.threads;
    manifest["results"] = result_json(art);
    manifest["outputs"] = write_fit_outputs(dir, art, write_affinities);
    write_manifest(dir, manifest);
    print_result(art);
    return 0;
}

int run_path(const DataOpts& d, const FitOpts& f, const std::vector<double>& gammas,
             const std::string& dir) {
    ensure_dir(dir);
    bcc::Hyperparameters params = resolve_params(f);
    const LoadedData data = load_data(d);

    bcc::FitControls controls;
    controls.threads = f.threads;
    controls.freeze_weights = f.freeze_weights;
    bcc::WeightVector w_init;
    if (!f.w_init_path.empty()) {
        w_init = bcc::WeightVector::from(bcc::load_weights(f.w_init_path));
        controls.w_init = &w_init;
    }
    const std::vector<bcc::FitResult> path = bcc::solution_path(data.x, params, gammas, controls);

    std::ofstream summary(out_path(dir, "path_summary.csv"), std::ios::binary);
    std::ofstream weights(out_path(dir, "weights_path.csv"), std::ios::binary);
    if (!summary || !weights) throw std::runtime_error(dir + ": cannot write path outputs");
    summary << "gamma,objective,iterations,converged,active_features\n";
    weights << "gamma,feature,weight\n";
    for (std::size_t g = 0; g < path.size(); ++g) {
        const bcc::FitResult& r = path[g];
        int active = 0;
        for (int l = 0; l < r.w.size(); ++l)
            if (r.w[l] > 0.0) ++active;
        summary << bcc::format_double(gammas[g]) << ','
                << bcc::format_double(r.objective_trace.back()) << ',' << r.iterations << ','
                << (r.converged ? 1 : 0) << ',' << active << "\n";
        for (int l = 0; l < r.w.size(); ++l)
            weights << bcc::format_double(gammas[g]) << ',' << l << ','
                    << bcc::format_double(r.w[l]) << "\n";
    }

    json manifest;
    manifest["command"] = "path";
    manifest["version"] = kVersion;
    manifest["inputs"]["data"] = data.meta;
    manifest["config"] = params_json(params);
    manifest["config"]["standardize"] = d.standardize;
    manifest["config"]["gamma_grid"] = gammas;
    manifest["config"]["threads"] = f.threads;
    manifest["outputs"] = {"path_summary.csv", "weights_path.csv"};
    write_manifest(dir, manifest);
    std::printf("points %d\n", static_cast<int>(path.size()));
    return 0;
}

int run_tune(const DataOpts& d, const FitOpts& f, const AssignOpts& a,
             const std::vector<double>& lambdas, const std::vector<double>& gammas,
             double holdout_fraction, std::uint64_t mask_seed, bool no_refit,
             const std::string& dir, bool write_affinities) {
    ensure_dir(dir);
    const bcc::Hyperparameters params = resolve_params(f);
    const LoadedData data = load_data(d);

    bcc::FitControls controls;
    controls.threads = f.threads;
    bcc::MaskParams mp;
    mp.fraction = holdout_fraction;
    mp.seed = mask_seed;
    const bcc::GridSearchResult res =
        bcc::grid_search(data.x, lambdas, gammas, mp, params, controls);

    std::ofstream table(out_path(dir, "tune_table.csv"), std::ios::binary);
    if (!table) throw std::runtime_error(dir + ": cannot write tune_table.csv");
    table << "lambda,gamma,validation_error,iterations,converged\n";
    for (const auto& e : res.table)
        table << bcc::format_double(e.lambda) << ',' << bcc::format_double(e.gamma) << ','
              << bcc::format_double(e.validation_error) << ',' << e.iterations << ','
              << (e.converged ? 1 : 0) << "\n";

    json manifest;
    manifest["command"] = "tune";
    manifest["version"] = kVersion;
    manifest["inputs"]["data"] = data.meta;
    manifest["config"] = params_json(params);
    manifest["config"]["standardize"] = d.standardize;
    manifest["config"]["lambda_grid"] = lambdas;
    manifest["config"]["gamma_grid"] = gammas;
    manifest["config"]["holdout_fraction"] = holdout_fraction;
    manifest["config"]["mask_seed"] = mask_seed;
    manifest["config"]["threads"] = f.threads;
    manifest["rng"] = bcc::Rng::kId;
    manifest["results"]["best_lambda"] = res.best_lambda;
    manifest["results"]["best_gamma"] = res.best_gamma;
    manifest["results"]["best_error"] = res.best_error;
    manifest["results"]["held_out_cells"] = res.mask.count();
    manifest["results"]["refit"] = !no_refit;
    json files = {"tune_table.csv"};

    std::printf("best_lambda %s\n", bcc::format_double(res.best_lambda).c_str());
    std::printf("best_gamma %s\n", bcc::format_double(res.best_gamma).c_str());
    std::printf("best_error %s\n", bcc::format_double(res.best_error).c_str());

    if (!no_refit) {
        FitOpts refit = f;
        refit.params.lambda = res.best_lambda;
        refit.params.gamma = res.best_gamma;
        const FitArtifacts art = fit_and_assign(data.x, resolve_params(refit), refit, a);
        const json outputs = write_fit_outputs(dir, art, write_affinities);
        for (const auto& name : outputs) files.push_back(name);
        manifest["results"]["refit_results"] = result_json(art);
        print_result(art);
    }
    manifest["outputs"] = files;
    write_manifest(dir, manifest);
    return 0;
}

int run_simulate(const std::string& design, int n_per_cluster, int noise_dims, double sd, int n,
                 int p, int k, int informative, double spread_sd, std::uint64_t seed,
                 const std::string& dir) {
    ensure_dir(dir);
    bcc::LabeledDataset data;
    json config;
    config["design"] = design;
    config["seed"] = seed;
    if (design == "corners") {
        data = bcc::gen_corners(n_per_cluster, noise_dims, sd, seed);
        config["n_per_cluster"] = n_per_cluster;
        config["noise_dims"] = noise_dims;
        config["sd"] = sd;
    } else if (design == "sparse") {
        data = bcc::gen_sparse_centers(n, p, k, informative, spread_sd, seed);
        config["n"] = n;
        config["p"] = p;
        config["k"] = k;
        config["informative"] = informative;
        config["spread_sd"] = spread_sd;
    } else if (design == "motivating") {
        data = bcc::gen_motivating(seed);
    } else {
        throw std::runtime_error("--design: expected corners, sparse, or motivating, got '" +
                                 design + "'");
    }

    bcc::write_dataset_csv(out_path(dir, "dataset.csv"), data.x.values, data.truth);
    bcc::write_labels_csv(out_path(dir, "truth.csv"), data.truth);

    json manifest;
    manifest["command"] = "simulate";
    manifest["version"] = kVersion;
    manifest["config"] = config;
    manifest["rng"] = bcc::Rng::kId;
    manifest["results"]["rows"] = data.x.n();
    manifest["results"]["cols"] = data.x.p();
    manifest["results"]["clusters"] = bcc::n_clusters(data.truth);
    manifest["results"]["informative_features"] = data.informative;
    manifest["outputs"] = {"dataset.csv", "truth.csv"};
    write_manifest(dir, manifest);
    std::printf("rows %d\ncols %d\n", data.x.n(), data.x.p());
    return 0;
}

int run_eval(const std::string& truth_path, const std::string& pred_path,
             const std::string& weights_path, const std::vector<int>& informative,
             const std::string& dir) {
    ensure_dir(dir);
    const bcc::LabelVector truth = bcc::load_labels(truth_path);
    const bcc::LabelVector pred = bcc::load_labels(pred_path);
    const double ari = bcc::adjusted_rand_index(truth, pred);

    json manifest;
    manifest["command"] = "eval";
    manifest["version"] = kVersion;
    manifest["inputs"]["truth"] = input_json(truth_path);
    manifest["inputs"]["pred"] = input_json(pred_path);
    manifest["results"]["ari"] = ari;
    std::printf("ari %s\n", bcc::format_double(ari).c_str());

    if (!weights_path.empty()) {
        const bcc::WeightVector w = bcc::WeightVector::from(bcc::load_weights(weights_path));
        const bcc::SelectionMetrics sel = bcc::selection_metrics(w, informative);
        manifest["inputs"]["weights"] = input_json(weights_path);
        manifest["results"]["support_precision"] = sel.support_precision;
        manifest["results"]["support_recall"] = sel.support_recall;
        manifest["results"]["exact_zero_count"] = sel.exact_zero_count;
        std::printf("support_precision %s\n", bcc::format_double(sel.support_precision).c_str());
        std::printf("support_recall %s\n", bcc::format_double(sel.support_recall).c_str());
        std::printf("exact_zero_count %d\n", sel.exact_zero_count);
    }
    write_manifest(dir, manifest);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Biconvex clustering: joint centroid fusion and feature weighting"};
    app.require_subcommand(1);
    // Config processing only runs on the root app, so the flag lives here;
    // keys for a subcommand go under a section of the same name ([fit], ...).
    app.set_config("--config", "", "Ini file of defaults; sections name subcommands");

    std::string dir = ".";
    DataOpts data_opts;
    FitOpts fit_opts;
    AssignOpts assign_opts;
    bool write_affinities = false;
    std::vector<double> gamma_grid, lambda_grid;
    double holdout_fraction = 0.1;
    std::uint64_t mask_seed = 1;
    bool no_refit = false;

    std::string design = "corners";
    int n_per_cluster = 25, noise_dims = 0, sim_n = 100, sim_p = 10, sim_k = 4, sim_informative = 5;
    double sim_sd = 0.25, spread_sd = 0.015;
    std::uint64_t seed = 1;

    std::string truth_path, pred_path, weights_path;
    std::vector<int> informative;

    std::function<int()> action;

    CLI::App* fit_cmd = app.add_subcommand("fit", "Fit the model and extract clusters");
    add_data_flags(fit_cmd, data_opts);
    add_fit_flags(fit_cmd, fit_opts);
    add_assign_flags(fit_cmd, assign_opts);
    fit_cmd->add_option("--out", dir, "Output directory")->capture_default_str();
    fit_cmd->add_flag("--write-affinities", write_affinities, "Also write the final neighbor graph");
    fit_cmd->callback(
        [&] { action = [&] { return run_fit(data_opts, fit_opts, assign_opts, dir, write_affinities); }; });

    CLI::App* path_cmd = app.add_subcommand("path", "Warm-started fits along a fusion grid");
    add_data_flags(path_cmd, data_opts);
    add_fit_flags(path_cmd, fit_opts);
    path_cmd->add_option("--gammas", gamma_grid, "Ascending fusion grid")
        ->required()
        ->delimiter(',');
    path_cmd->add_option("--out", dir, "Output directory")->capture_default_str();
    path_cmd->callback([&] { action = [&] { return run_path(data_opts, fit_opts, gamma_grid, dir); }; });

    CLI::App* tune_cmd = app.add_subcommand("tune", "Holdout grid search over (lambda, gamma)");
    add_data_flags(tune_cmd, data_opts);
    add_fit_flags(tune_cmd, fit_opts);
    add_assign_flags(tune_cmd, assign_opts);
    tune_cmd->add_option("--lambdas", lambda_grid, "Weight regularization grid")
        ->required()
        ->delimiter(',');
    tune_cmd->add_option("--gammas", gamma_grid, "Fusion strength grid")->required()->delimiter(',');
    tune_cmd->add_option("--holdout-fraction", holdout_fraction, "Share of cells to hold out")
        ->capture_default_str();
    tune_cmd->add_option("--mask-seed", mask_seed, "Seed of the holdout draw")->capture_default_str();
    tune_cmd->add_flag("--no-refit", no_refit, "Skip refitting the winner on the full data");
    tune_cmd->add_option("--out", dir, "Output directory")->capture_default_str();
    tune_cmd->add_flag("--write-affinities", write_affinities, "Also write the final neighbor graph");
    tune_cmd->callback([&] {
        action = [&] {
            return run_tune(data_opts, fit_opts, assign_opts, lambda_grid, gamma_grid,
                            holdout_fraction, mask_seed, no_refit, dir, write_affinities);
        };
    });

    CLI::App* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic dataset");
    sim_cmd->add_option("--design", design, "corners, sparse, or motivating")->capture_default_str();
    sim_cmd->add_option("--n-per-cluster", n_per_cluster, "Points per corner cluster")
        ->capture_default_str();
    sim_cmd->add_option("--noise-dims", noise_dims, "Pure-noise columns appended (corners)")
        ->capture_default_str();
    sim_cmd->add_option("--sd", sim_sd, "Within-cluster spread (corners)")->capture_default_str();
    sim_cmd->add_option("--n", sim_n, "Rows (sparse)")->capture_default_str();
    sim_cmd->add_option("--p", sim_p, "Columns (sparse)")->capture_default_str();
    sim_cmd->add_option("--k", sim_k, "Clusters (sparse)")->capture_default_str();
    sim_cmd->add_option("--informative", sim_informative, "Signal-carrying columns (sparse)")
        ->capture_default_str();
    sim_cmd->add_option("--spread-sd", spread_sd, "Within-cluster spread (sparse)")
        ->capture_default_str();
    sim_cmd->add_option("--seed", seed, "Generator seed")->capture_default_str();
    sim_cmd->add_option("--out", dir, "Output directory")->capture_default_str();
    sim_cmd->callback([&] {
        action = [&] {
            return run_simulate(design, n_per_cluster, noise_dims, sim_sd, sim_n, sim_p, sim_k,
                                sim_informative, spread_sd, seed, dir);
        };
    });

    CLI::App* eval_cmd = app.add_subcommand("eval", "Score predicted labels against the truth");
    eval_cmd->add_option("--truth", truth_path, "True labels CSV")->required();
    eval_cmd->add_option("--pred", pred_path, "Predicted labels CSV")->required();
    eval_cmd->add_option("--weights", weights_path, "Learned weights CSV for selection metrics");
    eval_cmd->add_option("--informative", informative,
                         "True signal-carrying feature indices (with --weights)")
        ->delimiter(',');
    eval_cmd->add_option("--out", dir, "Output directory")->capture_default_str();
    eval_cmd->callback([&] {
        action = [&] { return run_eval(truth_path, pred_path, weights_path, informative, dir); };
    });

    CLI11_PARSE(app, argc, argv);

    try {
        if (!action) return 1;
        return action();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "bcc: %s\n", e.what());
        return 1;
    }
}
