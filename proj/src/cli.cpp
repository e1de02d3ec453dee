#include "eif/cli.hpp"

#include <algorithm>
#include <charconv>
#include <iostream>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "eif/csv.hpp"
#include "eif/error.hpp"
#include "eif/evaluation.hpp"
#include "eif/model_io.hpp"
#include "eif/synth.hpp"

namespace eif::cli {

namespace {

/// Flag combinations that cannot work; reported with exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SynthArgs {
    std::string kind;
    std::size_t n = 1000;
    std::size_t dim = 2;
    std::vector<double> mean;
    double sigma = 1.0;
    double amplitude = kDefaultSinAmplitude;
    double x_max = kDefaultSinXMax;
    double noise = kDefaultSinNoise;
    double radius = 1.0;
    double offset = 0.0;
    std::vector<double> lo, hi;
    std::size_t anomalies = 0;
    std::uint64_t seed = 1;
    std::string out;
};

struct TrainArgs {
    std::string data;
    std::size_t trees = 100;
    std::optional<std::size_t> psi;
    std::string extension = "full";
    std::string variant = "extended";
    std::uint64_t seed = 1;
    std::string out;
    std::string label_column;
};

struct ScoreArgs {
    std::string model, data, out, label_column;
};

struct ScoremapArgs {
    std::string model, out;
    GridSpec grid;
};

struct LevelsetArgs {
    std::string model, out;
    std::vector<double> radii, offsets;
    std::size_t n_probe = 500;
    std::uint64_t seed = 1;
    double amplitude = kDefaultSinAmplitude;
    double x_max = kDefaultSinXMax;
};

struct ConvergeArgs {
    std::string data, probe, out, label_column;
    std::vector<std::size_t> t_values;
    std::optional<std::size_t> psi;
    std::string extension = "full";
    std::uint64_t seed = 1;
};

struct BenchArgs {
    std::string model, data, label_column;
};

/// "full" or an integer in [0, dim - 1].
int resolve_extension(const std::string& flag, std::size_t dim) {
    if (flag == "full")
        return static_cast<int>(dim) - 1;
    int level = -1;
    auto [ptr, ec] = std::from_chars(flag.data(), flag.data() + flag.size(), level);
    if (ec != std::errc() || ptr != flag.data() + flag.size())
        throw UsageError("--extension must be 'full' or an integer, got '" + flag + "'");
    if (level < 0 || static_cast<std::size_t>(level) >= dim)
        throw UsageError("--extension " + flag + " outside [0, " + std::to_string(dim - 1) +
                         "] for " + std::to_string(dim) + "-D data");
    return level;
}

/// Reads features, dropping `label_column` when given. Without one, a header
/// column named exactly "label" is dropped.
CsvTable read_features(const std::string& path, const std::string& label_column) {
    if (!label_column.empty())
        return read_csv(path, true, ColumnRef{label_column});
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    std::istringstream fields(header);
    for (std::string f; std::getline(fields, f, ',');) {
        while (!f.empty() && (f.back() == '\r' || f.back() == ' '))
            f.pop_back();
        if (f == "label")
            return read_csv(path, true, ColumnRef{f});
    }
    return read_csv(path, true);
}

std::size_t resolve_psi(const std::optional<std::size_t>& psi, const Dataset& data) {
    return psi ? *psi : std::min<std::size_t>(256, data.size());
}

void run_synth(const SynthArgs& a) {
    GeneratorSpec spec;
    spec.kind = parse_generator_kind(a.kind);
    spec.n = a.n;
    spec.dim = a.dim;
    spec.mean = a.mean;
    spec.sigma = a.sigma;
    spec.amplitude = a.amplitude;
    spec.x_max = a.x_max;
    spec.noise_sigma = a.noise;
    spec.radius = a.radius;
    spec.offset = a.offset;
    spec.lo = a.lo;
    spec.hi = a.hi;
    spec.seed = a.seed;

    NominalRegion nominal;
    if (a.anomalies > 0) {
        switch (spec.kind) {
        case GeneratorKind::blob: {
            Point center = a.mean.empty() ? Point(a.dim, 0.0) : a.mean;
            nominal = within_radius_of({center}, 3.0 * a.sigma);
            break;
        }
        case GeneratorKind::double_blob:
            nominal = within_radius_of({{0.0, 10.0}, {10.0, 0.0}}, 3.0);
            break;
        case GeneratorKind::sinusoid:
            nominal = within_band_of_sinusoid(a.amplitude, 3.0 * a.noise);
            break;
        default:
            throw UsageError("--anomalies is only supported for blob, double_blob and sinusoid");
        }
    }

    Dataset data = generate(spec);
    if (a.anomalies == 0) {
        write_dataset_csv(a.out, data);
        return;
    }
    const Dataset extra = inject_anomalies(a.anomalies, data, nominal, mix64(a.seed ^ 0xa11ULL));
    std::vector<int> labels(data.size(), 0);
    for (std::size_t i = 0; i < extra.size(); ++i) {
        data.push_back(extra.row(i));
        labels.push_back(1);
    }
    write_dataset_csv(a.out, data, &labels);
}

void run_train(const TrainArgs& a, Threads threads) {
    const CsvTable table = read_features(a.data, a.label_column);
    const Dataset& data = table.data;
    const std::size_t psi = resolve_psi(a.psi, data);
    if (a.variant == "rotated") {
        if (data.dim() != 2)
            throw UsageError("--variant rotated needs 2-D data, got dimension " +
                             std::to_string(data.dim()));
        save_forest(build_rotated_forest(data, a.trees, psi, a.seed, {}, threads), a.out);
        return;
    }
    const int ext = resolve_extension(a.extension, data.dim());
    save_forest(build_forest(data, a.trees, psi, ext, a.seed, threads), a.out);
}

void run_score(const ScoreArgs& a, Threads threads) {
    const Model model = load_forest(a.model);
    const CsvTable table = read_features(a.data, a.label_column);
    write_scores_csv(a.out, ScorerView(model).score_batch(table.data, threads));
}

void run_scoremap(const ScoremapArgs& a, Threads threads) {
    const Model model = load_forest(a.model);
    write_grid_csv(a.out, score_map(model, a.grid, threads));
}

void run_levelset(const LevelsetArgs& a, Threads threads) {
    const Model model = load_forest(a.model);
    const ScorerView scorer(model);
    if (!a.radii.empty()) {
        write_stats_csv(a.out, levelset_stats(scorer, a.radii, a.n_probe, scorer.dim(), a.seed,
                                              threads));
        return;
    }
    if (scorer.dim() != 2)
        throw UsageError("--offsets needs a 2-D model");
    write_stats_csv(a.out, line_levelset_stats(scorer, a.offsets, a.n_probe,
                                               {a.amplitude, a.x_max}, a.seed, threads));
}

void run_converge(const ConvergeArgs& a, Threads threads) {
    const CsvTable data = read_features(a.data, a.label_column);
    const CsvTable probes = read_features(a.probe, "");
    const int ext = resolve_extension(a.extension, data.data.dim());
    write_convergence_csv(a.out, convergence_curve(data.data, probes.data, a.t_values,
                                                   resolve_psi(a.psi, data.data), ext, a.seed,
                                                   threads));
}

void run_bench(const BenchArgs& a, Threads threads, std::ostream& out) {
    const Model model = load_forest(a.model);
    CsvTable table = read_csv(a.data, true, ColumnRef{a.label_column});
    LabeledScores ls{ScorerView(model).score_batch(table.data, threads), std::move(*table.labels)};
    out << "auroc=" << format_score(auroc(ls)) << " auprc=" << format_score(auprc(ls)) << '\n';
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Extended Isolation Forest anomaly detection", "eif"};
    app.set_version_flag("--version", std::string("eif ") + kVersion);
    app.require_subcommand(1);
    app.fallthrough();
    int thread_count = 0;
    app.add_option("--threads", thread_count, "Worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);

    SynthArgs synth;
    auto* s = app.add_subcommand("synth", "Generate a synthetic dataset as CSV");
    s->add_option("--kind", synth.kind,
                  "blob, double_blob, sinusoid, uniform_box, sphere or line")
        ->required()
        ->check(CLI::IsMember({"blob", "double_blob", "sinusoid", "uniform_box", "sphere", "line"}));
    s->add_option("--n", synth.n, "Point count (per cluster for double_blob)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    s->add_option("--dim", synth.dim, "Dimension (blob, sphere)")->capture_default_str();
    s->add_option("--mean", synth.mean, "Blob mean, comma separated")->delimiter(',');
    s->add_option("--sigma", synth.sigma, "Blob standard deviation")->capture_default_str();
    s->add_option("--amplitude", synth.amplitude, "Sinusoid amplitude")->capture_default_str();
    s->add_option("--x-max", synth.x_max, "Sinusoid x range [0, x-max]")->capture_default_str();
    s->add_option("--noise", synth.noise, "Sinusoid noise sigma")->capture_default_str();
    s->add_option("--radius", synth.radius, "Sphere radius")->capture_default_str();
    s->add_option("--offset", synth.offset, "Line offset from the sinusoid")->capture_default_str();
    s->add_option("--lo", synth.lo, "Box lower corner, comma separated")->delimiter(',');
    s->add_option("--hi", synth.hi, "Box upper corner, comma separated")->delimiter(',');
    s->add_option("--anomalies", synth.anomalies,
                  "Append this many labeled anomalies (adds a 'label' column)");
    s->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
    s->add_option("--out", synth.out, "Output CSV")->required();

    TrainArgs train;
    auto* t = app.add_subcommand("train", "Train a forest and save it as JSON");
    t->add_option("--data", train.data, "Training CSV with header")->required();
    t->add_option("--trees", train.trees, "Number of trees")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    t->add_option("--psi", train.psi, "Subsample size (default min(256, rows))");
    auto* t_ext = t->add_option("--extension", train.extension, "Extension level or 'full'")
                      ->capture_default_str();
    t->add_option("--variant", train.variant, "extended or rotated")
        ->capture_default_str()
        ->check(CLI::IsMember({"extended", "rotated"}));
    t->add_option("--seed", train.seed, "Random seed")->capture_default_str();
    t->add_option("--label-column", train.label_column,
                  "Column to drop before training (default: a column named 'label')");
    t->add_option("--out", train.out, "Output model JSON")->required();

    ScoreArgs score;
    auto* sc = app.add_subcommand("score", "Score every row of a CSV");
    sc->add_option("--model", score.model, "Model JSON")->required();
    sc->add_option("--data", score.data, "CSV with header")->required();
    sc->add_option("--label-column", score.label_column,
                   "Column to ignore (default: a column named 'label')");
    sc->add_option("--out", score.out, "Output scores CSV")->required();

    ScoremapArgs smap;
    auto* sm = app.add_subcommand("scoremap", "Score a regular 2-D grid");
    sm->add_option("--model", smap.model, "Model JSON")->required();
    sm->add_option("--xmin", smap.grid.x_min)->required();
    sm->add_option("--xmax", smap.grid.x_max)->required();
    sm->add_option("--ymin", smap.grid.y_min)->required();
    sm->add_option("--ymax", smap.grid.y_max)->required();
    sm->add_option("--nx", smap.grid.nx)->capture_default_str();
    sm->add_option("--ny", smap.grid.ny)->capture_default_str();
    sm->add_option("--out", smap.out, "Output grid CSV")->required();

    LevelsetArgs lset;
    auto* ls = app.add_subcommand("levelset", "Score mean and variance along level sets");
    ls->add_option("--model", lset.model, "Model JSON")->required();
    auto* radii = ls->add_option("--radii", lset.radii, "Sphere radii, comma separated")
                      ->delimiter(',');
    auto* offsets = ls->add_option("--offsets", lset.offsets,
                                   "Offsets from the sinusoid, comma separated")
                        ->delimiter(',');
    radii->excludes(offsets);
    ls->add_option("--n-probe", lset.n_probe, "Probe points per level")->capture_default_str();
    ls->add_option("--amplitude", lset.amplitude, "Sinusoid amplitude for --offsets")
        ->capture_default_str();
    ls->add_option("--x-max", lset.x_max, "Sinusoid x range for --offsets")->capture_default_str();
    ls->add_option("--seed", lset.seed, "Random seed")->capture_default_str();
    ls->add_option("--out", lset.out, "Output level-set CSV")->required();

    ConvergeArgs conv;
    auto* cv = app.add_subcommand("converge", "Probe-score statistics as a function of t");
    cv->add_option("--data", conv.data, "Training CSV with header")->required();
    cv->add_option("--probe", conv.probe, "Probe CSV with header")->required();
    cv->add_option("--t-values", conv.t_values, "Forest sizes, comma separated")
        ->required()
        ->delimiter(',');
    cv->add_option("--psi", conv.psi, "Subsample size (default min(256, rows))");
    cv->add_option("--extension", conv.extension, "Extension level or 'full'")
        ->capture_default_str();
    cv->add_option("--label-column", conv.label_column,
                   "Column to drop from --data (default: a column named 'label')");
    cv->add_option("--seed", conv.seed, "Random seed")->capture_default_str();
    cv->add_option("--out", conv.out, "Output convergence CSV")->required();

    BenchArgs bench;
    auto* b = app.add_subcommand("bench", "AUROC and AUPRC of a model on labeled data");
    b->add_option("--model", bench.model, "Model JSON")->required();
    b->add_option("--data", bench.data, "Labeled CSV with header")->required();
    b->add_option("--label-column", bench.label_column, "0/1 label column")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    const Threads threads{thread_count};
    try {
        if (*s) {
            run_synth(synth);
        } else if (*t) {
            if (train.variant == "rotated" && t_ext->count() > 0 && train.extension != "0")
                throw UsageError("--variant rotated builds extension level 0 trees; drop --extension");
            run_train(train, threads);
        } else if (*sc) {
            run_score(score, threads);
        } else if (*sm) {
            run_scoremap(smap, threads);
        } else if (*ls) {
            if (lset.radii.empty() && lset.offsets.empty())
                throw UsageError("levelset needs --radii or --offsets");
            run_levelset(lset, threads);
        } else if (*cv) {
            run_converge(conv, threads);
        } else if (*b) {
            run_bench(bench, threads, out);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
        return kDataError;
    }
    return kOk;
}

} // namespace eif::cli
