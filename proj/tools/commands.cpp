#include "commands.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ambigeo/corpus.hpp"
#include "ambigeo/embstore.hpp"
#include "ambigeo/error.hpp"
#include "ambigeo/geometry.hpp"
#include "ambigeo/labelkit.hpp"
#include "ambigeo/nbayes.hpp"
#include "ambigeo/proxigram.hpp"
#include "ambigeo/stats.hpp"
#include "ambigeo/synthkit.hpp"
#include "ambigeo/textio.hpp"
#include "ambigeo/tsne.hpp"
#include "manifest.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace ambigeo::cli {

namespace {

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << text;
}

void ensure_parent(const fs::path& file) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
}

fs::path manifest_path_for(const fs::path& out_file) {
    return fs::path(out_file.string() + ".manifest.json");
}

std::vector<fs::path> sorted_files(const fs::path& dir, const std::string& extension = {}) {
    if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, dir.string() + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (!extension.empty() && entry.path().extension() != extension) continue;
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

ordered_json coefficient_table(const stats::OlsFit& fit, const std::vector<std::string>& terms) {
    auto rows = ordered_json::array();
    for (std::size_t i = 0; i < terms.size(); ++i) {
        ordered_json r;
        r["term"] = terms[i];
        r["b"] = textio::json_number(fit.coefficients[i]);
        r["se"] = textio::json_number(fit.standard_errors[i]);
        r["t"] = textio::json_number(fit.t_values[i]);
        r["p"] = textio::json_number(fit.p_values[i]);
        r["beta"] = textio::json_number(fit.standardized_beta[i]);
        rows.push_back(std::move(r));
    }
    return rows;
}

ordered_json anova_json(const stats::AnovaResult& a) {
    ordered_json j;
    j["F"] = textio::json_number(a.f_value);
    j["df"] = {a.df_between, a.df_within};
    j["p"] = textio::json_number(a.p_value);
    j["partial_eta_sq"] = textio::json_number(a.partial_eta_sq);
    return j;
}

Matrix to_double(const FloatMatrix& m) {
    return matrix_cast<double>(m);
}

Matrix select_rows(const Matrix& m, const std::vector<std::size_t>& rows) {
    Matrix out(rows.size(), m.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::copy(m.row(rows[r]).begin(), m.row(rows[r]).end(), out.row(r).begin());
    }
    return out;
}

}  // namespace

void run_windows(const WindowsOptions& opt) {
    if (opt.size == 0) throw Error(ErrorCode::Precondition, "--size must be positive");
    RunManifest manifest("windows");
    manifest.parameter("corpus", opt.corpus_dir);
    manifest.parameter("targets", opt.targets_file);
    manifest.parameter("size", opt.size);
    manifest.parameter("presegmented", opt.presegmented);

    std::vector<std::string> targets;
    {
        std::istringstream in(read_text(opt.targets_file));
        std::string line;
        while (std::getline(in, line)) {
            if (line.rfind('#', 0) == 0) continue;
            const std::string word = corpus::normalize_token(line);
            if (!word.empty()) targets.push_back(word);
        }
    }
    manifest.input(opt.targets_file);
    if (targets.empty()) throw Error(ErrorCode::Precondition, "targets file lists no words");

    std::vector<corpus::Document> docs;
    for (const auto& file : sorted_files(opt.corpus_dir)) {
        const std::string text = read_text(file);
        docs.push_back(opt.presegmented ? corpus::make_presegmented_document(file.stem().string(), text)
                                        : corpus::make_document(file.stem().string(), text));
        manifest.input(file);
    }

    ensure_parent(opt.out);
    std::ofstream out(opt.out, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + opt.out);
    std::size_t total = 0;
    for (const auto& target : targets) {
        for (const auto& doc : docs) {
            for (const auto& w : corpus::build_windows(doc, target, opt.size)) {
                corpus::write_window_jsonl(out, w);
                ++total;
            }
        }
    }
    out.close();
    manifest.output(opt.out);
    manifest.write(manifest_path_for(opt.out));
    std::cerr << "windows: " << total << " windows for " << targets.size() << " targets\n";
}

void run_diversity(const DiversityOptions& opt) {
    RunManifest manifest("diversity");
    manifest.parameter("embeddings", opt.embeddings_dir);
    std::vector<geometry::DiversityRecord> records;
    for (const auto& file : sorted_files(opt.embeddings_dir, ".embv1")) {
        const auto set = embstore::load_embv1(file);
        manifest.input(file);
        records.push_back(geometry::embedding_diversity(set, opt.threads));
    }
    if (records.empty()) throw Error(ErrorCode::EmptyDataset, "no .embv1 files in " + opt.embeddings_dir);
    ensure_parent(opt.out);
    std::ostringstream csv;
    geometry::write_diversity_csv(csv, records);
    write_text(opt.out, csv.str());
    manifest.output(opt.out);
    manifest.write(manifest_path_for(opt.out));
    std::cerr << "diversity: " << records.size() << " words\n";
}

void run_simulate(const SimulateOptions& opt) {
    if (opt.design != "regression" && opt.design != "factorial") {
        throw Error(ErrorCode::Precondition, "--design must be regression or factorial");
    }
    RunManifest manifest("simulate");
    manifest.parameter("design", opt.design);

    std::map<std::string, double> diversity;
    {
        std::istringstream in(read_text(opt.diversity_file));
        for (const auto& r : geometry::read_diversity_csv(in)) diversity[r.word] = r.diversity;
    }
    manifest.input(opt.diversity_file);
    std::istringstream cond_in(read_text(opt.conditions_file));
    const auto table = textio::read_csv(cond_in);
    manifest.input(opt.conditions_file);
    const int word_col = table.column("word");
    const int cond_col = table.column("condition");
    if (word_col < 0 || cond_col < 0) throw Error(ErrorCode::Format, "conditions CSV needs columns word,condition");
    if (table.rows.empty()) throw Error(ErrorCode::EmptyDataset, "conditions CSV has no rows");

    std::vector<std::string> missing;
    for (const auto& row : table.rows) {
        if (!diversity.count(row[word_col])) missing.push_back(row[word_col]);
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
        throw Error(ErrorCode::Precondition, "words missing from diversity table: " + list);
    }

    ordered_json j;
    j["design"] = opt.design;
    j["n"] = table.rows.size();
    if (opt.design == "regression") {
        const int senses = table.column("n_senses");
        const int meanings = table.column("n_meanings");
        if (senses < 0 || meanings < 0) {
            throw Error(ErrorCode::Format, "regression design needs n_senses and n_meanings columns");
        }
        std::vector<double> y;
        Matrix x(table.rows.size(), 3);
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            const auto& row = table.rows[i];
            y.push_back(diversity.at(row[word_col]));
            x(i, 0) = 1.0;
            x(i, 1) = textio::parse_double(row[senses], "n_senses");
            x(i, 2) = textio::parse_double(row[meanings], "n_meanings");
        }
        const auto fit = stats::ols(y, x);
        j["outcome"] = "diversity";
        j["coefficients"] = coefficient_table(fit, {"intercept", "n_senses", "n_meanings"});
        j["r_squared"] = textio::json_number(fit.r_squared);
        j["df_residual"] = fit.df_residual;
    } else {
        std::vector<std::string> order;
        std::map<std::string, std::vector<double>> groups;
        for (const auto& row : table.rows) {
            if (!groups.count(row[cond_col])) order.push_back(row[cond_col]);
            groups[row[cond_col]].push_back(diversity.at(row[word_col]));
        }
        if (order.size() < 2) throw Error(ErrorCode::InsufficientData, "factorial design needs 2 or more conditions");
        std::vector<std::vector<double>> ordered;
        auto conds = ordered_json::array();
        for (const auto& name : order) {
            ordered.push_back(groups[name]);
            conds.push_back({{"name", name}, {"n", groups[name].size()}, {"mean", stats::mean(groups[name])}});
        }
        j["conditions"] = std::move(conds);
        j["omnibus"] = anova_json(stats::one_way_anova(ordered));
        auto contrasts = ordered_json::array();
        for (std::size_t a = 0; a < order.size(); ++a) {
            for (std::size_t b = a + 1; b < order.size(); ++b) {
                ordered_json c = anova_json(stats::one_way_anova({ordered[a], ordered[b]}));
                c["first"] = order[a];
                c["second"] = order[b];
                contrasts.push_back(std::move(c));
            }
        }
        j["contrasts"] = std::move(contrasts);
    }
    ensure_parent(opt.out);
    write_text(opt.out, j.dump(2) + "\n");
    manifest.output(opt.out);
    manifest.write(manifest_path_for(opt.out));
}

void run_casestudy(const CasestudyOptions& opt) {
    RunManifest manifest("casestudy");
    manifest.parameter("tsne_perplexity", opt.perplexity);
    manifest.parameter("tsne_iterations", opt.iterations);
    manifest.parameter("learning_rate", opt.learning_rate);
    manifest.parameter("seed", opt.seed);
    manifest.parameter("knn", opt.knn);
    manifest.parameter("test_fraction", opt.test_fraction);
    manifest.parameter("stratify", opt.stratify);
    manifest.parameter("ci_level", opt.ci_level);

    const auto set = embstore::load_embv1(opt.embeddings_file);
    manifest.input(opt.embeddings_file);
    auto labeling = embstore::load_labels(opt.labels_file);
    manifest.input(opt.labels_file);
    if (!opt.merges_file.empty()) {
        labeling = labelkit::merge_labels(labeling, labelkit::read_merge_map(read_text(opt.merges_file)));
        manifest.input(opt.merges_file);
    }
    const auto data = embstore::attach_labels(set, labeling);
    const std::set<std::string> distinct(data.labels.begin(), data.labels.end());
    if (data.count() < 10) {
        throw Error(ErrorCode::InsufficientData,
                    "only " + std::to_string(data.count()) + " labeled contexts (need at least 10)");
    }
    if (distinct.size() < 2) throw Error(ErrorCode::NoBetweenPairs, "labeled contexts carry a single label");

    const fs::path dir(opt.out_dir);
    fs::create_directories(dir);
    const Matrix x = to_double(data.set.vectors);

    tsne::TsneConfig config;
    config.perplexity = opt.perplexity;
    config.iterations = opt.iterations;
    config.learning_rate = opt.learning_rate;
    config.seed = opt.seed;
    config.threads = opt.threads;
    const auto embedded = tsne::tsne_embed(x, config);
    {
        std::ostringstream csv;
        csv << "context_id,x,y,label\n";
        for (std::size_t i = 0; i < data.count(); ++i) {
            csv << textio::csv_field(data.set.context_ids[i]) << ',' << textio::format_double(embedded.layout(i, 0))
                << ',' << textio::format_double(embedded.layout(i, 1)) << ',' << textio::csv_field(data.labels[i])
                << '\n';
        }
        write_text(dir / "tsne.csv", csv.str());
        std::ostringstream kl;
        kl << "iteration,kl\n";
        for (std::size_t i = 0; i < embedded.kl_trace.size(); ++i) {
            kl << i + 1 << ',' << textio::format_double(embedded.kl_trace[i]) << '\n';
        }
        write_text(dir / "kl.csv", kl.str());
    }

    const auto graph = proxigram::knn_graph(data.set, embedded.layout, opt.knn, data.labels);
    const proxigram::Palette palette{proxigram::parse_colour(opt.near_colour), proxigram::parse_colour(opt.far_colour)};
    write_text(dir / "proxigram.svg", proxigram::render_proxigram(graph, palette));
    write_text(dir / "proxigram.json", proxigram::to_json(graph));

    const auto pairs = geometry::pairwise_records(data);
    write_text(dir / "groupsim.json", geometry::to_json(geometry::summarize_pairs(pairs, data.labels, opt.ci_level)));
    {
        std::ostringstream csv;
        geometry::write_pairs_csv(csv, pairs);
        write_text(dir / "pairs.csv", csv.str());
    }

    const auto plan = opt.stratify ? nbayes::split_stratified(data.labels, opt.test_fraction, opt.seed)
                                   : nbayes::split_half(data.count(), opt.test_fraction, opt.seed);
    std::vector<std::string> train_labels, test_labels;
    for (auto i : plan.train_indices) train_labels.push_back(data.labels[i]);
    for (auto i : plan.test_indices) test_labels.push_back(data.labels[i]);
    const auto model = nbayes::fit_gnb(select_rows(x, plan.train_indices), train_labels);
    const auto predicted = nbayes::predict_gnb(model, select_rows(x, plan.test_indices));
    auto report = nbayes::classification_report(model, predicted.labels, test_labels);
    report.train_size = plan.train_indices.size();
    write_text(dir / "classify.json", nbayes::to_json(report));
    write_text(dir / "model.json", nbayes::to_json(model));

    for (const char* name : {"tsne.csv", "kl.csv", "proxigram.svg", "proxigram.json", "groupsim.json", "pairs.csv",
                             "classify.json", "model.json"}) {
        manifest.output(dir / name);
    }
    manifest.write(dir / "manifest.json");
    std::cerr << "casestudy: " << data.count() << " contexts, " << distinct.size() << " labels, accuracy "
              << report.accuracy << "\n";
}

void run_interaction(const InteractionOptions& opt) {
    RunManifest manifest("interaction");
    std::vector<geometry::PairRecord> pairs;
    std::vector<std::string> words;
    for (const auto& file : opt.pair_files) {
        std::istringstream in(read_text(file));
        auto part = geometry::read_pairs_csv(in);
        manifest.input(file);
        for (auto& p : part) {
            if (std::find(words.begin(), words.end(), p.word) == words.end()) words.push_back(p.word);
            pairs.push_back(std::move(p));
        }
    }
    if (words.size() != 2) {
        throw Error(ErrorCode::Precondition, "interaction model needs pair records from exactly 2 words, got " +
                                                 std::to_string(words.size()));
    }
    const std::string reference = opt.reference_word.empty() ? words.front() : opt.reference_word;
    if (std::find(words.begin(), words.end(), reference) == words.end()) {
        throw Error(ErrorCode::Precondition, "reference word '" + reference + "' not among the pair records");
    }
    manifest.parameter("reference_word", reference);

    std::vector<double> sim, within, type;
    std::map<std::string, std::array<std::pair<double, std::size_t>, 2>> cells;
    for (const auto& p : pairs) {
        const bool is_within = p.group_status == geometry::GroupStatus::Within;
        sim.push_back(p.similarity);
        within.push_back(is_within ? 1.0 : 0.0);
        type.push_back(p.word == reference ? 1.0 : 0.0);
        auto& cell = cells[p.word][is_within ? 1 : 0];
        cell.first += p.similarity;
        cell.second += 1;
    }
    const auto fit = stats::fit_interaction(sim, within, type);

    ordered_json j;
    j["reference_word"] = reference;
    j["coding"] = {{"within", "1 = same label, 0 = different label"},
                   {"word_type", "1 = " + reference + ", 0 = other word"}};
    j["n"] = fit.fit.n;
    j["coefficients"] = coefficient_table(fit.fit, {std::begin(stats::InteractionFit::kTerms),
                                                    std::end(stats::InteractionFit::kTerms)});
    j["r_squared"] = textio::json_number(fit.fit.r_squared);
    auto means = ordered_json::object();
    for (const auto& w : words) {
        const auto& c = cells[w];
        means[w] = {{"between", c[0].second ? textio::json_number(c[0].first / c[0].second) : ordered_json(nullptr)},
                    {"within", c[1].second ? textio::json_number(c[1].first / c[1].second) : ordered_json(nullptr)}};
    }
    j["cell_means"] = std::move(means);
    ensure_parent(opt.out);
    write_text(opt.out, j.dump(2) + "\n");
    manifest.output(opt.out);
    manifest.write(manifest_path_for(opt.out));
}

void run_agreement(const AgreementOptions& opt) {
    RunManifest manifest("agreement");
    manifest.parameter("min_agree", opt.min_agree);
    labelkit::MergeMap merges;
    if (!opt.merges_file.empty()) {
        merges = labelkit::read_merge_map(read_text(opt.merges_file));
        manifest.input(opt.merges_file);
    }
    auto load = [&](const std::string& file) {
        auto l = labelkit::merge_labels(embstore::load_labels(file), merges);
        manifest.input(file);
        return l;
    };
    std::vector<embstore::SenseLabeling> labelings{load(opt.auto_file)};
    if (labelings.front().source != embstore::kAutoSource) {
        throw Error(ErrorCode::Validation, "--auto file has source '" + labelings.front().source + "', expected " +
                                               std::string(embstore::kAutoSource));
    }
    for (const auto& file : opt.rater_files) labelings.push_back(load(file));
    const auto table = labelkit::make_rater_table(labelings);

    std::vector<std::pair<std::string, labelkit::LabelColumn>> raters;
    for (const auto& source : table.rater_sources()) raters.emplace_back(source, table.columns.at(source));
    const auto report =
        labelkit::average_pairwise_alpha(table.columns.at(std::string(embstore::kAutoSource)), raters);

    ensure_parent(opt.out);
    write_text(opt.out, labelkit::to_json(report));
    manifest.output(opt.out);
    if (!opt.majority_out.empty()) {
        const auto majority = labelkit::majority_label(table, opt.min_agree);
        std::ostringstream jsonl;
        embstore::write_labels_jsonl(jsonl, majority);
        ensure_parent(opt.majority_out);
        write_text(opt.majority_out, jsonl.str());
        manifest.output(opt.majority_out);
        std::cerr << "agreement: " << majority.entries.size() << " of " << table.context_ids.size()
                  << " contexts retained by majority vote\n";
    }
    manifest.write(manifest_path_for(opt.out));
}

void run_synth(const SynthOptions& opt) {
    RunManifest manifest("synth");
    const auto config = synthkit::parse_synth_config(read_text(opt.config_file));
    manifest.input(opt.config_file);
    manifest.parameter("seed", config.seed);
    manifest.parameter("words_per_condition", config.words_per_condition);

    const fs::path dir(opt.out_dir);
    fs::create_directories(dir);
    const auto result =
        synthkit::simulate_ambiguity_experiment(config.conditions, config.words_per_condition, config.seed, opt.threads);

    std::vector<geometry::DiversityRecord> records;
    std::ostringstream conditions;
    conditions << "word,condition,n_senses,n_meanings\n";
    for (const auto& w : result.words) {
        records.push_back(w.record);
        const auto cond = std::find_if(config.conditions.begin(), config.conditions.end(),
                                       [&](const synthkit::Condition& c) { return c.name == w.condition; });
        conditions << textio::csv_field(w.record.word) << ',' << textio::csv_field(w.condition) << ','
                   << textio::format_double(cond->n_senses) << ',' << textio::format_double(cond->n_meanings) << '\n';
    }
    std::ostringstream diversity;
    geometry::write_diversity_csv(diversity, records);
    write_text(dir / "diversity.csv", diversity.str());
    write_text(dir / "conditions.csv", conditions.str());
    write_text(dir / "stats.json", synthkit::to_json(result));
    for (const char* name : {"diversity.csv", "conditions.csv", "stats.json"}) manifest.output(dir / name);

    for (const auto& [name, spec] : config.fixtures) {
        const auto fixture = synthkit::gen_cluster_set(spec, name);
        embstore::SenseLabeling labels{name, std::string(embstore::kAutoSource), {}};
        for (std::size_t i = 0; i < fixture.count(); ++i) labels.entries[fixture.set.context_ids[i]] = fixture.labels[i];
        const fs::path emb = dir / (name + ".embv1");
        const fs::path lab = dir / (name + ".labels.jsonl");
        embstore::save_embv1(fixture.set, emb);
        std::ostringstream jsonl;
        embstore::write_labels_jsonl(jsonl, labels);
        write_text(lab, jsonl.str());
        manifest.output(emb);
        manifest.output(lab);
    }
    manifest.write(dir / "manifest.json");
    std::cerr << "synth: " << result.words.size() << " words across " << config.conditions.size() << " conditions\n";
}

}  // namespace ambigeo::cli
