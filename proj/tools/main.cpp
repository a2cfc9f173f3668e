// ambigeo: batch command-line front end.
//
// Exit codes: 0 success, 1 internal error, 2 user or input error.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ambigeo/error.hpp"
#include "commands.hpp"

namespace {

unsigned threads_from_env() {
    if (const char* env = std::getenv("AMBIGEO_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace ambigeo::cli;

    CLI::App app{"ambigeo - geometry of word meanings in contextual embedding space"};
    app.require_subcommand(1);
    unsigned threads = threads_from_env();
    app.add_option("--threads", threads, "Worker cap (default: $AMBIGEO_THREADS or 1)")->check(CLI::PositiveNumber);

    WindowsOptions win;
    auto* windows = app.add_subcommand("windows", "Build ~N-word sentence windows around target occurrences");
    windows->add_option("--corpus", win.corpus_dir, "Directory of plain-text documents")->required();
    windows->add_option("--targets", win.targets_file, "One target word per line")->required();
    windows->add_option("--size", win.size, "Target window size in words")->capture_default_str();
    windows->add_option("--out", win.out, "Output JSONL")->required();
    windows->add_flag("--presegmented", win.presegmented, "Documents hold one sentence per line");

    DiversityOptions div;
    auto* diversity = app.add_subcommand("diversity", "Mean pairwise cosine distance per word");
    diversity->add_option("--embeddings", div.embeddings_dir, "Directory of .embv1 files")->required();
    diversity->add_option("--out", div.out, "Output CSV")->required();

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Regression or factorial statistics over diversity values");
    simulate->add_option("--diversity", sim.diversity_file, "Diversity CSV")->required();
    simulate->add_option("--conditions", sim.conditions_file, "CSV word,condition[,n_senses,n_meanings]")->required();
    simulate->add_option("--design", sim.design, "regression | factorial")
        ->check(CLI::IsMember({"regression", "factorial"}))
        ->capture_default_str();
    simulate->add_option("--out", sim.out, "Output JSON")->required();

    CasestudyOptions cs;
    auto* casestudy = app.add_subcommand("casestudy", "t-SNE, proxigram, group similarity and classification");
    casestudy->add_option("--embeddings", cs.embeddings_file, "EMBV1 file")->required();
    casestudy->add_option("--labels", cs.labels_file, "Label JSONL")->required();
    casestudy->add_option("--merges", cs.merges_file, "JSON object mapping labels to merged labels");
    casestudy->add_option("--tsne-perplexity", cs.perplexity)->capture_default_str();
    casestudy->add_option("--tsne-iterations", cs.iterations)->capture_default_str();
    casestudy->add_option("--tsne-learning-rate", cs.learning_rate)->capture_default_str();
    casestudy->add_option("--seed", cs.seed)->capture_default_str();
    casestudy->add_option("--knn", cs.knn, "Proxigram neighbours per point")->capture_default_str();
    casestudy->add_option("--test-fraction", cs.test_fraction)->capture_default_str();
    casestudy->add_flag("--stratify", cs.stratify, "Stratify the train/test split by label");
    casestudy->add_option("--ci-level", cs.ci_level)->capture_default_str();
    casestudy->add_option("--near-colour", cs.near_colour)->capture_default_str();
    casestudy->add_option("--far-colour", cs.far_colour)->capture_default_str();
    casestudy->add_option("--out-dir", cs.out_dir)->required();

    InteractionOptions ix;
    auto* interaction = app.add_subcommand("interaction", "Group status x word type model over two words' pairs.csv");
    interaction->add_option("--pairs", ix.pair_files, "pairs.csv from casestudy (repeat per word)")->required();
    interaction->add_option("--reference", ix.reference_word, "Word coded word_type = 1 (default: first seen)");
    interaction->add_option("--out", ix.out, "Output JSON")->required();

    AgreementOptions ag;
    auto* agreement = app.add_subcommand("agreement", "Krippendorff alpha against raters, majority ground truth");
    agreement->add_option("--auto", ag.auto_file, "Auto-translation label JSONL")->required();
    agreement->add_option("--rater", ag.rater_files, "Rater label JSONL (repeatable)")->required();
    agreement->add_option("--merges", ag.merges_file, "JSON object mapping labels to merged labels");
    agreement->add_option("--min-agree", ag.min_agree)->capture_default_str();
    agreement->add_option("--majority-out", ag.majority_out, "Write majority-vote labels as JSONL");
    agreement->add_option("--out", ag.out, "Output JSON")->required();

    SynthOptions sy;
    auto* synth = app.add_subcommand("synth", "Synthetic ambiguity experiment and fixtures");
    synth->add_option("--config", sy.config_file, "Profile JSON")->required();
    synth->add_option("--out-dir", sy.out_dir)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*windows) run_windows(win);
        if (*diversity) {
            div.threads = threads;
            run_diversity(div);
        }
        if (*simulate) run_simulate(sim);
        if (*casestudy) {
            cs.threads = threads;
            run_casestudy(cs);
        }
        if (*interaction) run_interaction(ix);
        if (*agreement) run_agreement(ag);
        if (*synth) {
            sy.threads = threads;
            run_synth(sy);
        }
    } catch (const ambigeo::Error& e) {
        std::cerr << "ambigeo: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ambigeo: internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
