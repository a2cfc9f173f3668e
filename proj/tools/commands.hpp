#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ambigeo::cli {

struct WindowsOptions {
    std::string corpus_dir;
    std::string targets_file;
    std::size_t size = 100;
    std::string out;
    bool presegmented = false;
};

struct DiversityOptions {
    std::string embeddings_dir;
    std::string out;
    unsigned threads = 1;
};

struct SimulateOptions {
    std::string diversity_file;
    std::string conditions_file;
    std::string design = "regression";
    std::string out;
};

struct CasestudyOptions {
    std::string embeddings_file;
    std::string labels_file;
    std::string merges_file;
    double perplexity = 30.0;
    std::size_t iterations = 1000;
    double learning_rate = 200.0;
    std::uint64_t seed = 0;
    std::size_t knn = 3;
    double test_fraction = 0.5;
    bool stratify = false;
    double ci_level = 0.99;
    std::string near_colour = "#ff0000";
    std::string far_colour = "#0000ff";
    std::string out_dir;
    unsigned threads = 1;
};

struct InteractionOptions {
    std::vector<std::string> pair_files;
    std::string reference_word;
    std::string out;
};

struct AgreementOptions {
    std::string auto_file;
    std::vector<std::string> rater_files;
    std::string merges_file;
    std::size_t min_agree = 2;
    std::string out;
    std::string majority_out;
};

struct SynthOptions {
    std::string config_file;
    std::string out_dir;
    unsigned threads = 1;
};

void run_windows(const WindowsOptions& opt);
void run_diversity(const DiversityOptions& opt);
void run_simulate(const SimulateOptions& opt);
void run_casestudy(const CasestudyOptions& opt);
void run_interaction(const InteractionOptions& opt);
void run_agreement(const AgreementOptions& opt);
void run_synth(const SynthOptions& opt);

}  // namespace ambigeo::cli
