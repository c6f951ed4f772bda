#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "wvx/cli.hpp"

using namespace wvx::cli;

namespace {

char parse_sep(const std::string& s) {
    if (s.size() == 1) return s[0];
    if (s == "\\t") return '\t';
    if (s == "\\n") return '\n';
    if (s.size() > 2 && (s.rfind("0x", 0) == 0 || s.rfind("0X", 0) == 0)) {
        const auto v = std::stoul(s.substr(2), nullptr, 16);
        if (v <= 0xFF) return static_cast<char>(v);
    }
    throw usage_error("--sep takes one byte: a character, \\t, \\n or 0xHH");
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& s) {
    const auto colon = s.find(':');
    try {
        if (colon != std::string::npos) {
            std::size_t used_a = 0, used_b = 0;
            const auto a = std::stoull(s.substr(0, colon), &used_a), b = std::stoull(s.substr(colon + 1), &used_b);
            if (used_a == colon && used_b == s.size() - colon - 1 && s[0] != '-' && s[colon + 1] != '-') return {a, b};
        }
    } catch (const std::exception&) {
    }
    throw usage_error("--range takes a:b, got '" + s + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wavelet-tree document retrieval and inverted indexes"};
    app.require_subcommand(1);

    std::string mode_arg = "doc", input, output, sep_arg = "0x1E", stems;
    bool store_text = false;
    auto* build = app.add_subcommand("build", "index a corpus and write a bundle");
    build->add_option("--mode", mode_arg, "doc, hier, inv or combined")->capture_default_str();
    build->add_option("input", input, "corpus directory, separated file, or XML file (hier)")->required();
    build->add_option("-o,--output", output, "bundle path")->required();
    build->add_option("--sep", sep_arg, "record separator byte for single-file corpora")->capture_default_str();
    build->add_flag("--store-text", store_text, "keep the corpus text inside the bundle");
    build->add_option("--stems", stems, "stem map file for inv mode (term stem per line)");

    std::string index, command, range_arg, seq, corpus;
    std::vector<std::string> args;
    std::size_t threshold = 0;
    bool json = false, stats = false;
    auto* query = app.add_subcommand("query", "run one query against a bundle");
    query->add_option("index", index, "bundle path")->required();
    query->add_option("command", command, "dlist dfreq dint hdlist hdint hdfreq rqq rnv rint count report ft-get "
                                          "ft-seg lt-seg intersect stem-intersect vocab-of contains persin-prefix")
        ->required();
    query->add_option("args", args, "query arguments");
    query->add_option("--range", range_arg, "doc range dmin:dmax (symbol range for rint/report)");
    query->add_option("--threshold", threshold, "minimum number of lists or patterns per result");
    query->add_option("--seq", seq, "sequence for rqq/rnv/rint/count/report: D, L or Tag");
    query->add_option("--corpus", corpus, "corpus to re-attach when the bundle has no text");
    query->add_option("--sep", sep_arg, "record separator byte of --corpus");
    query->add_flag("--json", json, "JSON lines instead of TSV");
    query->add_flag("--stats", stats, "print node-visit counters to stderr");

    auto* info = app.add_subcommand("info", "print the build report of a bundle");
    info->add_option("index", index, "bundle path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (build->parsed()) {
            build_options opt;
            opt.kind = parse_mode(mode_arg);
            opt.input = input;
            opt.sep = parse_sep(sep_arg);
            if (!stems.empty()) opt.stems = stems;
            auto b = build_bundle(opt);
            std::ofstream out(output, std::ios::binary);
            if (!out) throw input_error("cannot write " + output);
            save_bundle(b, out, store_text);
            if (!out.flush()) throw input_error("error writing " + output);
            print_build_report(b, std::cout);
        } else if (query->parsed()) {
            auto b = load_bundle_file(index);
            if (!corpus.empty()) attach_corpus(b, corpus, parse_sep(sep_arg));
            query_options opt;
            if (!range_arg.empty()) opt.range = parse_range(range_arg);
            if (query->count("--threshold")) opt.threshold = threshold;
            if (!seq.empty()) opt.seq = seq;
            opt.json = json;
            const char* env = std::getenv("WVX_STATS");
            opt.stats = stats || (env && std::string(env) == "1");
            run_query(b, command, args, opt, std::cout, std::cerr);
        } else {
            print_build_report(load_bundle_file(index), std::cout);
        }
    } catch (...) {
        return report_error(std::cerr);
    }
    return kOk;
}
