#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wvx/doc_index.hpp"
#include "wvx/hier_index.hpp"
#include "wvx/inv_index.hpp"

namespace wvx::cli {

enum exit_code : int {
    kOk = 0,
    kUsage = 2,
    kUnreadable = 3,
    kSentinel = 4,
    kMalformedXml = 5,
    kBadIndex = 6,
    kTextMissing = 7,
};

struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class mode : std::uint64_t { doc = 1, hier = 2, inv = 3, combined = 4 };
std::string mode_name(mode m);
mode parse_mode(std::string_view s);

inline constexpr std::uint64_t kBundleVersion = 1;

struct bundle {
    mode kind = mode::doc;
    std::optional<doc_index> doc;
    std::optional<hier_index> hier;
    std::optional<inv_index> inv;
};

// "WVIX", version, mode, section count, then (kind, offset, length) per
// section and the payloads. Offsets are absolute.
void save_bundle(const bundle& b, std::ostream& out, bool store_text);
bundle load_bundle(std::istream& in);
bundle load_bundle_file(const std::filesystem::path& p);

std::string read_file(const std::filesystem::path& p);
// A directory gives one document per regular file, by filename; a file is
// split on `sep`, with a trailing separator not starting a new document.
std::vector<std::string> read_corpus(const std::filesystem::path& p, char sep);

struct build_options {
    mode kind = mode::doc;
    std::filesystem::path input;
    char sep = '\x1e';
    std::optional<std::filesystem::path> stems;
};
bundle build_bundle(const build_options& opt);
// One "key<TAB>value" line per figure: sizes and bit counts per structure.
void print_build_report(const bundle& b, std::ostream& out);

// Re-attach text to a bundle saved without it.
void attach_corpus(bundle& b, const std::filesystem::path& corpus, char sep);

struct query_options {
    std::optional<std::pair<std::size_t, std::size_t>> range;
    std::optional<std::size_t> threshold;
    std::optional<std::string> seq;  // D, L or Tag
    bool json = false;
    bool stats = false;
};

const std::vector<std::string>& query_commands();

// Runs one subcommand, writing records to `out` and warnings and counters
// to `err`. Throws usage_error on malformed arguments.
void run_query(const bundle& b, const std::string& command, const std::vector<std::string>& args,
               const query_options& opt, std::ostream& out, std::ostream& err);

// Maps the exception in flight to an exit code and prints its message.
int report_error(std::ostream& err);

}  // namespace wvx::cli
