#include "wvx/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "wvx/range_ops.hpp"
#include "wvx/serialize.hpp"
#include "wvx/stats.hpp"

namespace wvx::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string mode_name(mode m) {
    switch (m) {
        case mode::doc: return "doc";
        case mode::hier: return "hier";
        case mode::inv: return "inv";
        case mode::combined: return "combined";
    }
    return "?";
}

mode parse_mode(std::string_view s) {
    if (s == "doc") return mode::doc;
    if (s == "hier") return mode::hier;
    if (s == "inv") return mode::inv;
    if (s == "combined") return mode::combined;
    throw usage_error("unknown mode '" + std::string(s) + "' (doc, hier, inv, combined)");
}

// ---------------------------------------------------------------------------
// bundle

namespace {

enum section : std::uint64_t { kDocSection = 1, kHierSection = 2, kInvSection = 3 };

std::vector<std::uint64_t> sections_for(mode m) {
    switch (m) {
        case mode::doc: return {kDocSection};
        case mode::hier: return {kHierSection};
        case mode::inv: return {kInvSection};
        case mode::combined: return {kDocSection, kInvSection};
    }
    return {};
}

}  // namespace

void save_bundle(const bundle& b, std::ostream& out, bool store_text) {
    std::vector<std::pair<std::uint64_t, std::string>> payloads;
    for (auto kind : sections_for(b.kind)) {
        std::ostringstream s;
        switch (kind) {
            case kDocSection: b.doc.value().save(s, store_text); break;
            case kHierSection: b.hier.value().save(s, store_text); break;
            case kInvSection: b.inv.value().save(s); break;
        }
        payloads.emplace_back(kind, std::move(s).str());
    }
    io::put_magic(out, "WVIX");
    io::put_u64(out, kBundleVersion);
    io::put_u64(out, static_cast<std::uint64_t>(b.kind));
    io::put_u64(out, payloads.size());
    std::uint64_t offset = 4 + 8 * 3 + 24 * payloads.size();
    for (auto& [kind, bytes] : payloads) {
        io::put_u64(out, kind);
        io::put_u64(out, offset);
        io::put_u64(out, bytes.size());
        offset += bytes.size();
    }
    for (auto& [kind, bytes] : payloads) out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

bundle load_bundle(std::istream& in) {
    const std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::istringstream head(data);
    io::expect_magic(head, "WVIX");
    const auto version = io::get_u64(head);
    if (version != kBundleVersion) throw io::format_error("unsupported bundle version " + std::to_string(version));
    const auto raw_mode = io::get_u64(head);
    if (raw_mode < 1 || raw_mode > 4) throw io::format_error("unknown bundle mode " + std::to_string(raw_mode));
    bundle b;
    b.kind = static_cast<mode>(raw_mode);
    const auto count = io::get_u64(head);
    const auto want = sections_for(b.kind);
    if (count != want.size()) throw io::format_error("section count does not match the mode");
    for (std::uint64_t s = 0; s < count; ++s) {
        const auto kind = io::get_u64(head), offset = io::get_u64(head), length = io::get_u64(head);
        if (kind != want[s]) throw io::format_error("unexpected section kind");
        if (offset > data.size() || length > data.size() - offset) throw io::format_error("section out of bounds");
        std::istringstream body(data.substr(offset, length));
        switch (kind) {
            case kDocSection: b.doc = doc_index::load(body); break;
            case kHierSection: b.hier = hier_index::load(body); break;
            case kInvSection: b.inv = inv_index::load(body); break;
        }
        if (body.peek() != std::char_traits<char>::eof()) throw io::format_error("trailing bytes in section");
    }
    if (b.doc && b.inv && b.doc->docs() != b.inv->docs())
        throw io::format_error("combined sections disagree on the document count");
    return b;
}

bundle load_bundle_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw input_error("cannot open index " + p.string());
    return load_bundle(in);
}

// ---------------------------------------------------------------------------
// input

std::string read_file(const fs::path& p) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) throw input_error(p.string() + " is a directory");
    std::ifstream in(p, std::ios::binary);
    if (!in) throw input_error("cannot read " + p.string());
    std::string s{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (in.bad()) throw input_error("error reading " + p.string());
    return s;
}

std::vector<std::string> read_corpus(const fs::path& p, char sep) {
    std::error_code ec;
    std::vector<std::string> docs;
    if (fs::is_directory(p, ec)) {
        std::vector<fs::path> files;
        for (auto& e : fs::directory_iterator(p, ec))
            if (e.is_regular_file()) files.push_back(e.path());
        if (ec) throw input_error("cannot list " + p.string());
        std::sort(files.begin(), files.end(),
                  [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
        for (auto& f : files) docs.push_back(read_file(f));
    } else {
        const auto text = read_file(p);
        std::size_t begin = 0;
        while (begin < text.size()) {
            auto end = text.find(sep, begin);
            if (end == std::string::npos) end = text.size();
            docs.push_back(text.substr(begin, end - begin));
            begin = end + 1;
        }
    }
    if (docs.empty()) throw input_error("no documents in " + p.string());
    return docs;
}

bundle build_bundle(const build_options& opt) {
    bundle b;
    b.kind = opt.kind;
    if (opt.kind == mode::hier) {
        b.hier = hier_index::from_xml(read_file(opt.input));
        return b;
    }
    const auto docs = read_corpus(opt.input, opt.sep);
    if (opt.kind == mode::doc || opt.kind == mode::combined) b.doc = doc_index(docs);
    if (opt.kind == mode::inv || opt.kind == mode::combined) {
        stem_map stems;
        if (opt.stems) stems = parse_stem_map(read_file(*opt.stems));
        b.inv = inv_index(docs, stems);
    }
    return b;
}

void attach_corpus(bundle& b, const fs::path& corpus, char sep) {
    try {
        if (b.hier) {
            b.hier->text().attach_text(parse_xml(read_file(corpus)).leaf_text);
        } else if (b.doc) {
            b.doc->attach_text(read_corpus(corpus, sep));
        }
    } catch (const sentinel_collision&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw input_error(std::string("--corpus: ") + e.what());
    }
}

void print_build_report(const bundle& b, std::ostream& out) {
    auto line = [&](const std::string& k, std::size_t v) { out << k << '\t' << v << '\n'; };
    out << "mode\t" << mode_name(b.kind) << '\n';
    auto doc_lines = [&](const std::string& pre, const doc_index& d) {
        line(pre + "m", d.docs());
        line(pre + "n", d.size());
        line(pre + "u", d.doc_array().distinct());
        line(pre + "D_level_bits", d.doc_array().level_bits());
        line(pre + "D_aux_bits", d.doc_array().aux_bits());
        line(pre + "total_bits", d.size_in_bits());
    };
    if (b.doc) doc_lines("doc.", *b.doc);
    if (b.hier) {
        auto& h = *b.hier;
        line("hier.nodes", h.nodes());
        line("hier.leaves", h.leaves());
        line("hier.tau", h.tags());
        line("hier.P_bits", h.tree().size());
        line("hier.Tag_level_bits", h.tag_seq().level_bits());
        line("hier.Tag_aux_bits", h.tag_seq().aux_bits());
        line("hier.total_bits", h.size_in_bits());
        doc_lines("hier.text.", h.text());
    }
    if (b.inv) {
        auto& x = *b.inv;
        line("inv.m", x.docs());
        line("inv.nu", x.terms());
        line("inv.n", x.size());
        line("inv.N", x.tokens());
        line("inv.u", x.postings().distinct());
        line("inv.L_level_bits", x.postings().level_bits());
        line("inv.L_aux_bits", x.postings().aux_bits());
        line("inv.total_bits", x.size_in_bits());
    }
}

// ---------------------------------------------------------------------------
// queries

namespace {

std::size_t parse_size(const std::string& s, const char* what) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw usage_error(std::string("expected a non-negative integer for ") + what + ", got '" + s + "'");
    return v;
}

std::pair<std::size_t, std::size_t> parse_pair(const std::string& s, const char* what) {
    auto colon = s.find(':');
    if (colon == std::string::npos) throw usage_error(std::string(what) + " must look like a:b, got '" + s + "'");
    return {parse_size(s.substr(0, colon), what), parse_size(s.substr(colon + 1), what)};
}

void emit(std::ostream& out, const json& rec, bool as_json) {
    if (as_json) {
        out << rec.dump() << '\n';
        return;
    }
    bool first = true;
    auto field = [&](const json& v) {
        if (!first) out << '\t';
        first = false;
        out << (v.is_string() ? v.get<std::string>() : v.dump());
    };
    for (auto& [k, v] : rec.items()) {
        if (v.is_array()) {
            for (auto& e : v) field(e);
        } else {
            field(v);
        }
    }
    out << '\n';
}

json freqs_json(const std::vector<std::size_t>& f) {
    json a = json::array();
    for (auto x : f) a.push_back(x);
    return a;
}

class runner {
public:
    runner(const bundle& b, const std::vector<std::string>& args, const query_options& opt, std::ostream& err)
        : b_(b), args_(args), opt_(opt), err_(err) {}

    std::vector<json> run(const std::string& cmd) {
        static const std::map<std::string, std::vector<json> (runner::*)()> table = {
            {"dlist", &runner::dlist},       {"dfreq", &runner::dfreq},
            {"dint", &runner::dint},         {"hdlist", &runner::hdlist},
            {"hdint", &runner::hdint},       {"hdfreq", &runner::hdfreq},
            {"rqq", &runner::rqq_cmd},       {"rnv", &runner::rnv_cmd},
            {"rint", &runner::rint_cmd},     {"count", &runner::count},
            {"report", &runner::report},     {"ft-get", &runner::ft_get},
            {"ft-seg", &runner::ft_seg},     {"lt-seg", &runner::lt_seg},
            {"intersect", &runner::intersect}, {"stem-intersect", &runner::stem_intersect},
            {"vocab-of", &runner::vocab_of}, {"contains", &runner::contains},
            {"persin-prefix", &runner::persin_prefix},
        };
        auto it = table.find(cmd);
        if (it == table.end()) throw usage_error("unknown query '" + cmd + "'");
        cmd_ = cmd;
        return (this->*(it->second))();
    }

private:
    void arity(std::size_t lo, std::size_t hi, const char* shape) const {
        if (args_.size() < lo || args_.size() > hi) throw usage_error("usage: query INDEX " + cmd_ + " " + shape);
    }
    std::size_t num(std::size_t k, const char* what) const { return parse_size(args_[k], what); }
    std::size_t dmin() const { return opt_.range ? opt_.range->first : 1; }
    std::size_t dmax() const { return opt_.range ? opt_.range->second : SIZE_MAX; }

    const doc_index& docs() const {
        if (b_.doc) return *b_.doc;
        if (b_.hier) return b_.hier->text();
        throw usage_error(cmd_ + " needs a doc, hier or combined index");
    }
    const hier_index& hier() const {
        if (!b_.hier) throw usage_error(cmd_ + " needs a hier index");
        return *b_.hier;
    }
    const inv_index& inv() const {
        if (!b_.inv) throw usage_error(cmd_ + " needs an inv or combined index");
        return *b_.inv;
    }
    const wavelet_tree& seq() const {
        const std::string which = opt_.seq.value_or(b_.doc ? "D" : b_.inv ? "L" : "Tag");
        if (which == "D") return docs().doc_array();
        if (which == "L") return inv().postings();
        if (which == "Tag") return hier().tag_seq();
        throw usage_error("--seq must be D, L or Tag");
    }

    // "run*" names the stem range of "run"; anything else a single term.
    std::optional<term_range> resolve(const std::string& arg, bool as_stem) const {
        const auto& v = inv().vocab();
        const bool star = !arg.empty() && arg.back() == '*';
        if (as_stem || star) {
            const auto stem = star ? arg.substr(0, arg.size() - 1) : arg;
            if (auto r = v.stem_range(stem)) return term_range{r->first, r->second};
        } else if (auto t = v.find(arg)) {
            return term_range{*t};
        }
        err_ << "warning: unknown term '" << arg << "'\n";
        return std::nullopt;
    }
    std::optional<std::size_t> single_term(const std::string& arg) const {
        auto r = resolve(arg, false);
        if (!r) return std::nullopt;
        if (r->first != r->last) throw usage_error(cmd_ + " takes a single term, not a stem range");
        return r->first;
    }

    std::vector<json> dlist() {
        arity(1, 1, "PATTERN");
        std::vector<json> out;
        for (auto& [d, tf] : docs().dlist(args_[0], dmin(), dmax())) out.push_back({{"doc", d}, {"tf", tf}});
        return out;
    }
    std::vector<json> dfreq() {
        arity(2, 2, "PATTERN DOC");
        return {json{{"tf", docs().dfreq(args_[0], num(1, "DOC"))}}};
    }
    std::vector<json> dint() {
        arity(1, SIZE_MAX, "PATTERN...");
        std::vector<json> out;
        for (auto& h : docs().dint(args_, opt_.threshold.value_or(args_.size()), dmin(), dmax()))
            out.push_back({{"doc", h.doc}, {"freqs", freqs_json(h.freqs)}});
        return out;
    }
    std::vector<json> hdlist() {
        arity(2, 2, "TAG PATTERN");
        auto t = hier().tag_id(args_[0]);
        if (!t) {
            err_ << "warning: unknown tag '" << args_[0] << "'\n";
            return {};
        }
        std::vector<json> out;
        for (auto& h : hier().hdlist(*t, args_[1], dmin(), dmax())) out.push_back({{"node", h.node}, {"freq", h.freq}});
        return out;
    }
    std::vector<json> hdint() {
        arity(3, 3, "TAG PATTERN1 PATTERN2");
        auto t = hier().tag_id(args_[0]);
        if (!t) {
            err_ << "warning: unknown tag '" << args_[0] << "'\n";
            return {};
        }
        std::vector<json> out;
        for (auto& h : hier().hdint(*t, args_[1], args_[2], dmin(), dmax()))
            out.push_back({{"node", h.node}, {"f1", h.f1}, {"f2", h.f2}});
        return out;
    }
    std::vector<json> hdfreq() {
        arity(2, 2, "PATTERN NODE");
        return {json{{"freq", hier().hdfreq(args_[0], num(1, "NODE"))}}};
    }

    std::vector<json> rqq_cmd() {
        arity(3, 3, "I J K");
        auto r = rqq(seq(), num(0, "I"), num(1, "J"), num(2, "K"));
        return {json{{"symbol", r.symbol}, {"freq", r.freq}}};
    }
    std::vector<json> rnv_cmd() {
        arity(3, 3, "I J X");
        auto r = rnv(seq(), num(0, "I"), num(1, "J"), num(2, "X"));
        if (!r) return {};
        return {json{{"symbol", r->symbol}, {"freq", r->freq}, {"rank", r->rank}}};
    }
    std::vector<json> rint_cmd() {
        arity(1, SIZE_MAX, "I:J...");
        std::vector<interval> ranges;
        for (auto& a : args_) {
            auto [i, j] = parse_pair(a, "range");
            ranges.push_back({i, j});
        }
        auto ys = opt_.range ? opt_.range->first : 1, ye = opt_.range ? opt_.range->second : kMaxSymbol;
        std::vector<json> out;
        for (auto& h : rint(seq(), ranges, opt_.threshold.value_or(ranges.size()), ys, ye))
            out.push_back({{"symbol", h.symbol}, {"freqs", freqs_json(h.freqs)}});
        return out;
    }
    std::vector<json> count() {
        arity(4, 4, "I J YS YE");
        return {json{{"count", seq().count(num(0, "I"), num(1, "J"), num(2, "YS"), num(3, "YE"))}}};
    }
    std::vector<json> report() {
        arity(2, 2, "I J");
        auto ys = opt_.range ? opt_.range->first : 1, ye = opt_.range ? opt_.range->second : kMaxSymbol;
        std::vector<json> out;
        for (auto& [s, c] : seq().report(num(0, "I"), num(1, "J"), ys, ye)) out.push_back({{"symbol", s}, {"count", c}});
        return out;
    }

    std::vector<json> ft_get() {
        arity(2, 2, "TERM K");
        auto r = resolve(args_[0], false);
        if (!r) return {};
        return {json{{"doc", inv().ft_get(*r, num(1, "K"))}}};
    }
    std::vector<json> ft_seg() {
        arity(3, 3, "TERM K K2");
        auto r = resolve(args_[0], false);
        if (!r) return {};
        std::vector<json> out;
        for (auto d : inv().ft_segment(*r, num(1, "K"), num(2, "K2"))) out.push_back({{"doc", d}});
        return out;
    }
    std::vector<json> lt_seg() {
        arity(3, 3, "TERM I I2");
        auto t = single_term(args_[0]);
        if (!t) return {};
        std::vector<json> out;
        for (auto& p : inv().lt_segment(*t, num(1, "I"), num(2, "I2"), dmin(), dmax()))
            out.push_back({{"doc", p.doc}, {"tf", p.tf}});
        return out;
    }
    std::vector<json> intersect_impl(bool as_stem) {
        arity(1, SIZE_MAX, "TERM...");
        std::vector<term_range> known;
        std::vector<std::size_t> slot;
        for (std::size_t k = 0; k < args_.size(); ++k)
            if (auto r = resolve(args_[k], as_stem)) {
                known.push_back(*r);
                slot.push_back(k);
            }
        const std::size_t thr = opt_.threshold.value_or(args_.size());
        if (thr == 0 || thr > args_.size()) throw usage_error("--threshold must be within 1..number of terms");
        if (known.size() < thr) return {};
        std::vector<json> out;
        for (auto& h : inv().intersect(known, thr, dmin(), dmax())) {
            std::vector<std::size_t> f(args_.size(), 0);
            for (std::size_t k = 0; k < slot.size(); ++k) f[slot[k]] = h.freqs[k];
            out.push_back({{"doc", h.doc}, {"freqs", freqs_json(f)}});
        }
        return out;
    }
    std::vector<json> intersect() { return intersect_impl(false); }
    std::vector<json> stem_intersect() { return intersect_impl(true); }
    std::vector<json> vocab_of() {
        arity(1, 1, "DOC");
        std::vector<json> out;
        for (auto t : inv().local_vocab(num(0, "DOC"))) out.push_back({{"term_id", t}, {"term", inv().vocab().term(t)}});
        return out;
    }
    std::vector<json> contains() {
        arity(2, 2, "TERM DOC");
        auto t = single_term(args_[0]);
        if (!t) return {};
        auto off = inv().contains(*t, num(1, "DOC"));
        if (!off) return {json{{"present", false}}};
        return {json{{"present", true}, {"offset", *off}, {"tf", inv().tf_at(*t, *off)}}};
    }
    std::vector<json> persin_prefix() {
        arity(2, 2, "TERM F");
        auto t = single_term(args_[0]);
        if (!t) return {};
        return {json{{"prefix", inv().persin_prefix(*t, num(1, "F"))}}};
    }

    const bundle& b_;
    const std::vector<std::string>& args_;
    const query_options& opt_;
    std::ostream& err_;
    std::string cmd_;
};

}  // namespace

const std::vector<std::string>& query_commands() {
    static const std::vector<std::string> names = {
        "dlist", "dfreq", "dint", "hdlist", "hdint", "hdfreq", "rqq", "rnv", "rint", "count",
        "report", "ft-get", "ft-seg", "lt-seg", "intersect", "stem-intersect", "vocab-of", "contains", "persin-prefix",
    };
    return names;
}

void run_query(const bundle& b, const std::string& command, const std::vector<std::string>& args,
               const query_options& opt, std::ostream& out, std::ostream& err) {
    if (opt.range && opt.range->first > opt.range->second) throw usage_error("--range needs a <= b");
    std::optional<stats_scope> scope;
    if (opt.stats) scope.emplace();
    runner r(b, args, opt, err);
    const auto records = r.run(command);
    for (auto& rec : records) emit(out, rec, opt.json);
    if (scope) {
        if (opt.json)
            err << json{{"node_visits", scope->node_visits()}}.dump() << '\n';
        else
            err << "node_visits\t" << scope->node_visits() << '\n';
    }
}

int report_error(std::ostream& err) {
    auto say = [&](const char* kind, const std::exception& e, int code) {
        err << "wvx: " << kind << ": " << e.what() << '\n';
        return code;
    };
    try {
        throw;
    } catch (const sentinel_collision& e) {
        return say("sentinel collision", e, kSentinel);
    } catch (const xml_error& e) {
        return say("malformed XML", e, kMalformedXml);
    } catch (const io::format_error& e) {
        return say("bad index", e, kBadIndex);
    } catch (const input_error& e) {
        return say("unreadable input", e, kUnreadable);
    } catch (const text_unavailable& e) {
        return say("text unavailable (pass --corpus)", e, kTextMissing);
    } catch (const std::invalid_argument& e) {
        return say("usage", e, kUsage);
    } catch (const std::out_of_range& e) {
        return say("usage", e, kUsage);
    } catch (const std::exception& e) {
        return say("error", e, 1);
    }
}

}  // namespace wvx::cli
