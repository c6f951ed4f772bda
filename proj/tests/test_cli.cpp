#include <set>

#include "cli_fixture.hpp"
#include "doctest.h"
#include "wvx/inv_index.hpp"

using namespace wvx;
using namespace fixture;

namespace {

std::string build_cmd(const fs::path& input, const fs::path& out, const std::string& flags) {
    return "build " + quote(input.string()) + " -o " + quote(out.string()) + " " + flags;
}

std::string report_value(const std::string& report, const std::string& key) {
    std::istringstream in(report);
    for (std::string line; std::getline(in, line);)
        if (line.rfind(key + "\t", 0) == 0) return line.substr(key.size() + 1);
    return "";
}

}  // namespace

TEST_CASE("build reports") {
    const auto tmp = scratch_dir();
    fs::create_directories(tmp / "two");
    std::ofstream(tmp / "two" / "a.txt") << "hello";
    std::ofstream(tmp / "two" / "b.txt") << "world";
    auto r = run_binary(build_cmd(tmp / "two", tmp / "two.wvx", "--mode doc"));
    REQUIRE(r.code == 0);
    CHECK(report_value(r.out, "doc.m") == "2");
    CHECK(report_value(r.out, "doc.n") == "12");

    r = run_binary(build_cmd(dir() / "corpus", tmp / "inv.wvx", "--mode inv"));
    REQUIRE(r.code == 0);
    std::size_t total_df = 0;
    for (auto& d : cli::read_corpus(dir() / "corpus", '\x1e')) {
        std::set<std::string> distinct;
        std::string w;
        for (char c : d + " ") {
            if (std::isalnum(static_cast<unsigned char>(c))) w += static_cast<char>(std::tolower(c));
            else if (!w.empty()) distinct.insert(std::exchange(w, ""));
        }
        total_df += distinct.size();
    }
    CHECK(report_value(r.out, "inv.n") == std::to_string(total_df));

    r = run_binary(build_cmd(dir() / "tiny.xml", tmp / "tiny.wvx", "--mode hier"));
    REQUIRE(r.code == 0);
    CHECK(report_value(r.out, "hier.tau") == "2");
    CHECK(report_value(r.out, "hier.leaves") == "2");

    auto info = run_binary("info " + quote((tmp / "tiny.wvx").string()));
    CHECK(info.code == 0);
    CHECK(info.out == r.out);
}

TEST_CASE("query examples") {
    const auto tmp = scratch_dir();
    const auto idx = quote((tmp / "ab.wvx").string());
    REQUIRE(run_binary(build_cmd(dir() / "anabanana.txt", tmp / "ab.wvx", "--store-text")).code == 0);
    auto r = run_binary("query " + idx + " dlist an");
    CHECK(r.code == 0);
    CHECK(r.out == "1\t1\n2\t2\n");

    r = run_binary("query " + idx + " dint zzz an");
    CHECK(r.code == 0);
    CHECK(r.out.empty());

    r = run_binary("query " + idx + " dlist an --json");
    CHECK(r.out == "{\"doc\":1,\"tf\":1}\n{\"doc\":2,\"tf\":2}\n");

    REQUIRE(run_binary(build_cmd(dir() / "corpus", tmp / "inv.wvx", "--mode inv")).code == 0);
    r = run_binary("query " + quote((tmp / "inv.wvx").string()) + " persin-prefix x 2");
    CHECK(r.code == 0);
    CHECK(r.out == "3\n");

    r = run_binary("query " + quote((tmp / "inv.wvx").string()) + " contains nosuch 1");
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(r.err.find("unknown term") != std::string::npos);
}

TEST_CASE("exit codes") {
    const auto tmp = scratch_dir();
    CHECK(run_binary("").code == cli::kUsage);
    CHECK(run_binary("build").code == cli::kUsage);
    CHECK(run_binary(build_cmd(tmp / "missing", tmp / "x.wvx", "")).code == cli::kUnreadable);
    CHECK(run_binary(build_cmd(dir() / "corpus", tmp / "x.wvx", "--mode nope")).code == cli::kUsage);
    CHECK(run_binary(build_cmd(dir() / "nul.txt", tmp / "x.wvx", "")).code == cli::kSentinel);
    auto bad = run_binary(build_cmd(dir() / "bad.xml", tmp / "x.wvx", "--mode hier"));
    CHECK(bad.code == cli::kMalformedXml);
    CHECK(bad.err.find("line 1") != std::string::npos);

    std::ofstream(tmp / "junk.wvx") << "not an index at all";
    CHECK(run_binary("query " + quote((tmp / "junk.wvx").string()) + " dlist a").code == cli::kBadIndex);
    CHECK(run_binary("query " + quote((tmp / "absent.wvx").string()) + " dlist a").code == cli::kUnreadable);

    // Unknown version.
    REQUIRE(run_binary(build_cmd(dir() / "corpus", tmp / "v.wvx", "--store-text")).code == 0);
    auto bytes = slurp(tmp / "v.wvx");
    bytes[4] = 9;
    std::ofstream(tmp / "v9.wvx", std::ios::binary) << bytes;
    CHECK(run_binary("query " + quote((tmp / "v9.wvx").string()) + " dlist a").code == cli::kBadIndex);
    // Truncated.
    std::ofstream(tmp / "cut.wvx", std::ios::binary) << bytes.substr(0, bytes.size() / 2);
    CHECK(run_binary("query " + quote((tmp / "cut.wvx").string()) + " dlist a").code == cli::kBadIndex);

    const auto v = quote((tmp / "v.wvx").string());
    CHECK(run_binary("query " + v + " nosuchquery").code == cli::kUsage);
    CHECK(run_binary("query " + v + " dlist").code == cli::kUsage);
    CHECK(run_binary("query " + v + " dfreq a z").code == cli::kUsage);
    CHECK(run_binary("query " + v + " dlist a --range 5").code == cli::kUsage);
    CHECK(run_binary("query " + v + " dlist a --range 5:2").code == cli::kUsage);
    CHECK(run_binary("query " + v + " rqq 1 2 99").code == cli::kUsage);
    CHECK(run_binary("query " + v + " ft-get x 1").code == cli::kUsage);
}

TEST_CASE("text-less bundles and corpus re-attach") {
    const auto tmp = scratch_dir();
    REQUIRE(run_binary(build_cmd(dir() / "corpus", tmp / "bare.wvx", "")).code == 0);
    const auto idx = quote((tmp / "bare.wvx").string());
    CHECK(run_binary("query " + idx + " dlist an").code == cli::kTextMissing);
    CHECK(run_binary("query " + idx + " report 1 10").code == 0);
    auto r = run_binary("query " + idx + " dlist an --corpus " + quote((dir() / "corpus").string()));
    CHECK(r.code == 0);
    CHECK(r.out == "1\t2\n2\t1\n3\t2\n4\t3\n6\t2\n");
    CHECK(run_binary("query " + idx + " dlist an --corpus " + quote((dir() / "anabanana.txt").string())).code ==
          cli::kUnreadable);

    REQUIRE(run_binary(build_cmd(dir() / "sample.xml", tmp / "h.wvx", "--mode hier")).code == 0);
    const auto h = quote((tmp / "h.wvx").string());
    CHECK(run_binary("query " + h + " hdlist book ana").code == cli::kTextMissing);
    CHECK(run_binary("query " + h + " hdlist book ana --corpus " + quote((dir() / "sample.xml").string())).code == 0);

    auto b = cli::build_bundle(options_for("doc"));
    auto bare = round_trip(b, false);
    CHECK(!bare.doc->has_text());
    cli::attach_corpus(bare, dir() / "corpus", '\x1e');
    CHECK(bare.doc->dlist("an") == b.doc->dlist("an"));
}

TEST_CASE("fixture queries cover every subcommand") {
    std::set<std::string> used;
    for (auto& q : load_queries()) used.insert(q.command);
    for (auto& c : cli::query_commands()) CHECK_MESSAGE(used.count(c), c);
}

TEST_CASE("round trip and determinism over the fixture queries") {
    const auto tmp = scratch_dir();
    const auto built = build_all();
    std::map<std::string, bundle> loaded;
    for (auto& [name, b] : built) {
        loaded[name] = round_trip(b);
        const auto r = run_binary(build_cmd(options_for(name).input, tmp / (name + ".wvx"), "--store-text" + build_flags(name)));
        REQUIRE(r.code == 0);
    }
    for (auto& q : load_queries()) {
        INFO(q.bundle << " " << q.command);
        const auto mem = run_in_memory(built.at(q.bundle), q);
        CHECK(mem.code == 0);
        CHECK(run_in_memory(loaded.at(q.bundle), q) == mem);

        std::string args = "query " + quote((tmp / (q.bundle + ".wvx")).string());
        for (auto& a : q.argv) args += " " + quote(a);
        const auto first = run_binary(args), second = run_binary(args);
        CHECK(first == mem);
        CHECK(second == first);

        // Counters never change the records.
        auto plain = q;
        plain.opt.stats = false;
        auto counted = q;
        counted.opt.stats = true;
        const auto a = run_in_memory(built.at(q.bundle), plain), b = run_in_memory(built.at(q.bundle), counted);
        CHECK(a.out == b.out);
        CHECK(b.err.find("node_visits") != std::string::npos);
    }

    // WVX_STATS=1 behaves like --stats.
    const auto idx = quote((tmp / "doc.wvx").string());
    const auto env = run_binary("query " + idx + " report 1 30", "WVX_STATS=1");
    const auto flag = run_binary("query " + idx + " report 1 30 --stats");
    CHECK(env == flag);
    CHECK(env.err.rfind("node_visits\t", 0) == 0);
}

TEST_CASE("fixture answers") {
    const auto built = build_all();
    auto run = [&](const std::string& line) {
        std::istringstream words(line);
        std::vector<std::string> w;
        for (std::string s; words >> s;) w.push_back(s);
        query_line q;
        q.bundle = w[0];
        q.command = w[1];
        q.args.assign(w.begin() + 2, w.end());
        return run_in_memory(built.at(q.bundle), q).out;
    };
    CHECK(run("inv lt-seg x 1 6") == "1\t3\n2\t1\n3\t3\n4\t2\n5\t1\n6\t1\n");
    CHECK(run("inv ft-get run* 2") == "3\n");  // ran, run, running, runs: docs 4 2 3 4 merged
    CHECK(run("inv stem-intersect run x") == "2\t1\t1\n3\t1\t1\n4\t2\t1\n");
    CHECK(run("inv vocab-of 4") == "5\tbandana\n8\tran\n9\trun\n12\tx\n");
    CHECK(run("inv contains x 4") == "true\t3\t2\n");
    CHECK(run("inv contains pie 4") == "false\n");
    CHECK(run("hier hdlist book ana") == "2\t5\n10\t2\n");
    CHECK(run("hier hdint book ana banana") == "2\t5\t2\n");
}
