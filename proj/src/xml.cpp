#include "wvx/xml.hpp"

#include <algorithm>
#include <cctype>

namespace wvx {

namespace {

bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' || c == ':';
}
bool blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

// Element being parsed; children are emitted lazily because whether the
// element is a leaf is only known at its close tag.
struct open_element {
    std::string name;
    bool has_children = false;
    std::string pending;  // text seen since the last child element
};

class parser {
public:
    explicit parser(std::string_view in) : in_(in) {}

    xml_layout run() {
        skip_space();
        if (pos_ >= in_.size()) fail("empty document");
        if (in_[pos_] != '<') fail("expected a root element");
        while (pos_ < in_.size()) {
            if (in_[pos_] == '<') {
                tag();
            } else {
                const std::size_t end = std::min(in_.find('<', pos_), in_.size());
                text(in_.substr(pos_, end - pos_));
                advance_to(end);
            }
            if (stack_.empty()) break;
        }
        if (!stack_.empty()) fail("unclosed element <" + stack_.back().name + ">");
        skip_space();
        if (pos_ < in_.size()) fail("content after the root element");
        return std::move(out_);
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw xml_error(what, line_, col_); }

    void advance_to(std::size_t target) {
        for (; pos_ < target; ++pos_) {
            if (in_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
        }
    }
    void skip_space() {
        std::size_t p = pos_;
        while (p < in_.size() && std::isspace(static_cast<unsigned char>(in_[p]))) ++p;
        advance_to(p);
    }

    std::string name() {
        if (pos_ >= in_.size() || !name_start(in_[pos_])) fail("expected a tag name");
        std::size_t p = pos_;
        while (p < in_.size() && name_char(in_[p])) ++p;
        std::string s(in_.substr(pos_, p - pos_));
        advance_to(p);
        return s;
    }

    void expect(char c, const char* what) {
        if (pos_ >= in_.size() || in_[pos_] != c) fail(what);
        advance_to(pos_ + 1);
    }

    void text(std::string_view t) {
        if (stack_.empty()) {
            if (!blank(t)) fail("text outside the root element");
            return;
        }
        stack_.back().pending += t;
    }

    void flush_text(open_element& e) {
        if (!blank(e.pending)) emit_leaf(std::string(kTextTag), std::move(e.pending));
        e.pending.clear();
    }

    void emit_leaf(const std::string& tag, std::string text) {
        out_.parens.push_back(true);
        out_.tags.push_back(tag);
        out_.parens.push_back(false);
        out_.tags.push_back(tag);
        out_.leaf_text.push_back(std::move(text));
    }

    void open(std::string n) {
        if (!stack_.empty()) {
            stack_.back().has_children = true;
            flush_text(stack_.back());
        }
        stack_.push_back({std::move(n), false, {}});
        out_.parens.push_back(true);
        out_.tags.push_back(stack_.back().name);
    }

    void close() {
        auto e = std::move(stack_.back());
        stack_.pop_back();
        if (e.has_children) {
            flush_text(e);
        } else {
            out_.leaf_text.push_back(std::move(e.pending));
        }
        out_.parens.push_back(false);
        out_.tags.push_back(e.name);
    }

    void tag() {
        expect('<', "expected '<'");
        if (pos_ < in_.size() && in_[pos_] == '/') {
            advance_to(pos_ + 1);
            auto n = name();
            skip_space();
            expect('>', "expected '>' after closing tag name");
            if (stack_.empty()) fail("closing tag </" + n + "> without an open element");
            if (stack_.back().name != n) fail("closing tag </" + n + "> does not match <" + stack_.back().name + ">");
            close();
            return;
        }
        if (pos_ < in_.size() && (in_[pos_] == '!' || in_[pos_] == '?'))
            fail("comments, declarations and processing instructions are not supported");
        if (stack_.empty() && !out_.parens.empty()) fail("more than one root element");
        auto n = name();
        skip_space();
        if (pos_ < in_.size() && in_[pos_] == '/') {
            advance_to(pos_ + 1);
            expect('>', "expected '>' after '/'");
            open(n);
            close();
            return;
        }
        if (pos_ < in_.size() && in_[pos_] != '>') fail("attributes are not supported");
        expect('>', "expected '>' after tag name");
        open(std::move(n));
    }

    std::string_view in_;
    std::size_t pos_ = 0, line_ = 1, col_ = 1;
    std::vector<open_element> stack_;
    xml_layout out_;
};

}  // namespace

xml_layout parse_xml(std::string_view input) { return parser(input).run(); }

}  // namespace wvx
