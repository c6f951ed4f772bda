#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wvx {

struct xml_error : std::runtime_error {
    xml_error(const std::string& what, std::size_t line, std::size_t column)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line(line),
          column(column) {}
    std::size_t line, column;
};

// Tag name given to leaves created for text that sits between elements.
inline constexpr std::string_view kTextTag = "#text";

// Preorder layout of a parsed document: one open and one close entry per
// node, the node's tag name on both, and the text of every leaf in order.
struct xml_layout {
    std::vector<bool> parens;            // true = open
    std::vector<std::string> tags;       // per parenthesis
    std::vector<std::string> leaf_text;  // per leaf, in document order
};

// Minimal XML: elements <name>...</name> and <name/>, character data, and
// nothing else (no attributes, comments, entities or declarations). An
// element without child elements is a leaf holding its text. Text next to
// child elements becomes a #text leaf unless it is only whitespace.
xml_layout parse_xml(std::string_view input);

}  // namespace wvx
