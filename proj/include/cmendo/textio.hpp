#pragma once

#include <string>
#include <vector>

#include "cmendo/arith.hpp"

namespace cmendo {

/// Line-oriented key/value tree.  A line is either `key value...`, or
/// `key {` opening a block closed by a lone `}`.  Tokens are separated by
/// single spaces in canonical output; `#` starts a comment when parsing.
struct TextNode {
    std::string key;
    std::vector<std::string> values;
    std::vector<TextNode> children;
    bool block = false;
    int line = 0;
    int col = 0;

    static TextNode leaf(std::string key, std::vector<std::string> values);
    static TextNode section(std::string key, std::vector<TextNode> children = {});

    TextNode& add(TextNode child);
    TextNode& add_leaf(std::string key, std::vector<std::string> values);

    // Lookups throw ParseError at this node's position when absent.
    const TextNode& child(const std::string& key) const;
    const TextNode* find(const std::string& key) const;
    std::vector<const TextNode*> all(const std::string& key) const;
    // Throws ParseError when a child key is not in the allowed list.
    void expect_keys(const std::vector<std::string>& allowed) const;

    Int int_at(std::size_t i) const;
    std::vector<Int> ints() const;
    std::size_t expect_count(std::size_t n) const;
};

// Children of the returned root are the top-level lines.
TextNode parse_text(const std::string& text);
std::string write_text(const TextNode& root);

}  // namespace cmendo
