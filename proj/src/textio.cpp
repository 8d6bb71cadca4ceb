#include "cmendo/textio.hpp"

#include <algorithm>
#include <sstream>

#include "cmendo/errors.hpp"

namespace cmendo {

TextNode TextNode::leaf(std::string key, std::vector<std::string> values) {
    TextNode n;
    n.key = std::move(key);
    n.values = std::move(values);
    return n;
}

TextNode TextNode::section(std::string key, std::vector<TextNode> children) {
    TextNode n;
    n.key = std::move(key);
    n.children = std::move(children);
    n.block = true;
    return n;
}

TextNode& TextNode::add(TextNode child) {
    children.push_back(std::move(child));
    return children.back();
}

TextNode& TextNode::add_leaf(std::string k, std::vector<std::string> v) { return add(leaf(std::move(k), std::move(v))); }

const TextNode* TextNode::find(const std::string& k) const {
    for (const auto& c : children)
        if (c.key == k) return &c;
    return nullptr;
}

const TextNode& TextNode::child(const std::string& k) const {
    const TextNode* c = find(k);
    if (!c) throw ParseError(line, col, "missing '" + k + "'" + (key.empty() ? "" : " in '" + key + "'"));
    return *c;
}

std::vector<const TextNode*> TextNode::all(const std::string& k) const {
    std::vector<const TextNode*> out;
    for (const auto& c : children)
        if (c.key == k) out.push_back(&c);
    return out;
}

void TextNode::expect_keys(const std::vector<std::string>& allowed) const {
    for (const auto& c : children)
        if (std::find(allowed.begin(), allowed.end(), c.key) == allowed.end())
            throw ParseError(c.line, c.col, "unknown key '" + c.key + "'");
}

namespace {

bool is_decimal(const std::string& s) {
    std::size_t i = s[0] == '-' ? 1 : 0;
    if (i >= s.size()) return false;
    if (s[i] == '0' && s.size() > i + 1) return false;
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return s != "-0";
}

}  // namespace

Int TextNode::int_at(std::size_t i) const {
    if (i >= values.size()) throw ParseError(line, col, "'" + key + "' needs at least " + std::to_string(i + 1) + " values");
    if (!is_decimal(values[i])) throw ParseError(line, col, "'" + values[i] + "' is not a decimal integer");
    return Int(values[i]);
}

std::vector<Int> TextNode::ints() const {
    std::vector<Int> out;
    for (std::size_t i = 0; i < values.size(); ++i) out.push_back(int_at(i));
    return out;
}

std::size_t TextNode::expect_count(std::size_t n) const {
    if (values.size() != n)
        throw ParseError(line, col, "'" + key + "' expects " + std::to_string(n) + " values, got " + std::to_string(values.size()));
    return n;
}

TextNode parse_text(const std::string& text) {
    TextNode root;
    root.block = true;
    root.line = 1;
    root.col = 1;
    std::vector<TextNode*> stack{&root};
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string s = raw.substr(0, raw.find('#'));
        std::vector<std::pair<std::string, int>> toks;
        for (std::size_t i = 0; i < s.size();) {
            if (s[i] == ' ' || s[i] == '\t') {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
            toks.emplace_back(s.substr(i, j - i), static_cast<int>(i) + 1);
            i = j;
        }
        if (toks.empty()) continue;
        if (toks[0].first == "}") {
            if (toks.size() != 1) throw ParseError(lineno, toks[1].second, "unexpected token after '}'");
            if (stack.size() == 1) throw ParseError(lineno, toks[0].second, "unbalanced '}'");
            stack.pop_back();
            continue;
        }
        for (const auto& [t, c] : toks)
            if (t == "{" && &t != &toks.back().first) throw ParseError(lineno, c, "'{' must end the line");
        TextNode node;
        node.key = toks[0].first;
        node.line = lineno;
        node.col = toks[0].second;
        if (node.key == "{") throw ParseError(lineno, node.col, "block without a key");
        bool opens = toks.size() > 1 && toks.back().first == "{";
        std::size_t last = opens ? toks.size() - 1 : toks.size();
        for (std::size_t i = 1; i < last; ++i) node.values.push_back(toks[i].first);
        node.block = opens;
        stack.back()->children.push_back(std::move(node));
        if (opens) stack.push_back(&stack.back()->children.back());
    }
    if (stack.size() != 1) throw ParseError(lineno + 1, 1, "unterminated block '" + stack.back()->key + "'");
    return root;
}

namespace {

void write_node(std::ostringstream& os, const TextNode& n, int depth) {
    std::string indent(static_cast<std::size_t>(2 * depth), ' ');
    os << indent << n.key;
    for (const auto& v : n.values) os << ' ' << v;
    if (!n.block) {
        os << '\n';
        return;
    }
    os << " {\n";
    for (const auto& c : n.children) write_node(os, c, depth + 1);
    os << indent << "}\n";
}

}  // namespace

std::string write_text(const TextNode& root) {
    std::ostringstream os;
    for (const auto& c : root.children) write_node(os, c, 0);
    return os.str();
}

}  // namespace cmendo
