#include "treecut/tree.hpp"

#include "treecut/error.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <sstream>

namespace treecut {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Malformed: return "malformed";
        case ErrorCode::IndexOutOfRange: return "index_out_of_range";
        case ErrorCode::MultipleRoots: return "multiple_roots";
        case ErrorCode::CycleDetected: return "cycle_detected";
        case ErrorCode::InvalidArgument: return "invalid_argument";
        case ErrorCode::UndefinedGap: return "undefined_gap";
        case ErrorCode::DegenerateVariance: return "degenerate_variance";
        case ErrorCode::DegreeMismatch: return "degree_mismatch";
        case ErrorCode::SizeOverCap: return "size_over_cap";
        case ErrorCode::AttemptCapExceeded: return "attempt_cap_exceeded";
        case ErrorCode::AntisymmetrizationFailed: return "antisymmetrization_failed";
        case ErrorCode::NotConverged: return "not_converged";
    }
    return "unknown";
}

RootedTree RootedTree::from_parents(std::vector<Vertex> parent) {
    const std::size_t n = parent.size();
    require(n >= 1, ErrorCode::Malformed, "tree must have at least one vertex");
    require(n <= static_cast<std::size_t>(INT32_MAX), ErrorCode::SizeOverCap, "vertex count exceeds index range");

    Vertex root = kNoVertex;
    for (std::size_t v = 0; v < n; ++v) {
        const Vertex p = parent[v];
        if (p == kNoVertex) {
            if (root != kNoVertex) {
                fail(ErrorCode::MultipleRoots, "multiple roots: " + std::to_string(root) + " and " + std::to_string(v));
            }
            root = static_cast<Vertex>(v);
            continue;
        }
        if (p < 0 || static_cast<std::size_t>(p) >= n) {
            fail(ErrorCode::IndexOutOfRange,
                 "parent of vertex " + std::to_string(v) + " is out of range: " + std::to_string(p));
        }
        if (static_cast<std::size_t>(p) == v) {
            fail(ErrorCode::CycleDetected, "vertex " + std::to_string(v) + " is its own parent");
        }
    }
    // With no sentinel every vertex has a parent, so following links must cycle.
    if (root == kNoVertex) fail(ErrorCode::CycleDetected, "no root: parent links form a cycle");

    RootedTree t;
    t.root_ = root;
    t.child_offset_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) {
        if (parent[v] != kNoVertex) ++t.child_offset_[static_cast<std::size_t>(parent[v]) + 1];
    }
    for (std::size_t v = 0; v < n; ++v) t.child_offset_[v + 1] += t.child_offset_[v];
    t.child_list_.resize(n - 1);
    std::vector<std::size_t> fill(t.child_offset_.begin(), t.child_offset_.end() - 1);
    // Ascending v, so each child list comes out sorted.
    for (std::size_t v = 0; v < n; ++v) {
        if (parent[v] != kNoVertex) t.child_list_[fill[static_cast<std::size_t>(parent[v])]++] = static_cast<Vertex>(v);
    }
    t.parent_ = std::move(parent);

    t.order_.reserve(n);
    t.order_.push_back(root);
    for (std::size_t head = 0; head < t.order_.size(); ++head) {
        for (Vertex c : t.children(t.order_[head])) t.order_.push_back(c);
    }
    if (t.order_.size() != n) {
        fail(ErrorCode::CycleDetected, std::to_string(n - t.order_.size()) + " vertices unreachable from the root (cycle)");
    }
    return t;
}

std::vector<Vertex> RootedTree::neighbors(Vertex v) const {
    std::vector<Vertex> out;
    out.reserve(degree(v));
    if (v != root_) out.push_back(parent(v));
    for (Vertex c : children(v)) out.push_back(c);
    return out;
}

RootedTree from_parents(std::size_t n, std::span<const Vertex> parent) {
    require(parent.size() == n, ErrorCode::Malformed,
            "parent sequence has length " + std::to_string(parent.size()) + ", expected " + std::to_string(n));
    return RootedTree::from_parents(std::vector<Vertex>(parent.begin(), parent.end()));
}

RootedTree reroot(const RootedTree& tree, Vertex new_root) {
    const std::size_t n = tree.size();
    require(new_root >= 0 && static_cast<std::size_t>(new_root) < n, ErrorCode::IndexOutOfRange,
            "reroot target out of range");
    std::vector<Vertex> parent(tree.parents().begin(), tree.parents().end());
    // Reverse the links on the path new_root -> old root.
    Vertex prev = kNoVertex;
    Vertex v = new_root;
    while (v != kNoVertex) {
        const Vertex next = tree.parent(v);
        parent[static_cast<std::size_t>(v)] = prev;
        prev = v;
        v = next;
    }
    return RootedTree::from_parents(std::move(parent));
}

RootedTree induced_subtree(const RootedTree& tree, std::span<const Vertex> keep, Vertex new_root,
                           std::vector<Vertex>* original) {
    const std::size_t n = tree.size();
    std::vector<Vertex> index(n, kNoVertex);
    std::vector<Vertex> sorted(keep.begin(), keep.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        require(sorted[i] >= 0 && static_cast<std::size_t>(sorted[i]) < n, ErrorCode::IndexOutOfRange,
                "subtree vertex out of range");
        index[static_cast<std::size_t>(sorted[i])] = static_cast<Vertex>(i);
    }
    require(new_root >= 0 && static_cast<std::size_t>(new_root) < n && index[static_cast<std::size_t>(new_root)] != kNoVertex,
            ErrorCode::InvalidArgument, "subtree root must belong to the kept set");

    std::vector<Vertex> parent(sorted.size(), kNoVertex);
    std::vector<char> seen(sorted.size(), 0);
    std::deque<Vertex> queue{new_root};
    seen[static_cast<std::size_t>(index[static_cast<std::size_t>(new_root)])] = 1;
    std::size_t reached = 1;
    while (!queue.empty()) {
        const Vertex v = queue.front();
        queue.pop_front();
        for (Vertex w : tree.neighbors(v)) {
            const Vertex iw = index[static_cast<std::size_t>(w)];
            if (iw == kNoVertex || seen[static_cast<std::size_t>(iw)]) continue;
            seen[static_cast<std::size_t>(iw)] = 1;
            parent[static_cast<std::size_t>(iw)] = index[static_cast<std::size_t>(v)];
            queue.push_back(w);
            ++reached;
        }
    }
    require(reached == sorted.size(), ErrorCode::InvalidArgument, "kept vertex set is not connected");
    if (original) *original = sorted;
    return RootedTree::from_parents(std::move(parent));
}

std::string to_text(const RootedTree& tree) {
    std::string out = std::to_string(tree.size());
    out += '\n';
    bool first = true;
    for (Vertex p : tree.parents()) {
        if (!first) out += ' ';
        out += std::to_string(p);
        first = false;
    }
    out += '\n';
    return out;
}

namespace {

class TokenReader {
public:
    explicit TokenReader(std::string_view text) : text_(text) {}

    bool next(std::string_view& token) {
        while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
        if (pos_ >= text_.size()) return false;
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !is_space(text_[pos_])) ++pos_;
        token = text_.substr(start, pos_ - start);
        return true;
    }

private:
    static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

    std::string_view text_;
    std::size_t pos_ = 0;
};

template <typename Int>
Int parse_int(std::string_view token, const char* what) {
    Int value{};
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        fail(ErrorCode::Malformed, std::string("malformed ") + what + ": '" + std::string(token) + "'");
    }
    return value;
}

}  // namespace

RootedTree parse_tree_text(std::string_view text) {
    TokenReader reader(text);
    std::string_view token;
    require(reader.next(token), ErrorCode::Malformed, "empty tree text");
    const auto n = parse_int<std::int64_t>(token, "vertex count");
    require(n >= 1, ErrorCode::Malformed, "vertex count must be at least 1");
    require(n <= INT32_MAX, ErrorCode::SizeOverCap, "vertex count exceeds index range");
    std::vector<Vertex> parent;
    parent.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        require(reader.next(token), ErrorCode::Malformed,
                "expected " + std::to_string(n) + " parent entries, got " + std::to_string(i));
        const auto p = parse_int<std::int64_t>(token, "parent entry");
        require(p >= -1 && p < n, ErrorCode::IndexOutOfRange,
                "parent entry " + std::to_string(p) + " out of range");
        parent.push_back(static_cast<Vertex>(p));
    }
    require(!reader.next(token), ErrorCode::Malformed, "trailing token after parent list: '" + std::string(token) + "'");
    return RootedTree::from_parents(std::move(parent));
}

std::string canonical_shape(const RootedTree& tree) {
    std::vector<std::string> code(tree.size());
    const auto order = tree.bfs_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        std::vector<std::string> parts;
        for (Vertex c : tree.children(*it)) parts.push_back(std::move(code[static_cast<std::size_t>(c)]));
        std::sort(parts.begin(), parts.end());
        std::string s = "(";
        for (auto& p : parts) s += p;
        s += ')';
        code[static_cast<std::size_t>(*it)] = std::move(s);
    }
    return code[static_cast<std::size_t>(tree.root())];
}

}  // namespace treecut
