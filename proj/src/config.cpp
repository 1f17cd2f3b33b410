#include "chaoscalc/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "chaoscalc/errors.hpp"

namespace chaoscalc {

namespace {

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
    std::ostringstream os;
    os << source << ", line " << line << ": " << msg;
    throw ConfigError(os.str());
}

std::string strip(const std::string& raw) {
    std::string s = raw;
    auto hash = s.find('#');
    if (hash != std::string::npos) s.erase(hash);
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_words(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> words;
    std::string w;
    while (is >> w) words.push_back(w);
    return words;
}

bool parse_long(const std::string& s, long long& out) {
    try {
        size_t used = 0;
        out = std::stoll(s, &used);
        return used == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

bool parse_real(const std::string& s, double& out) {
    try {
        size_t used = 0;
        out = std::stod(s, &used);
        return used == s.size() && std::isfinite(out);
    } catch (const std::exception&) {
        return false;
    }
}

const std::string* find_entry(const ConfigBlock& b, const std::string& key) {
    for (const auto& kv : b.entries) {
        if (kv.first == key) return &kv.second;
    }
    return nullptr;
}

}  // namespace

bool ConfigBlock::has(const std::string& key) const { return find_entry(*this, key) != nullptr; }

std::string ConfigBlock::get_string(const std::string& key) const {
    const std::string* v = find_entry(*this, key);
    if (v == nullptr) fail(source, line, "missing required key '" + key + "'");
    return *v;
}

int ConfigBlock::get_int(const std::string& key) const {
    long long v = 0;
    if (!parse_long(get_string(key), v)) fail(source, line, "key '" + key + "' is not an integer");
    return static_cast<int>(v);
}

std::uint64_t ConfigBlock::get_uint(const std::string& key) const {
    long long v = 0;
    if (!parse_long(get_string(key), v) || v < 0) {
        fail(source, line, "key '" + key + "' is not a nonnegative integer");
    }
    return static_cast<std::uint64_t>(v);
}

double ConfigBlock::get_double(const std::string& key) const {
    double v = 0.0;
    if (!parse_real(get_string(key), v)) fail(source, line, "key '" + key + "' is not a number");
    return v;
}

int ConfigBlock::get_int_or(const std::string& key, int fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::uint64_t ConfigBlock::get_uint_or(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? get_uint(key) : fallback;
}

double ConfigBlock::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

std::vector<const ConfigBlock*> ConfigBlock::blocks(const std::string& name) const {
    std::vector<const ConfigBlock*> out;
    for (const auto& c : children) {
        if (c.name == name) out.push_back(&c);
    }
    return out;
}

ConfigBlock parse_config(const std::string& text, const std::string& source) {
    ConfigBlock root;
    root.name = "";
    root.source = source;
    root.line = 1;
    std::vector<ConfigBlock*> stack = {&root};

    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        std::string s = strip(raw);
        if (s.empty()) continue;
        ConfigBlock& cur = *stack.back();

        if (s == "}") {
            if (stack.size() == 1) fail(source, lineno, "unmatched '}'");
            stack.pop_back();
            continue;
        }
        if (s.size() >= 2 && s.back() == '{') {
            std::vector<std::string> words = split_words(s.substr(0, s.size() - 1));
            if (words.size() != 1) fail(source, lineno, "block header must be 'name {'");
            ConfigBlock child;
            child.name = words[0];
            child.source = source;
            child.line = lineno;
            cur.children.push_back(std::move(child));
            stack.push_back(&cur.children.back());
            continue;
        }

        auto eq = s.find('=');
        auto colon = s.find(':');
        if (eq != std::string::npos && (colon == std::string::npos || eq < colon)) {
            std::string key = strip(s.substr(0, eq));
            std::string value = strip(s.substr(eq + 1));
            if (key.empty() || split_words(key).size() != 1 || value.empty()) {
                fail(source, lineno, "expected 'key = value'");
            }
            if (find_entry(cur, key) != nullptr) {
                fail(source, lineno, "duplicate key '" + key + "'");
            }
            cur.entries.emplace_back(key, value);
            continue;
        }
        if (colon != std::string::npos) {
            std::vector<std::string> head = split_words(s.substr(0, colon));
            std::string tail = strip(s.substr(colon + 1));
            if (head.empty()) fail(source, lineno, "tuple line needs a tag before ':'");
            TupleLine t;
            t.tag = head[0];
            t.line = lineno;
            for (size_t i = 1; i < head.size(); ++i) {
                long long v = 0;
                if (!parse_long(head[i], v)) {
                    fail(source, lineno, "tuple index '" + head[i] + "' is not an integer");
                }
                t.indices.push_back(static_cast<int>(v));
            }
            if (!parse_real(tail, t.value)) {
                fail(source, lineno, "tuple value '" + tail + "' is not a number");
            }
            cur.tuples.push_back(std::move(t));
            continue;
        }
        fail(source, lineno, "cannot parse '" + s + "'");
    }
    if (stack.size() != 1) {
        fail(source, stack.back()->line, "unclosed block '" + stack.back()->name + "'");
    }
    return root;
}

ConfigBlock parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str(), path);
}

namespace {

Polynomial polynomial_from_block(const ConfigBlock& b, int nvars) {
    Polynomial p(nvars);
    if (b.tuples.empty()) fail(b.source, b.line, "block '" + b.name + "' has no term lines");
    for (const TupleLine& t : b.tuples) {
        if (t.tag != "term") {
            fail(b.source, t.line, "expected 'term e1 ... en : coeff', got tag '" + t.tag + "'");
        }
        if (static_cast<int>(t.indices.size()) != nvars) {
            std::ostringstream os;
            os << "term needs " << nvars << " exponents, got " << t.indices.size();
            fail(b.source, t.line, os.str());
        }
        for (int e : t.indices) {
            if (e < 0) fail(b.source, t.line, "exponents must be nonnegative");
        }
        p.add_term(t.indices, t.value);
    }
    return p;
}

}  // namespace

ChaosVector load_chaos_vector(const ConfigBlock& root) {
    int dim = root.get_int("dim");
    if (dim < 1) fail(root.source, root.line, "dim must be >= 1");
    std::vector<const ConfigBlock*> comps = root.blocks("component");
    if (comps.empty()) fail(root.source, root.line, "need at least one component block");
    ChaosVector F(static_cast<int>(comps.size()));
    for (size_t i = 0; i < comps.size(); ++i) {
        Polynomial p = polynomial_from_block(*comps[i], dim);
        F.set_component(static_cast<int>(i), from_polynomial(p, dim));
    }
    return F;
}

PolynomialSystem load_polynomial_system(const ConfigBlock& root) {
    int nvars = root.get_int("nvars");
    if (nvars < 1) fail(root.source, root.line, "nvars must be >= 1");
    std::vector<const ConfigBlock*> blocks = root.blocks("polynomial");
    if (blocks.empty()) fail(root.source, root.line, "need at least one polynomial block");
    PolynomialSystem sys;
    int q = 1;
    for (const ConfigBlock* b : blocks) {
        sys.polys.push_back(polynomial_from_block(*b, nvars));
        q = std::max(q, sys.polys.back().degree());
    }
    int d = static_cast<int>(sys.polys.size());
    int default_cap = d;
    for (int i = 0; i < d - 1; ++i) default_cap *= q;
    sys.degree_cap = root.get_int_or("degree_cap", default_cap);
    if (sys.degree_cap < 1) fail(root.source, root.line, "degree_cap must be >= 1");
    return sys;
}

}  // namespace chaoscalc
