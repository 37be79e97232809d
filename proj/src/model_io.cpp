#include "attnboost/model_io.hpp"

#include "attnboost/numeric.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <system_error>

namespace attnboost {

namespace {

constexpr std::array<char, 4> kMagic{'A', 'T', 'N', 'B'};
constexpr std::array<const char*, 4> kSections{"META", "PREP", "ATTN", "ENSM"};

class Writer {
public:
    void u8(std::uint8_t v) { bytes_.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) {
            bytes_.push_back(static_cast<unsigned char>(v >> (8 * i)));
        }
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            bytes_.push_back(static_cast<unsigned char>(v >> (8 * i)));
        }
    }
    void i32(int v) { u32(static_cast<std::uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void str(const std::string& s) {
        u64(s.size());
        bytes_.insert(bytes_.end(), s.begin(), s.end());
    }
    void strings(const std::vector<std::string>& items) {
        u64(items.size());
        for (const auto& s : items) {
            str(s);
        }
    }
    void doubles(const std::vector<double>& items) {
        u64(items.size());
        for (double v : items) {
            f64(v);
        }
    }
    void raw(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        bytes_.insert(bytes_.end(), p, p + n);
    }
    std::vector<unsigned char>& bytes() { return bytes_; }

private:
    std::vector<unsigned char> bytes_;
};

class Reader {
public:
    Reader(const unsigned char* data, std::size_t size, std::string context)
        : data_(data), size_(size), context_(std::move(context)) {}

    std::uint8_t u8() { return *take(1); }
    std::uint32_t u32() {
        const unsigned char* p = take(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
        }
        return v;
    }
    std::uint64_t u64() {
        const unsigned char* p = take(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
        }
        return v;
    }
    int i32() { return static_cast<int>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::size_t count(std::size_t element_size = 1) {
        const std::uint64_t n = u64();
        if (element_size && n > remaining() / element_size) {
            fail("length field exceeds the data");
        }
        return static_cast<std::size_t>(n);
    }
    std::string str() {
        const std::size_t n = count();
        const unsigned char* p = take(n);
        return std::string(reinterpret_cast<const char*>(p), n);
    }
    std::vector<std::string> strings() {
        std::vector<std::string> out(count(8));
        for (auto& s : out) {
            s = str();
        }
        return out;
    }
    std::vector<double> doubles() {
        std::vector<double> out(count(8));
        for (auto& v : out) {
            v = f64();
        }
        return out;
    }
    const unsigned char* take(std::size_t n) {
        if (n > remaining()) {
            fail("truncated");
        }
        const unsigned char* p = data_ + pos_;
        pos_ += n;
        return p;
    }
    std::size_t remaining() const { return size_ - pos_; }
    void expect_end() {
        if (remaining() != 0) {
            fail("trailing bytes");
        }
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw ModelFormatError(context_ + ": " + what);
    }

private:
    const unsigned char* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
    std::string context_;
};

// Sections -------------------------------------------------------------------

void write_meta(Writer& w, const AttnBoostModel& m, const std::string& fingerprint) {
    w.str(std::string(to_string(m.variant)));
    w.str(std::string(to_string(m.augment_mode)));
    w.u64(m.random_width);
    w.u64(m.attention_seed);
    w.u64(m.boost_seed);
    w.u64(m.manual_weights.size());
    for (const auto& [name, factor] : m.manual_weights) {
        w.str(name);
        w.f64(factor);
    }
    w.u8(m.preprocessor ? 1 : 0);
    w.u8(m.attention ? 1 : 0);
    w.str(fingerprint);
}

struct Meta {
    bool has_preprocessor = false;
    bool has_attention = false;
    std::string fingerprint;
};

Meta read_meta(Reader& r, AttnBoostModel& m) {
    try {
        m.variant = parse_variant(r.str());
        m.augment_mode = parse_augment_mode(r.str());
    } catch (const std::invalid_argument& e) {
        r.fail(e.what());
    }
    m.random_width = r.u64();
    m.attention_seed = r.u64();
    m.boost_seed = r.u64();
    const std::size_t n = r.count(16);
    for (std::size_t i = 0; i < n; ++i) {
        std::string name = r.str();
        m.manual_weights[name] = r.f64();
    }
    Meta meta;
    meta.has_preprocessor = r.u8() != 0;
    meta.has_attention = r.u8() != 0;
    meta.fingerprint = r.str();
    return meta;
}

void write_prep(Writer& w, const PreprocessorState& s) {
    w.u64(s.schema.size());
    for (const auto& col : s.schema) {
        w.str(col.name);
        w.u8(static_cast<std::uint8_t>(col.kind));
        w.u8(col.nullable ? 1 : 0);
    }
    w.u64(s.category_maps.size());
    for (const auto& [name, map] : s.category_maps) {
        w.str(name);
        w.strings(map.values);
    }
    w.u64(s.numeric_stats.size());
    for (const auto& [name, stats] : s.numeric_stats) {
        w.str(name);
        w.f64(stats.mean);
        w.f64(stats.std);
    }
    w.u64(s.date_plan.size());
    for (const auto& [name, derived] : s.date_plan) {
        w.str(name);
        w.strings(derived);
    }
    w.strings(s.dropped_columns);
    w.strings(s.feature_names);
    w.str(s.target_column);
    w.u8(s.positive_label ? 1 : 0);
    w.str(s.positive_label.value_or(""));
}

PreprocessorState read_prep(Reader& r) {
    PreprocessorState s;
    s.schema.resize(r.count(10));
    for (auto& col : s.schema) {
        col.name = r.str();
        const auto kind = r.u8();
        if (kind > static_cast<std::uint8_t>(ColumnKind::BinaryTarget)) {
            r.fail("unknown column kind");
        }
        col.kind = static_cast<ColumnKind>(kind);
        col.nullable = r.u8() != 0;
    }
    for (std::size_t i = 0, n = r.count(16); i < n; ++i) {
        std::string name = r.str();
        s.category_maps[name].values = r.strings();
    }
    for (std::size_t i = 0, n = r.count(24); i < n; ++i) {
        std::string name = r.str();
        NumericStats stats;
        stats.mean = r.f64();
        stats.std = r.f64();
        s.numeric_stats[name] = stats;
    }
    for (std::size_t i = 0, n = r.count(16); i < n; ++i) {
        std::string name = r.str();
        s.date_plan[name] = r.strings();
    }
    s.dropped_columns = r.strings();
    s.feature_names = r.strings();
    s.target_column = r.str();
    const bool has_label = r.u8() != 0;
    std::string label = r.str();
    if (has_label) {
        s.positive_label = std::move(label);
    }
    return s;
}

void write_attn(Writer& w, const AttentionParams& p) {
    w.u64(p.input_dim);
    w.u64(p.hidden_dim);
    w.doubles(p.w1);
    w.doubles(p.b1);
    w.doubles(p.w_attn);
    w.doubles(p.b_attn);
    w.doubles(p.w2);
    w.f64(p.b2);
}

AttentionParams read_attn(Reader& r) {
    AttentionParams p;
    p.input_dim = r.u64();
    p.hidden_dim = r.u64();
    p.w1 = r.doubles();
    p.b1 = r.doubles();
    p.w_attn = r.doubles();
    p.b_attn = r.doubles();
    p.w2 = r.doubles();
    p.b2 = r.f64();
    const std::size_t d = p.input_dim;
    const std::size_t k = p.hidden_dim;
    if (p.w1.size() != k * d || p.b1.size() != k || p.w_attn.size() != k * k || p.b_attn.size() != k ||
        p.w2.size() != k) {
        r.fail("tensor shapes disagree with dimensions");
    }
    return p;
}

void write_ensm(Writer& w, const Ensemble& e) {
    w.f64(e.base_raw);
    w.f64(e.learning_rate);
    w.strings(e.feature_names);
    w.u64(e.trees.size());
    for (const auto& tree : e.trees) {
        w.u64(tree.nodes.size());
        for (const auto& n : tree.nodes) {
            w.i32(n.feature);
            w.f64(n.threshold);
            w.i32(n.left);
            w.i32(n.right);
            w.u8(n.default_left ? 1 : 0);
            w.f64(n.weight);
            w.f64(n.gain);
            w.f64(n.cover);
        }
    }
}

Ensemble read_ensm(Reader& r) {
    Ensemble e;
    e.base_raw = r.f64();
    e.learning_rate = r.f64();
    e.feature_names = r.strings();
    e.trees.resize(r.count(8));
    const int width = static_cast<int>(e.feature_names.size());
    for (auto& tree : e.trees) {
        tree.nodes.resize(r.count(45));
        const int n_nodes = static_cast<int>(tree.nodes.size());
        for (int i = 0; i < n_nodes; ++i) {
            auto& n = tree.nodes[static_cast<std::size_t>(i)];
            n.feature = r.i32();
            n.threshold = r.f64();
            n.left = r.i32();
            n.right = r.i32();
            n.default_left = r.u8() != 0;
            n.weight = r.f64();
            n.gain = r.f64();
            n.cover = r.f64();
            if (!n.is_leaf() && (n.feature >= width || n.left <= i || n.right <= i || n.left >= n_nodes ||
                                 n.right >= n_nodes)) {
                r.fail("malformed tree node");
            }
        }
        if (tree.nodes.empty()) {
            r.fail("empty tree");
        }
    }
    return e;
}

}  // namespace

std::vector<unsigned char> serialize_model(const AttnBoostModel& model, const std::string& fingerprint) {
    std::array<Writer, 4> sections;
    write_meta(sections[0], model, fingerprint);
    if (model.preprocessor) {
        write_prep(sections[1], *model.preprocessor);
    }
    if (model.attention) {
        write_attn(sections[2], *model.attention);
    }
    write_ensm(sections[3], model.ensemble);

    Writer out;
    out.raw(kMagic.data(), kMagic.size());
    out.u32(kModelFormatVersion);
    out.u32(static_cast<std::uint32_t>(sections.size()));
    for (std::size_t i = 0; i < sections.size(); ++i) {
        const auto& payload = sections[i].bytes();
        out.raw(kSections[i], 4);
        out.u64(payload.size());
        out.u64(fnv1a(std::span<const unsigned char>(payload)));
        out.raw(payload.data(), payload.size());
    }
    return std::move(out.bytes());
}

LoadedModel deserialize_model(const std::vector<unsigned char>& bytes) {
    Reader header(bytes.data(), bytes.size(), "model header");
    if (std::memcmp(header.take(4), kMagic.data(), 4) != 0) {
        header.fail("not a model file (bad magic)");
    }
    const std::uint32_t version = header.u32();
    if (version != kModelFormatVersion) {
        throw ModelFormatError("unsupported model format version " + std::to_string(version) + " (expected " +
                               std::to_string(kModelFormatVersion) + ")");
    }
    const std::uint32_t n_sections = header.u32();
    if (n_sections != kSections.size()) {
        header.fail("unexpected section count " + std::to_string(n_sections));
    }

    // Every checksum is verified before anything is decoded.
    std::map<std::string, std::pair<const unsigned char*, std::size_t>> payloads;
    for (const char* expected : kSections) {
        const std::string tag(reinterpret_cast<const char*>(header.take(4)), 4);
        if (tag != expected) {
            header.fail("expected section " + std::string(expected) + ", found '" + tag + "'");
        }
        const std::uint64_t length = header.u64();
        const std::uint64_t checksum = header.u64();
        if (length > header.remaining()) {
            throw ModelFormatError("section " + tag + ": truncated");
        }
        const unsigned char* data = header.take(static_cast<std::size_t>(length));
        if (fnv1a(std::span(data, static_cast<std::size_t>(length))) != checksum) {
            throw ModelFormatError("section " + tag + ": checksum mismatch");
        }
        payloads[tag] = {data, static_cast<std::size_t>(length)};
    }
    header.expect_end();

    auto reader = [&](const std::string& tag) {
        const auto [data, size] = payloads.at(tag);
        return Reader(data, size, "section " + tag);
    };

    LoadedModel loaded;
    AttnBoostModel& m = loaded.model;
    Reader meta_reader = reader("META");
    const Meta meta = read_meta(meta_reader, m);
    meta_reader.expect_end();
    loaded.fingerprint = meta.fingerprint;

    Reader prep = reader("PREP");
    if (meta.has_preprocessor) {
        m.preprocessor = read_prep(prep);
    }
    prep.expect_end();

    Reader attn = reader("ATTN");
    if (meta.has_attention) {
        m.attention = read_attn(attn);
    }
    attn.expect_end();

    Reader ensm = reader("ENSM");
    m.ensemble = read_ensm(ensm);
    ensm.expect_end();
    return loaded;
}

void write_file_atomically(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write '" + tmp.string() + "'");
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) {
            throw std::runtime_error("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot replace '" + path.string() + "': " + ec.message());
    }
}

void save_model(const AttnBoostModel& model, const std::filesystem::path& path, const std::string& fingerprint) {
    const auto bytes = serialize_model(model, fingerprint);
    write_file_atomically(path, std::string(bytes.begin(), bytes.end()));
}

LoadedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open model file '" + path.string() + "'");
    }
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize_model(bytes);
}

}  // namespace attnboost
