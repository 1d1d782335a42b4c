#include "finex/serialize.hpp"

#include <fstream>

namespace finex::serialize {

using measures::DiscreteMeasure;
using measures::QuantizedMeasure;
using measures::SignedTensor;
using measures::StateSpace;
using nlohmann::json;

namespace {

StateSpace space_from_json(const json& j) {
    if (!j.contains("labels") || !j["labels"].is_array())
        throw ValidationError("expected a \"labels\" array");
    std::vector<std::string> labels;
    for (const auto& l : j["labels"]) {
        if (!l.is_string()) throw ValidationError("labels must be strings");
        labels.push_back(l.get<std::string>());
    }
    return StateSpace(std::move(labels));
}

json labels_json(const StateSpace& space) {
    json arr = json::array();
    for (const auto& l : space.labels()) arr.push_back(l);
    return arr;
}

Rational rational_field(const json& j, const std::string& what) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    throw ValidationError(what + " must be a rational string");
}

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw ValidationError(std::string("expected a \"") + key + "\" field");
    return j[key];
}

std::vector<int> index_field(const json& j, int order, int ell) {
    if (!j.is_array() || static_cast<int>(j.size()) != order)
        throw ValidationError("entry index has the wrong length");
    std::vector<int> idx;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw ValidationError("entry indices must be integers");
        const int i = v.get<int>();
        if (i < 1 || i > ell) throw ValidationError("entry index out of range (1-based)");
        idx.push_back(i - 1);
    }
    return idx;
}

} // namespace

json measure_json(const DiscreteMeasure& m) {
    json j;
    j["labels"] = labels_json(m.space());
    json w = json::array();
    for (const auto& v : m.weights()) w.push_back(to_string(v));
    j["weights"] = std::move(w);
    return j;
}

DiscreteMeasure measure_from_json(const json& j) {
    StateSpace space = space_from_json(j);
    if (!j.contains("weights") || !j["weights"].is_array())
        throw ValidationError("expected a \"weights\" array");
    std::vector<Rational> weights;
    for (const auto& w : j["weights"]) weights.push_back(rational_field(w, "weight"));
    return DiscreteMeasure(std::move(space), std::move(weights));
}

json quantized_json(const QuantizedMeasure& m) {
    json j;
    j["labels"] = labels_json(m.space());
    j["N"] = m.N();
    j["counts"] = m.counts();
    return j;
}

QuantizedMeasure quantized_from_json(const json& j) {
    StateSpace space = space_from_json(j);
    if (!j.contains("N") || !j["N"].is_number_integer()) throw ValidationError("expected an integer \"N\"");
    if (!j.contains("counts") || !j["counts"].is_array()) throw ValidationError("expected a \"counts\" array");
    std::vector<std::int64_t> counts;
    for (const auto& c : j["counts"]) {
        if (!c.is_number_integer()) throw ValidationError("counts must be integers");
        counts.push_back(c.get<std::int64_t>());
    }
    return QuantizedMeasure(std::move(space), j["N"].get<int>(), std::move(counts));
}

json tensor_json(const SignedTensor& t) {
    json j;
    j["labels"] = labels_json(t.space());
    j["order"] = t.order();
    json entries = json::array();
    std::vector<int> idx(static_cast<std::size_t>(t.order()));
    for (std::size_t flat = 0; flat < t.entry_count(); ++flat) {
        if (t[flat] == 0) continue;
        t.unflatten(flat, idx);
        json e;
        json ji = json::array();
        for (int i : idx) ji.push_back(i + 1);
        e["idx"] = std::move(ji);
        e["w"] = to_string(t[flat]);
        entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    return j;
}

SignedTensor tensor_from_json(const json& j) {
    StateSpace space = space_from_json(j);
    if (!j.contains("order") || !j["order"].is_number_integer())
        throw ValidationError("expected an integer \"order\"");
    const int order = j["order"].get<int>();
    SignedTensor t(space, order);
    if (!j.contains("entries") || !j["entries"].is_array())
        throw ValidationError("expected an \"entries\" array");
    for (const auto& e : j["entries"]) {
        const auto idx = index_field(field(e, "idx"), order, space.size());
        t.at(idx) = rational_field(field(e, "w"), "entry weight");
    }
    return t;
}

json cost_json(const mmot::CostTensor& c) {
    json j;
    j["labels"] = labels_json(c.space());
    j["order"] = c.k();
    json entries = json::array();
    SignedTensor shape(c.space(), c.k());
    std::vector<int> idx(static_cast<std::size_t>(c.k()));
    for (std::size_t flat = 0; flat < c.entry_count(); ++flat) {
        const bool inf = c.is_infinite(flat);
        if (!inf && c.value(flat) == 0) continue;
        shape.unflatten(flat, idx);
        json e;
        json ji = json::array();
        for (int i : idx) ji.push_back(i + 1);
        e["idx"] = std::move(ji);
        if (inf) e["infinity"] = true;
        else e["w"] = to_string(c.value(flat));
        entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    return j;
}

mmot::CostTensor cost_from_json(const json& j) {
    StateSpace space = space_from_json(j);
    if (!j.contains("order") || !j["order"].is_number_integer())
        throw ValidationError("expected an integer \"order\"");
    const int order = j["order"].get<int>();
    SignedTensor shape(space, order);
    std::vector<Rational> values(shape.entry_count(), Rational(0));
    std::vector<char> infinite(shape.entry_count(), 0);
    if (!j.contains("entries") || !j["entries"].is_array())
        throw ValidationError("expected an \"entries\" array");
    for (const auto& e : j["entries"]) {
        const auto idx = index_field(field(e, "idx"), order, space.size());
        const std::size_t flat = shape.flatten(idx);
        if (e.contains("infinity") && e["infinity"].is_boolean() && e["infinity"].get<bool>())
            infinite[flat] = 1;
        else
            values[flat] = rational_field(field(e, "w"), "cost value");
    }
    return mmot::CostTensor(std::move(space), order, std::move(values), std::move(infinite));
}

json prior_json(const definetti::PriorMixture& p) {
    json j;
    j["labels"] = labels_json(p.space());
    j["N"] = p.N();
    json atoms = json::array();
    for (const auto& atom : p.atoms()) {
        json a;
        a["weight"] = to_string(atom.weight);
        a["counts"] = atom.measure.counts();
        atoms.push_back(std::move(a));
    }
    j["atoms"] = std::move(atoms);
    return j;
}

definetti::PriorMixture prior_from_json(const json& j) {
    StateSpace space = space_from_json(j);
    if (!j.contains("N") || !j["N"].is_number_integer()) throw ValidationError("expected an integer \"N\"");
    const int N = j["N"].get<int>();
    if (!j.contains("atoms") || !j["atoms"].is_array()) throw ValidationError("expected an \"atoms\" array");
    std::vector<definetti::PriorMixture::Atom> atoms;
    for (const auto& a : j["atoms"]) {
        std::vector<std::int64_t> counts;
        for (const auto& c : field(a, "counts")) {
            if (!c.is_number_integer()) throw ValidationError("counts must be integers");
            counts.push_back(c.get<std::int64_t>());
        }
        atoms.push_back({rational_field(field(a, "weight"), "atom weight"),
                         QuantizedMeasure(space, N, std::move(counts))});
    }
    return definetti::PriorMixture(std::move(space), N, std::move(atoms));
}

MeasureInput measure_input_from_json(const json& j) {
    if (j.contains("counts")) {
        QuantizedMeasure q = quantized_from_json(j);
        return {q.to_measure(), std::move(q)};
    }
    return {measure_from_json(j), std::nullopt};
}

json parse_json_text(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ValidationError("malformed JSON in " + what);
    return j;
}

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_json_text(text, path.string());
}

std::uint64_t file_hash(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path.string());
    std::uint64_t h = 0xCBF29CE484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const auto got = static_cast<std::size_t>(in.gcount());
        for (std::size_t i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001B3ULL;
        }
        if (!in) break;
    }
    return h;
}

} // namespace finex::serialize
