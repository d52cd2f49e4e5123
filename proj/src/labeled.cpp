#include "detran/labeled.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <unordered_set>

#include "detran/common.hpp"
#include "detran/corpus.hpp"

namespace detran {

void LabeledVectorSet::validate() const {
    const int m = size();
    if (static_cast<int>(labels.size()) != m)
        throw Error("labeled set: " + std::to_string(labels.size()) + " labels for " +
                    std::to_string(m) + " vectors");
    if (!ids.empty() && static_cast<int>(ids.size()) != m)
        throw Error("labeled set: id count does not match vector count");
    const int c = num_classes();
    for (int label : labels) {
        if (label < 0 || label >= c)
            throw Error("labeled set: label " + std::to_string(label) + " outside [0, " +
                        std::to_string(c) + ")");
    }
}

void save_labeled(const LabeledVectorSet& set, const std::string& path) {
    set.validate();
    std::ofstream out(path);
    if (!out) throw Error("cannot open file for writing: " + path);
    out << "#d=" << set.dim() << '\n';
    char buf[32];
    for (int i = 0; i < set.size(); ++i) {
        const std::string id = set.ids.empty() ? std::to_string(i) : set.ids[i];
        out << id << '\t' << set.label_names[set.labels[i]] << '\t';
        for (int j = 0; j < set.dim(); ++j) {
            if (j > 0) out << ' ';
            std::snprintf(buf, sizeof(buf), "%.8f", set.vectors(i, j));
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw Error("write failed: " + path);
}

namespace {

double parse_double(const std::string& text, const std::string& path, int line_no) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw Error(path + ": line " + std::to_string(line_no) + ": bad number '" + text + "'");
    return value;
}

}  // namespace

LabeledVectorSet load_labeled(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open labeled vector file: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("#d=", 0) != 0)
        throw Error(path + ": line 1: expected '#d=<d>' header");
    int d = 0;
    {
        const std::string dims = line.substr(3);
        auto [ptr, ec] = std::from_chars(dims.data(), dims.data() + dims.size(), d);
        if (ec != std::errc() || ptr != dims.data() + dims.size() || d <= 0)
            throw Error(path + ": line 1: bad dimension '" + dims + "'");
    }

    std::vector<std::string> ids;
    std::vector<std::string> raw_labels;
    std::vector<double> values;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::size_t tab1 = line.find('\t');
        const std::size_t tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab2 == std::string::npos)
            throw Error(path + ": line " + std::to_string(line_no) + ": expected id<TAB>label<TAB>vector");
        ids.push_back(line.substr(0, tab1));
        raw_labels.push_back(line.substr(tab1 + 1, tab2 - tab1 - 1));
        std::vector<std::string> parts = split_tokens(line.substr(tab2 + 1));
        if (static_cast<int>(parts.size()) != d)
            throw Error(path + ": line " + std::to_string(line_no) + ": expected " + std::to_string(d) +
                        " values, got " + std::to_string(parts.size()));
        for (const std::string& part : parts) values.push_back(parse_double(part, path, line_no));
    }

    const int m = static_cast<int>(ids.size());
    // Class indices by sorted label name, so any file order maps the same way.
    std::map<std::string, int> name_to_class;
    for (const std::string& name : raw_labels) name_to_class.emplace(name, 0);
    int next = 0;
    for (auto& [name, idx] : name_to_class) idx = next++;

    LabeledVectorSet set;
    set.ids = std::move(ids);
    set.vectors.resize(m, d);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < d; ++j) set.vectors(i, j) = values[static_cast<std::size_t>(i) * d + j];
    set.labels.reserve(m);
    for (const std::string& name : raw_labels) set.labels.push_back(name_to_class.at(name));
    set.label_names.resize(name_to_class.size());
    for (const auto& [name, idx] : name_to_class) set.label_names[idx] = name;
    set.validate();
    return set;
}

double majority_fraction(const std::vector<int>& labels) {
    if (labels.empty()) throw Error("majority_fraction: empty label list");
    std::map<int, int> counts;
    for (int label : labels) ++counts[label];
    int best = 0;
    for (const auto& [label, count] : counts) best = std::max(best, count);
    return static_cast<double>(best) / static_cast<double>(labels.size());
}

}  // namespace detran
