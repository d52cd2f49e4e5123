#include "detran/align.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "detran/common.hpp"
#include "detran/corpus.hpp"

namespace detran {

EmbeddingSpace preprocess_for_alignment(const EmbeddingSpace& space) {
    Eigen::MatrixXd m = normalize(space).matrix();
    m.rowwise() -= m.colwise().mean();
    for (int i = 0; i < m.rows(); ++i) {
        const double norm = m.row(i).norm();
        if (norm == 0.0)
            throw Error("token '" + space.vocab()[i] + "' is zero after centering");
        m.row(i) /= norm;
    }
    return EmbeddingSpace(space.vocab(), std::move(m), space.counts());
}

std::vector<std::string> shared_dictionary(const EmbeddingSpace& source,
                                           const EmbeddingSpace& target) {
    std::vector<std::string> shared;
    for (const std::string& token : source.vocab())
        if (target.find(token) >= 0) shared.push_back(token);
    return shared;
}

OrthogonalMap procrustes_align(const EmbeddingSpace& source, const EmbeddingSpace& target,
                               const std::vector<std::string>& dictionary) {
    const int d = source.dim();
    if (target.dim() != d) throw Error("source and target dimensions differ");
    if (static_cast<int>(dictionary.size()) < d)
        throw Error("need at least " + std::to_string(d) + " dictionary pairs, got " +
                    std::to_string(dictionary.size()));

    const EmbeddingSpace src = preprocess_for_alignment(source);
    const EmbeddingSpace tgt = preprocess_for_alignment(target);

    Eigen::MatrixXd x_src(dictionary.size(), d);
    Eigen::MatrixXd x_tgt(dictionary.size(), d);
    for (std::size_t i = 0; i < dictionary.size(); ++i) {
        x_src.row(static_cast<int>(i)) = src.matrix().row(src.at(dictionary[i]));
        x_tgt.row(static_cast<int>(i)) = tgt.matrix().row(tgt.at(dictionary[i]));
    }

    const Eigen::MatrixXd m = x_src.transpose() * x_tgt;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    if (sigma(0) <= 0.0 || sigma(d - 1) <= sigma(0) * 1e-12)
        throw Error("rank-deficient dictionary matrix: smallest singular value " +
                    std::to_string(sigma(d - 1)) + " of " + std::to_string(sigma(0)));

    OrthogonalMap map;
    map.matrix = svd.matrixU() * svd.matrixV().transpose();
    map.preprocessing = kAlignPreprocessing;
    map.dictionary_size = static_cast<int>(dictionary.size());
    return map;
}

EmbeddingSpace apply_alignment(const EmbeddingSpace& source, const OrthogonalMap& map) {
    if (source.dim() != map.matrix.rows())
        throw Error("space dimension does not match alignment map");
    const EmbeddingSpace pre = preprocess_for_alignment(source);
    return EmbeddingSpace(pre.vocab(), pre.matrix() * map.matrix, pre.counts());
}

DirectionVector direction_from_word(const EmbeddingSpace& aligned_t,
                                    const EmbeddingSpace& aligned_o, const std::string& word) {
    if (aligned_t.dim() != aligned_o.dim()) throw Error("aligned spaces have different dimensions");
    const Eigen::VectorXd diff = aligned_t.matrix().row(aligned_t.at(word)).transpose() -
                                 aligned_o.matrix().row(aligned_o.at(word)).transpose();
    const double norm = diff.norm();
    if (norm == 0.0) throw Error("zero direction: '" + word + "' has identical aligned vectors");
    return {diff / norm, "single:" + word};
}

ListDirection direction_from_list(const EmbeddingSpace& aligned_t,
                                  const EmbeddingSpace& aligned_o,
                                  const std::vector<std::string>& g) {
    if (aligned_t.dim() != aligned_o.dim()) throw Error("aligned spaces have different dimensions");
    ListDirection result;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(aligned_t.dim());
    for (const std::string& word : g) {
        const int it = aligned_t.find(word);
        const int io = aligned_o.find(word);
        if (it < 0 || io < 0) {
            result.skipped.push_back(word);
            continue;
        }
        sum += aligned_t.matrix().row(it).transpose() - aligned_o.matrix().row(io).transpose();
        ++result.used;
    }
    if (result.used == 0) throw Error("no word of the list is present in both aligned spaces");
    const Eigen::VectorXd mean = sum / result.used;
    const double norm = mean.norm();
    if (norm == 0.0) throw Error("zero direction: word differences cancel out");
    result.direction = {mean / norm, "avg:" + std::to_string(result.used)};
    return result;
}

LabeledVectorSet split_by_direction(const EmbeddingSpace& joint, const DirectionVector& direction,
                                    std::int64_t min_count) {
    if (joint.dim() != direction.v.size())
        throw Error("joint space dimension does not match direction vector");
    if (min_count > 0 && !joint.has_counts())
        throw Error("count filter requested but the joint space has no counts");

    LabeledVectorSet set;
    set.label_names = {"original", "translationese"};
    std::vector<int> rows;
    for (int i = 0; i < joint.size(); ++i) {
        if (min_count > 0 && joint.counts()[i] < min_count) continue;
        rows.push_back(i);
    }
    if (rows.empty()) throw Error("no token passes the count filter");
    set.vectors.resize(static_cast<int>(rows.size()), joint.dim());
    set.ids.reserve(rows.size());
    set.labels.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Eigen::RowVectorXd row = joint.matrix().row(rows[i]);
        set.vectors.row(static_cast<int>(i)) = row;
        set.ids.push_back(joint.vocab()[rows[i]]);
        // cos(u, v) and u.v share a sign; the boundary cos = 0 labels as 1.
        set.labels.push_back(row * direction.v >= 0.0 ? 1 : 0);
    }
    return set;
}

namespace {

double parse_double(std::string_view text, const std::string& path, int line_no) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw Error(path + ": line " + std::to_string(line_no) + ": bad number '" +
                    std::string(text) + "'");
    return value;
}

void write_matrix_rows(std::ofstream& out, const Eigen::MatrixXd& m) {
    char buf[40];
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ' ';
            std::snprintf(buf, sizeof(buf), "%.12f", m(i, j));
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace

void save_map(const OrthogonalMap& map, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open file for writing: " + path);
    out << map.matrix.rows() << ' ' << map.matrix.cols() << '\n';
    out << "#preprocess=" << map.preprocessing << " dict=" << map.dictionary_size << '\n';
    write_matrix_rows(out, map.matrix);
    if (!out) throw Error("write failed: " + path);
}

OrthogonalMap load_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open map file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw Error(path + ": empty file");
    std::vector<std::string> header = split_tokens(line);
    if (header.size() != 2) throw Error(path + ": line 1: expected '<d> <d>'");
    const int rows = std::stoi(header[0]);
    const int cols = std::stoi(header[1]);

    OrthogonalMap map;
    map.matrix.resize(rows, cols);
    int line_no = 1;
    int row = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::vector<std::string> meta = split_tokens(line.substr(1));
            for (const std::string& item : meta) {
                if (item.rfind("preprocess=", 0) == 0) map.preprocessing = item.substr(11);
                if (item.rfind("dict=", 0) == 0) map.dictionary_size = std::stoi(item.substr(5));
            }
            continue;
        }
        if (row >= rows) throw Error(path + ": line " + std::to_string(line_no) + ": extra row");
        std::vector<std::string> parts = split_tokens(line);
        if (static_cast<int>(parts.size()) != cols)
            throw Error(path + ": line " + std::to_string(line_no) + ": expected " +
                        std::to_string(cols) + " values");
        for (int j = 0; j < cols; ++j) map.matrix(row, j) = parse_double(parts[j], path, line_no);
        ++row;
    }
    if (row != rows) throw Error(path + ": expected " + std::to_string(rows) + " matrix rows");
    return map;
}

void save_direction(const DirectionVector& direction, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open file for writing: " + path);
    out << direction.v.size() << '\n';
    out << "#provenance=" << direction.provenance << '\n';
    char buf[40];
    for (int j = 0; j < direction.v.size(); ++j) {
        if (j > 0) out << ' ';
        std::snprintf(buf, sizeof(buf), "%.12f", direction.v(j));
        out << buf;
    }
    out << '\n';
    if (!out) throw Error("write failed: " + path);
}

DirectionVector load_direction(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open direction file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw Error(path + ": empty file");
    const int d = std::stoi(line);
    DirectionVector direction;
    direction.v.resize(d);
    int line_no = 1;
    int filled = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("#provenance=", 0) == 0) direction.provenance = line.substr(12);
            continue;
        }
        std::vector<std::string> parts = split_tokens(line);
        if (static_cast<int>(parts.size()) != d)
            throw Error(path + ": line " + std::to_string(line_no) + ": expected " +
                        std::to_string(d) + " values");
        for (int j = 0; j < d; ++j) direction.v(j) = parse_double(parts[j], path, line_no);
        filled = 1;
    }
    if (!filled) throw Error(path + ": missing direction values");
    return direction;
}

}  // namespace detran
