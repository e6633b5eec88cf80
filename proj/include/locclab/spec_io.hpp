// spec_io.hpp
// JSON state-set files: dimension, base state ("phi_plus" or an explicit
// amplitude matrix), unitaries (weyl indices or explicit matrices) and the
// protocol direction. Complex numbers are two-element arrays [re, im].

#pragma once

#include <fstream>
#include <optional>

#include <json.hpp>

#include "locclab/core.hpp"

namespace locclab {

struct StateSetSpec {
    int d = 0;
    bool basePhiPlus = true;
    Mat baseMatrix;  // used when basePhiPlus is false
    struct UnitaryEntry {
        std::optional<WeylIndex> weyl;  // set for kind "weyl"
        Mat matrix;                     // set for kind "matrix"
    };
    std::vector<UnitaryEntry> unitaries;
    Direction direction = Direction::AtoB;

    bool allWeyl() const {
        for (const auto& u : unitaries)
            if (!u.weyl) return false;
        return !unitaries.empty();
    }

    std::vector<WeylIndex> weylIndices() const {
        std::vector<WeylIndex> out;
        for (const auto& u : unitaries) {
            if (!u.weyl) throw std::invalid_argument("weylIndices: non-weyl unitary present");
            out.push_back(*u.weyl);
        }
        return out;
    }

    StateSet toStateSet() const {
        StateSet ss;
        if (basePhiPlus) {
            ss.dA = ss.dB = d;
            ss.base = phi_plus(d);
        } else {
            ss.dA = baseMatrix.rows;
            ss.dB = baseMatrix.cols;
            ss.base.dA = ss.dA;
            ss.base.dB = ss.dB;
            ss.base.amplitudes = baseMatrix;
        }
        ss.direction = direction;
        for (const auto& u : unitaries)
            ss.unitaries.push_back(u.weyl ? make_weyl(*u.weyl) : u.matrix);
        ss.validate();
        return ss;
    }
};

namespace detail {

inline cxd json_to_complex(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw std::invalid_argument("complex numbers must be [re, im] arrays");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline nlohmann::json complex_to_json(const cxd& v) {
    return nlohmann::json::array({v.real(), v.imag()});
}

inline Mat json_to_matrix(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix must be a nonempty array of rows");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(j[static_cast<size_t>(r)].size()) != cols)
            throw std::invalid_argument("matrix rows have inconsistent lengths");
        for (int c = 0; c < cols; ++c) m(r, c) = json_to_complex(j[static_cast<size_t>(r)][static_cast<size_t>(c)]);
    }
    return m;
}

inline nlohmann::json matrix_to_json(const Mat& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < m.rows; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < m.cols; ++c) row.push_back(complex_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detail

inline StateSetSpec parse_state_set_spec(const nlohmann::json& j) {
    StateSetSpec spec;
    if (!j.contains("d") || !j["d"].is_number_integer())
        throw std::invalid_argument("missing or non-integer field 'd'");
    spec.d = j["d"].get<int>();
    if (spec.d < 1) throw std::invalid_argument("'d' must be positive");

    if (!j.contains("base")) throw std::invalid_argument("missing field 'base'");
    if (j["base"].is_string()) {
        if (j["base"].get<std::string>() != "phi_plus")
            throw std::invalid_argument("string base must be the literal \"phi_plus\"");
        spec.basePhiPlus = true;
    } else {
        spec.basePhiPlus = false;
        spec.baseMatrix = detail::json_to_matrix(j["base"]);
        if (spec.baseMatrix.cols != spec.d)
            throw std::invalid_argument("base matrix column count must equal d");
    }

    const std::string dir = j.value("direction", std::string("AtoB"));
    if (dir == "AtoB")
        spec.direction = Direction::AtoB;
    else if (dir == "BtoA")
        spec.direction = Direction::BtoA;
    else
        throw std::invalid_argument("direction must be \"AtoB\" or \"BtoA\"");

    if (!j.contains("unitaries") || !j["unitaries"].is_array() || j["unitaries"].empty())
        throw std::invalid_argument("missing or empty field 'unitaries'");
    for (const auto& u : j["unitaries"]) {
        const std::string kind = u.value("kind", std::string());
        StateSetSpec::UnitaryEntry entry;
        if (kind == "weyl") {
            entry.weyl = WeylIndex{u.at("n").get<int>(), u.at("m").get<int>(), spec.d};
            entry.weyl->validate();
        } else if (kind == "matrix") {
            entry.matrix = detail::json_to_matrix(u.at("rows"));
            if (entry.matrix.rows != spec.d || entry.matrix.cols != spec.d)
                throw std::invalid_argument("unitary matrix must be d x d");
        } else {
            throw std::invalid_argument("unitary kind must be \"weyl\" or \"matrix\"");
        }
        spec.unitaries.push_back(std::move(entry));
    }
    return spec;
}

inline StateSetSpec load_state_set_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open spec file: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& ex) {
        throw std::invalid_argument(path + ": " + ex.what());
    }
    try {
        return parse_state_set_spec(j);
    } catch (const std::exception& ex) {
        throw std::invalid_argument(path + ": " + ex.what());
    }
}

inline nlohmann::json state_set_spec_to_json(const StateSetSpec& spec) {
    nlohmann::json j;
    j["d"] = spec.d;
    if (spec.basePhiPlus)
        j["base"] = "phi_plus";
    else
        j["base"] = detail::matrix_to_json(spec.baseMatrix);
    j["direction"] = spec.direction == Direction::AtoB ? "AtoB" : "BtoA";
    j["unitaries"] = nlohmann::json::array();
    for (const auto& u : spec.unitaries) {
        nlohmann::json e;
        if (u.weyl) {
            e["kind"] = "weyl";
            e["n"] = u.weyl->n;
            e["m"] = u.weyl->m;
        } else {
            e["kind"] = "matrix";
            e["rows"] = detail::matrix_to_json(u.matrix);
        }
        j["unitaries"].push_back(std::move(e));
    }
    return j;
}

}  // namespace locclab
