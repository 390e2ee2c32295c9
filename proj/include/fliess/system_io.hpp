#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fliess/error.hpp"
#include "fliess/multipoly.hpp"
#include "fliess/rational.hpp"
#include "fliess/system.hpp"

namespace fliess {

namespace detail {

// Exact scalars only: JSON integers pass through, strings may carry
// rationals like "1/2", floats are refused so no binary rounding can
// sneak into an exact computation.
inline Rat json_rat(const nlohmann::json& v, const std::string& where) {
    if (v.is_number_integer()) return Rat(v.get<long>());
    if (v.is_string()) return rat_parse(v.get<std::string>());
    if (v.is_number_float())
        throw parse_error(where + ": floating-point values are not accepted, "
                          "write the value as a string rational");
    throw parse_error(where + ": expected an integer or a rational string");
}

}  // namespace detail

// Reads a system from its JSON description:
//   {
//     "N": 2, "M": 1,
//     "vars": ["x1", "x2"],                  // optional, defaults to x1..xN
//     "derivations": [["b11", "b12"], ...],  // M rows of N polynomial strings
//     "observation": "x1 + x2^2",
//     "x0": [0, "1/2"]
//   }
inline System system_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("invalid JSON: ") + e.what());
    }
    try {
        System sys;
        if (!doc.is_object()) throw parse_error("top-level JSON value must be an object");
        if (!doc.contains("N") || !doc["N"].is_number_integer())
            throw parse_error("missing integer field \"N\"");
        if (!doc.contains("M") || !doc["M"].is_number_integer())
            throw parse_error("missing integer field \"M\"");
        sys.N = doc["N"].get<int>();
        sys.M = doc["M"].get<int>();
        if (sys.N < 1) throw parse_error("\"N\" must be at least 1");
        if (sys.M < 1) throw parse_error("\"M\" must be at least 1");

        if (doc.contains("vars")) {
            if (!doc["vars"].is_array())
                throw parse_error("\"vars\" must be an array of names");
            for (const auto& v : doc["vars"]) {
                if (!v.is_string()) throw parse_error("\"vars\" entries must be strings");
                sys.varnames.push_back(v.get<std::string>());
            }
            if ((int)sys.varnames.size() != sys.N)
                throw parse_error("\"vars\" must list exactly N names");
        } else {
            for (int j = 1; j <= sys.N; ++j)
                sys.varnames.push_back("x" + std::to_string(j));
        }

        if (!doc.contains("derivations") || !doc["derivations"].is_array() ||
            (int)doc["derivations"].size() != sys.M)
            throw parse_error("\"derivations\" must be an array of M coefficient rows");
        for (const auto& row : doc["derivations"]) {
            if (!row.is_array() || (int)row.size() != sys.N)
                throw parse_error("each derivation row must list N polynomial strings");
            Derivation d;
            for (const auto& cell : row) {
                if (!cell.is_string())
                    throw parse_error("derivation coefficients must be polynomial strings");
                d.coeffs.push_back(poly_parse(cell.get<std::string>(), sys.varnames));
            }
            sys.derivations.push_back(std::move(d));
        }

        if (!doc.contains("observation") || !doc["observation"].is_string())
            throw parse_error("missing polynomial string field \"observation\"");
        sys.observation = poly_parse(doc["observation"].get<std::string>(), sys.varnames);

        if (!doc.contains("x0") || !doc["x0"].is_array() || (int)doc["x0"].size() != sys.N)
            throw parse_error("\"x0\" must be an array of N exact scalars");
        for (std::size_t j = 0; j < doc["x0"].size(); ++j)
            sys.x0.push_back(
                detail::json_rat(doc["x0"][j], "x0[" + std::to_string(j) + "]"));

        sys.validate();
        return sys;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("invalid system description: ") + e.what());
    } catch (const context_error& e) {
        throw parse_error(std::string("inconsistent system description: ") + e.what());
    }
}

inline System system_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open system file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return system_from_json(buf.str());
}

}  // namespace fliess
