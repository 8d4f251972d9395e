#include "g3ix/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace g3ix {

const char* const kCsvHeader =
    "u0,alpha1,alpha2,alpha3,beta1,beta2,beta3,"
    "n11,n12,n13,n22,n23,n33,eta,"
    "eta11,eta12,eta13,eta22,eta23,eta33,c2,valid";

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> row_values(const SampleRow& r) {
    std::vector<double> v;
    v.reserve(21);
    v.push_back(r.t);
    for (int a = 0; a < 3; ++a) v.push_back(r.state.alpha[a]);
    for (int a = 0; a < 3; ++a) v.push_back(r.state.beta[a]);
    for (int k = 0; k < Sym3::kPacked; ++k) v.push_back(r.n.packed(k));
    v.push_back(r.eta);
    for (int k = 0; k < Sym3::kPacked; ++k) v.push_back(r.eta_ab.packed(k));
    v.push_back(r.c2);
    return v;
}

SampleRow row_from_values(const std::vector<double>& v, bool valid) {
    SampleRow r;
    r.t = v[0];
    for (int a = 0; a < 3; ++a) r.state.alpha[a] = v[1 + a];
    for (int a = 0; a < 3; ++a) r.state.beta[a] = v[4 + a];
    for (int k = 0; k < Sym3::kPacked; ++k) r.n.packed(k) = v[7 + k];
    r.eta = v[13];
    for (int k = 0; k < Sym3::kPacked; ++k) r.eta_ab.packed(k) = v[14 + k];
    r.c2 = v[20];
    r.valid = valid;
    // The exported table carries no derivative columns; reconstruct them
    // from the solved unknowns.
    const GroupVec nb = r.n * r.state.beta;
    const GroupVec na = r.n * r.state.alpha;
    for (int a = 0; a < 3; ++a) {
        r.state.alpha_dot[a] = nb[a];
        r.state.beta_dot[a] = -na[a];
    }
    return r;
}

}  // namespace

std::string solution_to_csv(const SpacetimeSolution& sol) {
    std::ostringstream os;
    os << kCsvHeader << "\n";
    for (const auto& r : sol.samples()) {
        const auto vals = row_values(r);
        for (std::size_t i = 0; i < vals.size(); ++i) os << (i ? "," : "") << fmt(vals[i]);
        os << "," << (r.valid ? 1 : 0) << "\n";
    }
    return os.str();
}

std::vector<SampleRow> samples_from_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty table: missing header row");
    if (line.size() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader)
        throw IoError("unexpected table header: '" + line + "'");
    std::vector<SampleRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.size() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> vals;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                vals.push_back(std::stod(cell));
            } catch (const std::exception&) {
                std::ostringstream os;
                os << "bad numeric cell '" << cell << "' at line " << lineno;
                throw IoError(os.str());
            }
        }
        if (vals.size() != 22) {
            std::ostringstream os;
            os << "expected 22 columns at line " << lineno << ", got " << vals.size();
            throw IoError(os.str());
        }
        rows.push_back(row_from_values(vals, vals[21] != 0.0));
    }
    if (rows.size() < 2) throw IoError("table needs at least 2 sample rows");
    return rows;
}

nlohmann::ordered_json solution_to_json(const SpacetimeSolution& sol,
                                        nlohmann::ordered_json parameters) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json slots = nlohmann::ordered_json::array();
    for (NSlot s : free_slots(sol.case_id())) slots.push_back(slot_name(s));
    j["header"] = {{"case", case_name(sol.case_id())},
                   {"free_slots", std::move(slots)},
                   {"parameters", std::move(parameters)}};
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : sol.samples()) {
        nlohmann::ordered_json o;
        const char* names[21] = {"u0",    "alpha1", "alpha2", "alpha3", "beta1",
                                 "beta2", "beta3",  "n11",    "n12",    "n13",
                                 "n22",   "n23",    "n33",    "eta",    "eta11",
                                 "eta12", "eta13",  "eta22",  "eta23",  "eta33",
                                 "c2"};
        const auto vals = row_values(r);
        for (int i = 0; i < 21; ++i) {
            if (std::isnan(vals[i]))
                o[names[i]] = nullptr;
            else
                o[names[i]] = vals[i];
        }
        o["valid"] = r.valid;
        rows.push_back(std::move(o));
    }
    j["samples"] = std::move(rows);
    return j;
}

ImportedSolution solution_from_json(const nlohmann::ordered_json& j) {
    ImportedSolution out;
    try {
        out.case_label = j.at("header").at("case").get<std::string>();
        out.parameters = j.at("header").value("parameters", nlohmann::ordered_json());
        for (const auto& o : j.at("samples")) {
            std::vector<double> vals;
            const char* names[21] = {"u0",    "alpha1", "alpha2", "alpha3", "beta1",
                                     "beta2", "beta3",  "n11",    "n12",    "n13",
                                     "n22",   "n23",    "n33",    "eta",    "eta11",
                                     "eta12", "eta13",  "eta22",  "eta23",  "eta33",
                                     "c2"};
            for (const char* name : names) {
                const auto& cell = o.at(name);
                vals.push_back(cell.is_null() ? std::nan("") : cell.get<double>());
            }
            vals.push_back(0.0);
            out.samples.push_back(row_from_values(vals, o.at("valid").get<bool>()));
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed solution document: ") + e.what());
    }
    if (out.samples.size() < 2) throw IoError("table needs at least 2 sample rows");
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << content;
    if (!f) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for reading: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace g3ix
