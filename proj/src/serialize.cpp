#include "opflab/serialize.hpp"

namespace opflab {

Json matrix_to_json(const Matrix& m) {
    Json entries = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            entries.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

Matrix matrix_from_json(const Json& j) {
    const Eigen::Index rows = j.at("rows"), cols = j.at("cols");
    const Json& entries = j.at("entries");
    if (static_cast<Eigen::Index>(entries.size()) != rows * cols)
        throw std::invalid_argument("matrix_from_json: entry count mismatch");
    Matrix m(rows, cols);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index c = 0; c < cols; ++c, ++k)
            m(i, c) = Complex(entries[k][0].get<double>(), entries[k][1].get<double>());
    return m;
}

Json vector_to_json(const Vector& v) {
    Json entries = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        entries.push_back(Json::array({v(i).real(), v(i).imag()}));
    return entries;
}

Vector vector_from_json(const Json& j) {
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = Complex(j[i][0].get<double>(), j[i][1].get<double>());
    return v;
}

Json to_json(const MnElement& e) {
    return Json{{"d", e.d}, {"n", e.n}, {"matrix", matrix_to_json(e.mat)}};
}

MnElement mn_element_from_json(const Json& j) {
    return MnElement(j.at("d"), j.at("n"), matrix_from_json(j.at("matrix")));
}

Json to_json(const Opf& f) { return to_json(f.element); }

Opf opf_from_json(const Json& j) { return Opf(mn_element_from_json(j)); }

Json to_json(const Measurement& m) {
    Json outcomes = Json::array();
    for (const Opf& f : m.outcomes) outcomes.push_back(matrix_to_json(f.mat()));
    return Json{{"d", m.d()}, {"n", m.n()}, {"outcomes", std::move(outcomes)}};
}

Measurement measurement_from_json(const Json& j) {
    const int d = j.at("d"), n = j.at("n");
    std::vector<Opf> fs;
    for (const Json& o : j.at("outcomes")) fs.emplace_back(MnElement(d, n, matrix_from_json(o)));
    return Measurement(std::move(fs));
}

Json to_json(const Ensemble& e) {
    Json members = Json::array();
    for (const auto& [k, p] : e.members)
        members.push_back(Json{{"p", p}, {"ket", vector_to_json(k.amplitudes)}});
    return Json{{"d", e.d()}, {"members", std::move(members)}};
}

Ensemble ensemble_from_json(const Json& j) {
    std::vector<std::pair<Ket, double>> members;
    for (const Json& m : j.at("members"))
        members.emplace_back(Ket(vector_from_json(m.at("ket"))), m.at("p").get<double>());
    return Ensemble(std::move(members));
}

Json to_json(const AxiomReport& r) {
    Json checks = Json::array();
    for (const AxiomCheck& c : r.checks)
        checks.push_back(Json{{"axiom", c.axiom},
                              {"max_deviation", c.max_deviation},
                              {"tol", c.tol},
                              {"pass", c.pass}});
    return Json{{"star", r.star}, {"a", r.a},       {"b", r.b},
                {"trials", r.trials}, {"seed", r.seed}, {"tol", r.tol},
                {"checks", std::move(checks)}};
}

Json to_json(const AssocCertificate& c) {
    return Json{{"star", c.star},
                {"dims", Json::array({c.a, c.b, c.c})},
                {"seed", c.seed},
                {"trial_index", c.trial_index},
                {"operators",
                 Json{{"f", matrix_to_json(c.f)}, {"g", matrix_to_json(c.g)},
                      {"h", matrix_to_json(c.h)}}},
                {"state", vector_to_json(c.psi)},
                {"lhs", c.lhs},
                {"rhs", c.rhs},
                {"gap", c.gap}};
}

AssocCertificate assoc_certificate_from_json(const Json& j) {
    AssocCertificate c;
    c.star = j.at("star");
    c.a = j.at("dims")[0];
    c.b = j.at("dims")[1];
    c.c = j.at("dims")[2];
    c.seed = j.at("seed");
    c.trial_index = j.at("trial_index");
    c.f = matrix_from_json(j.at("operators").at("f"));
    c.g = matrix_from_json(j.at("operators").at("g"));
    c.h = matrix_from_json(j.at("operators").at("h"));
    c.psi = vector_from_json(j.at("state"));
    c.lhs = j.at("lhs");
    c.rhs = j.at("rhs");
    c.gap = j.at("gap");
    return c;
}

Json to_json(const ProbeReport& r) {
    Json dims = Json::object();
    for (const auto& [k, v] : r.dims) dims[k] = v;
    Json cal = Json::object();
    for (const auto& [j, v] : r.calibration) cal[std::to_string(j)] = v;
    auto spectrum = [](const std::vector<SpectrumLine>& lines) {
        Json out = Json::array();
        for (const auto& l : lines)
            out.push_back(Json{{"value", l.value}, {"multiplicity", l.multiplicity}});
        return out;
    };
    Json assertions = Json::array();
    for (const auto& a : r.assertions)
        assertions.push_back(Json{{"name", a.name},
                                  {"pass", a.pass},
                                  {"metric", a.metric},
                                  {"detail", a.detail}});
    return Json{{"kind", r.kind},
                {"dims", std::move(dims)},
                {"seed", r.seed},
                {"span_rank", r.span_rank},
                {"control_rank", r.control_rank},
                {"span_spectrum", spectrum(r.span_spectrum)},
                {"control_spectrum", spectrum(r.control_spectrum)},
                {"calibration", std::move(cal)},
                {"assertions", std::move(assertions)}};
}

}  // namespace opflab
